#include "optomech/squeezing_dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "optomech/errors.hpp"

namespace optomech {

namespace {

using State = std::array<double, 5>;  // p11, dp11, ip22, dip22, j

void require_positive_stiffness(double d2) {
    if (!(1.0 + 4.0 * d2 > 0.0))
        throw UnsupportedRegimeError("constant squeezing needs 1 + 4 d2 > 0 (d2 = " +
                                     std::to_string(d2) + ")");
}

State rhs(const SqueezingProfile& profile, double tau, const State& y) {
    const double k = 1.0 + 4.0 * d2_at(profile, tau);
    return {y[1], -k * y[0], y[3], -k * y[2], k * y[0]};
}

State load(const QuadraticSolution& s, std::size_t i) {
    return {s.p11[i], s.dp11[i], s.ip22[i], s.dip22[i], s.j[i]};
}

void store(QuadraticSolution& s, std::size_t i, const State& y) {
    s.p11[i] = y[0];
    s.dp11[i] = y[1];
    s.ip22[i] = y[2];
    s.dip22[i] = y[3];
    s.j[i] = y[4];
}

}  // namespace

double d2_at(const SqueezingProfile& profile, double tau) {
    struct {
        double tau;
        double operator()(const Constant& c) const { return c.d2; }
        double operator()(const Modulated& m) const { return m.d2 * std::cos(m.omega0 * tau); }
        double operator()(const Tabulated& t) const { return t.samples(tau); }
    } visitor{tau};
    return std::visit(visitor, profile);
}

double max_abs_d2(const SqueezingProfile& profile, double /*tau_max*/) {
    struct {
        double operator()(const Constant& c) const { return std::abs(c.d2); }
        double operator()(const Modulated& m) const { return std::abs(m.d2); }
        double operator()(const Tabulated& t) const { return t.samples.max_abs(); }
    } visitor;
    return std::visit(visitor, profile);
}

double zeta_eff(const SqueezingProfile& profile, double tau_max) {
    return std::sqrt(1.0 + 4.0 * max_abs_d2(profile, tau_max));
}

QuadraticPoint constant_solution(double d2, double tau) {
    require_positive_stiffness(d2);
    const double zeta = std::sqrt(1.0 + 4.0 * d2);
    return {std::cos(zeta * tau), std::sin(zeta * tau) / zeta};
}

QuadraticSolution solve_quadratic(const SqueezingProfile& profile, double tau_max,
                                  const SolverOptions& options) {
    if (!(tau_max > 0.0)) throw DomainError("tau_max must be positive");
    if (!(options.resolution > 0.0) || options.min_samples < 4)
        throw DomainError("grid resolution below minimum");
    if (const auto* c = std::get_if<Constant>(&profile)) require_positive_stiffness(c->d2);
    if (const auto* t = std::get_if<Tabulated>(&profile); t && !t->samples.covers(0.0, tau_max))
        throw DomainError("tabulated squeezing profile does not cover [0, tau_max]");
    if (const auto* m = std::get_if<Modulated>(&profile); m && !std::isfinite(m->omega0))
        throw DomainError("modulation frequency must be finite");

    const double zeta = zeta_eff(profile, tau_max);
    const auto n = std::max<std::size_t>(
        static_cast<std::size_t>(std::ceil(options.resolution * zeta * tau_max)),
        options.min_samples - 1);

    QuadraticSolution sol;
    sol.profile = profile;
    sol.grid.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) sol.grid[i] = tau_max * static_cast<double>(i) / n;
    sol.grid[n] = tau_max;
    for (auto* v : {&sol.p11, &sol.dp11, &sol.ip22, &sol.dip22, &sol.j}) v->resize(n + 1);

    if (const auto* c = std::get_if<Constant>(&profile); c && !options.force_integration) {
        const double z = std::sqrt(1.0 + 4.0 * c->d2);
        for (std::size_t i = 0; i <= n; ++i) {
            const double ph = z * sol.grid[i];
            const double s = std::sin(ph), co = std::cos(ph);
            store(sol, i, {co, -z * s, s / z, co, z * s});
        }
        return sol;
    }

    namespace ode = boost::numeric::odeint;
    State y{1.0, 0.0, 0.0, 1.0, 0.0};
    auto system = [&profile](const State& x, State& dxdt, double t) { dxdt = rhs(profile, t, x); };
    std::size_t idx = 0;
    auto observer = [&sol, &idx](const State& x, double) { store(sol, idx++, x); };
    auto stepper = ode::make_dense_output(options.abs_tol, options.rel_tol, ode::runge_kutta_dopri5<State>());
    ode::integrate_times(stepper, system, y, sol.grid.begin(), sol.grid.end(), 0.01 / zeta, observer);
    if (idx != n + 1) throw Error("quadratic-sector integration stopped early");
    return sol;
}

bool two_scale_valid(double d2, double tau) {
    return std::abs(d2) * std::cosh(d2 * tau) <= 0.1;
}

TwoScalePoint two_scale_solution(double d2, double tau) {
    if (d2 == 1.0) throw DomainError("two-scale form is singular at d2 = 1");
    const double c = std::cos(tau), s = std::sin(tau);
    const double ch = std::cosh(d2 * tau), sh = std::sinh(d2 * tau);
    TwoScalePoint out;
    out.p11 = c * ch - s * sh;
    out.ip22 = -(c * sh - s * ch) / (1.0 - d2);
    out.validity_warning = !two_scale_valid(d2, tau);
    return out;
}

MathieuParams mathieu_params(double d2, double omega0) {
    if (omega0 == 0.0) throw DomainError("Mathieu map needs omega0 != 0");
    const double w2 = omega0 * omega0;
    return {4.0 / w2, -8.0 * d2 / w2};
}

QuadraticState state_at(const QuadraticSolution& sol, double tau) {
    const double t_end = sol.tau_max();
    const double slack = 1e-12 * std::max(1.0, t_end);
    if (!(tau >= -slack && tau <= t_end + slack))
        throw DomainError("tau = " + std::to_string(tau) + " outside solution grid [0, " +
                          std::to_string(t_end) + "]");
    tau = std::clamp(tau, 0.0, t_end);

    const double h = sol.step();
    const std::size_t last = sol.size() - 1;
    auto k = std::min(static_cast<std::size_t>(tau / h), last - 1);
    const double t0 = sol.grid[k];
    const double s = (tau - t0) / h;
    const State y0 = load(sol, k), y1 = load(sol, k + 1);
    if (s == 0.0) return {y0[0], y0[1], y0[2], y0[3], y0[4]};
    const State f0 = rhs(sol.profile, t0, y0), f1 = rhs(sol.profile, sol.grid[k + 1], y1);

    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    State y{};
    for (std::size_t c = 0; c < y.size(); ++c)
        y[c] = h00 * y0[c] + h10 * h * f0[c] + h01 * y1[c] + h11 * h * f1[c];
    return {y[0], y[1], y[2], y[3], y[4]};
}

cplx xi_at(const QuadraticSolution& sol, double tau) {
    const auto st = state_at(sol, tau);
    return {st.p11, -st.ip22};
}

cplx xi_dot_at(const QuadraticSolution& sol, double tau) {
    const auto st = state_at(sol, tau);
    return {st.dp11, -st.dip22};
}

Bogoliubov bogoliubov_from_xi(double tau, cplx xi, cplx xi_dot) {
    const cplx i{0.0, 1.0};
    return {tau, 0.5 * (xi + i * xi_dot), 0.5 * (std::conj(xi) + i * std::conj(xi_dot))};
}

Bogoliubov bogoliubov_at(const QuadraticSolution& sol, double tau) {
    const auto st = state_at(sol, tau);
    return bogoliubov_from_xi(tau, {st.p11, -st.ip22}, {st.dp11, -st.dip22});
}

double bogoliubov_residual(const Bogoliubov& b) {
    return std::abs(std::norm(b.alpha) - std::norm(b.beta) - 1.0);
}

double identity_residual(const QuadraticState& s) {
    return std::abs(s.p11 * s.dip22 + s.ip22 * s.j - 1.0);
}

}  // namespace optomech
