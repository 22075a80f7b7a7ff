#include "optomech/lie_decoupling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "optomech/errors.hpp"

namespace optomech {

namespace {

// Cumulative integral on a uniform grid. Each interval uses the cubic through
// its four nearest nodes, so the rule is fourth order at every node, not just
// at even ones.
std::vector<double> cumulative(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    std::vector<double> out(n, 0.0);
    const double w = h / 24.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double piece;
        if (i == 0)
            piece = w * (9 * f[0] + 19 * f[1] - 5 * f[2] + f[3]);
        else if (i + 2 == n)
            piece = w * (f[i - 2] - 5 * f[i - 1] + 19 * f[i] + 9 * f[i + 1]);
        else
            piece = w * (-f[i - 1] + 13 * f[i] + 13 * f[i + 1] - f[i + 2]);
        out[i + 1] = out[i] + piece;
    }
    return out;
}

double hermite(double y0, double r0, double y1, double r1, double h, double s) {
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * r0 + (-2 * s3 + 3 * s2) * y1 +
           (s3 - s2) * h * r1;
}

double zeta_of(double d2) {
    if (!(1.0 + 4.0 * d2 > 0.0))
        throw UnsupportedRegimeError("constant squeezing needs 1 + 4 d2 > 0 (d2 = " +
                                     std::to_string(d2) + ")");
    return std::sqrt(1.0 + 4.0 * d2);
}

}  // namespace

FCoefficientTable::FCoefficientTable(const QuadraticSolution& sol, const CouplingProfile& cp)
    : FCoefficientTable(sol, cp, sol.size()) {}

FCoefficientTable::FCoefficientTable(const QuadraticSolution& sol, const CouplingProfile& cp,
                                     std::size_t count) {
    if (sol.size() < 4) throw DomainError("solution grid needs at least four samples");
    count = std::clamp<std::size_t>(count, 4, sol.size());
    if (!cp.g.covers(0.0, sol.grid[count - 1]) || !cp.d1.covers(0.0, sol.grid[count - 1]))
        throw DomainError("tabulated coupling does not cover the evaluation range");

    std::vector<double> gr(count), gi(count), dr(count), di(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = sol.grid[i];
        const double g = cp.g(t), d1 = cp.d1(t);
        const double re = sol.p11[i], im = -sol.ip22[i];
        gr[i] = g * re;
        gi[i] = g * im;
        dr[i] = d1 * re;
        di[i] = d1 * im;
    }
    const double h = sol.step();
    const auto a = cumulative(gr, h), b = cumulative(gi, h);
    const auto c = cumulative(dr, h), d = cumulative(di, h);

    std::vector<double> na2_rate(count), na_rate(count);
    for (std::size_t i = 0; i < count; ++i) {
        na2_rate[i] = 2.0 * gi[i] * a[i];
        na_rate[i] = -2.0 * (di[i] * a[i] + gi[i] * c[i]);
    }
    const auto na2 = cumulative(na2_rate, h), na = cumulative(na_rate, h);

    step_ = h;
    values_.resize(count);
    rates_.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        values_[i] = {sol.grid[i], na[i], na2[i], c[i], -d[i], -a[i], b[i]};
        rates_[i] = {sol.grid[i], na_rate[i], na2_rate[i], dr[i], -di[i], -gr[i], gi[i]};
    }
}

FCoefficients FCoefficientTable::at(double tau) const {
    const double t_end = values_.back().tau;
    const double slack = 1e-12 * std::max(1.0, t_end);
    if (!(tau >= -slack && tau <= t_end + slack))
        throw DomainError("tau = " + std::to_string(tau) + " outside solution grid");
    tau = std::clamp(tau, 0.0, t_end);

    const std::size_t last = values_.size() - 1;
    const auto k = std::min(static_cast<std::size_t>(tau / step_), last - 1);
    const double u = (tau - values_[k].tau) / step_;
    if (u == 0.0) return values_[k];

    const auto& v0 = values_[k];
    const auto& v1 = values_[k + 1];
    const auto& r0 = rates_[k];
    const auto& r1 = rates_[k + 1];
    auto lerp = [&](double FCoefficients::*m) { return hermite(v0.*m, r0.*m, v1.*m, r1.*m, step_, u); };
    return {tau,
            lerp(&FCoefficients::f_na),
            lerp(&FCoefficients::f_na2),
            lerp(&FCoefficients::f_bp),
            lerp(&FCoefficients::f_bm),
            lerp(&FCoefficients::f_nabp),
            lerp(&FCoefficients::f_nabm)};
}

std::vector<FCoefficients> f_coefficient_series(const QuadraticSolution& sol,
                                                const CouplingProfile& couplings) {
    return FCoefficientTable(sol, couplings).values();
}

FCoefficients compute_f_coefficients(const QuadraticSolution& sol, const CouplingProfile& couplings,
                                     double tau) {
    if (sol.size() < 4) throw DomainError("solution grid needs at least four samples");
    const double t_end = sol.tau_max();
    if (!(tau >= -1e-12 * std::max(1.0, t_end) && tau <= t_end * (1.0 + 1e-12)))
        throw DomainError("tau = " + std::to_string(tau) + " outside solution grid");
    // Two nodes past the bracketing interval keep the interior stencil
    // identical to the full series.
    const auto k = static_cast<std::size_t>(std::max(0.0, tau) / sol.step());
    return FCoefficientTable(sol, couplings, k + 4).at(tau);
}

FCoefficients constant_squeezing_f(double g0, double d2, double tau) {
    const double z = zeta_of(d2);
    const double zt = z * tau;
    FCoefficients f;
    f.tau = tau;
    // (1 - sinc(2 zt)) tau written without the removable singularity.
    f.f_na2 = -(g0 * g0 / (z * z)) * (tau - std::sin(2.0 * zt) / (2.0 * z));
    f.f_nabp = -(g0 / z) * std::sin(zt);
    f.f_nabm = (g0 / (z * z)) * (std::cos(zt) - 1.0);
    return f;
}

double k_na_squared_constant(double g0, double d2, double tau) {
    const double z = zeta_of(d2);
    const double zt = z * tau;
    const double s = std::sin(zt);
    return (g0 * g0 / std::pow(z, 4)) *
           ((z * z + 1.0) * s * s + std::cos(2.0 * zt) - 2.0 * std::cos(zt) + 1.0);
}

FCoefficients resonant_f(double g0, double d2, double tau) {
    const double t = tau, t2 = tau * tau;
    const double s = std::sin(t), c = std::cos(t);
    const double s2t = std::sin(2.0 * t), c2t = std::cos(2.0 * t);
    const double sh2 = std::sin(0.5 * t) * std::sin(0.5 * t);
    const double dd = d2 * d2;

    FCoefficients f;
    f.tau = tau;
    // tau (sinc(2 tau) - 1) = sin(2 tau)/2 - tau
    f.f_na2 = g0 * g0 * (1.0 - d2) * (0.5 * s2t - t) +
              0.5 * g0 * g0 * dd * ((2.0 * t2 - 3.0) * s2t + 2.0 * t + 4.0 * t * c2t);
    f.f_nabp = -g0 * s - g0 * d2 * (t * c - s) - 0.5 * g0 * dd * ((t2 - 2.0) * s + 2.0 * t * c);
    f.f_nabm = -2.0 * g0 * sh2 + g0 * d2 * (t * s - 2.0 * sh2) +
               0.5 * g0 * dd * ((t2 - 2.0) * c - 2.0 * t * s + 2.0);
    return f;
}

double k_na_squared_resonant(double g0, double d2, double tau) {
    const double t = tau;
    const double g2 = g0 * g0;
    const double sh2 = std::sin(0.5 * t) * std::sin(0.5 * t);
    return 4.0 * g2 * sh2 + g2 * d2 * d2 * (t * t - 2.0 * (2.0 - t * t) * sh2) -
           2.0 * g2 * d2 *
               (t * (std::sin(t) - std::sin(2.0 * t)) + (std::cos(t) - std::cos(2.0 * t)) - 2.0 * sh2);
}

}  // namespace optomech
