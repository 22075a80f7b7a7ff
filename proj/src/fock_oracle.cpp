#include "optomech/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "optomech/errors.hpp"
#include "optomech/pipeline.hpp"

namespace optomech {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double norm_tol = 1e-8;
constexpr double tail_tol = 1e-8;

void require_cutoffs(const Cutoffs& cut) {
    if (cut.n_c < 2 || cut.n_m < 2) throw DomainError("Fock cutoffs must be at least 2");
}

Eigen::MatrixXd lowering(int n) {
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) l(k - 1, k) = std::sqrt(static_cast<double>(k));
    return l;
}

// Truncated b + b^dag and (b + b^dag)^2 with exact matrix elements of the
// untruncated operators (the square is not the square of the truncation).
struct MechanicalOps {
    Eigen::MatrixXd number, x, x2;

    explicit MechanicalOps(int n_m) {
        const Eigen::MatrixXd b = lowering(n_m);
        number = Eigen::MatrixXd::Zero(n_m, n_m);
        x2 = Eigen::MatrixXd::Zero(n_m, n_m);
        for (int m = 0; m < n_m; ++m) {
            number(m, m) = m;
            x2(m, m) = 2.0 * m + 1.0;
            if (m + 2 < n_m) {
                const double v = std::sqrt(static_cast<double>((m + 1) * (m + 2)));
                x2(m, m + 2) = v;
                x2(m + 2, m) = v;
            }
        }
        x = b + b.transpose();
    }
};

struct Coefficients {
    double d1, d2, g;
};

Coefficients coefficients_at(const SystemParams& p, double t) {
    return {p.coupling.d1(t), d2_at(p.squeezing, t), p.coupling.g(t)};
}

cplx frobenius(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
    return (x.conjugate().cwiseProduct(y)).sum();
}

}  // namespace

FockState coherent_product(const InitialState& init, const Cutoffs& cut) {
    require_cutoffs(cut);
    auto coherent = [](cplx mu, int n) {
        Eigen::VectorXcd v(n);
        v(0) = std::exp(-0.5 * std::norm(mu));
        for (int k = 1; k < n; ++k) v(k) = v(k - 1) * mu / std::sqrt(static_cast<double>(k));
        return v;
    };
    FockState psi;
    psi.amp = coherent(init.mu_c, cut.n_c) * coherent(init.mu_m, cut.n_m).transpose();
    return psi;
}

Eigen::MatrixXcd build_hamiltonian(const SystemParams& params, double tau, const Cutoffs& cut) {
    require_cutoffs(cut);
    const MechanicalOps ops(cut.n_m);
    const auto c = coefficients_at(params, tau);
    const int nm = cut.n_m;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(cut.n_c * nm, cut.n_c * nm);
    for (int n = 0; n < cut.n_c; ++n) {
        Eigen::MatrixXd block = ops.number + c.d1 * ops.x + c.d2 * ops.x2 - c.g * n * ops.x;
        block.diagonal().array() += params.omega_c * n;
        h.block(n * nm, n * nm, nm, nm) = block.cast<cplx>();
    }
    return h;
}

double tail_weight(const FockState& psi) {
    const int nc = psi.n_c(), nm = psi.n_m();
    const int tc = std::max(1, static_cast<int>(std::ceil(0.1 * nc)));
    const int tm = std::max(1, static_cast<int>(std::ceil(0.1 * nm)));
    const Eigen::MatrixXd w = psi.amp.cwiseAbs2();
    // Union of the two bands, corner counted once.
    const double rows = w.bottomRows(tc).sum();
    const double cols = w.rightCols(tm).sum();
    const double corner = w.bottomRightCorner(tc, tm).sum();
    return (rows + cols - corner) / w.sum();
}

double oracle_step(const SystemParams& params, double tau_final, int n_c) {
    double gmax = 0.0;
    if (const double* g = std::get_if<double>(&params.coupling.g.source))
        gmax = std::abs(*g);
    else
        gmax = std::get<TabulatedSeries>(params.coupling.g.source).max_abs();
    const double ze = zeta_eff(params.squeezing, tau_final);
    const double fastest = std::max({std::abs(params.omega_c), ze * ze, gmax * std::sqrt(double(n_c))});
    return 2.0 * std::numbers::pi / (200.0 * fastest);
}

FockState evolve(const FockState& psi0, const SystemParams& params, double tau_final, double dt,
                 EvolveDiagnostics* diag) {
    if (!(tau_final >= 0.0)) throw DomainError("tau_final must be non-negative");
    if (!(dt > 0.0)) throw DomainError("time step must be positive");
    const int nc = psi0.n_c(), nm = psi0.n_m();
    require_cutoffs({nc, nm});

    const int steps = tau_final == 0.0 ? 0 : static_cast<int>(std::ceil(tau_final / dt - 1e-12));
    const double h = steps ? tau_final / steps : 0.0;
    const double norm0 = psi0.norm2();

    FockState psi = psi0;
    EvolveDiagnostics d;
    d.steps = steps;
    d.dt = h;
    d.max_tail = tail_weight(psi);

    std::vector<double> sq(nm + 1);
    for (int m = 0; m <= nm; ++m) sq[m] = std::sqrt(double(m));
    Eigen::VectorXcd v(nm), term(nm), next(nm);
    for (int s = 0; s < steps; ++s) {
        const auto c = coefficients_at(params, (s + 0.5) * h);
        // Photon number is conserved, so H is block diagonal in n; each block
        // is pentadiagonal in the phonon number.
        for (int n = 0; n < nc; ++n) {
            const double lin = c.d1 - c.g * n;
            const double d_lo = params.omega_c * n + c.d2;
            const double d_hi = d_lo + (nm - 1) * (1.0 + 2.0 * c.d2);
            const double shift = 0.5 * (d_lo + d_hi);
            const double radius = 0.5 * std::abs(d_hi - d_lo) + 2.0 * std::abs(lin) * sq[nm] +
                                  2.0 * std::abs(c.d2) * nm;
            auto apply = [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
                for (int m = 0; m < nm; ++m) {
                    cplx acc = (params.omega_c * n + m + c.d2 * (2.0 * m + 1.0) - shift) * x(m);
                    if (m >= 1) acc += lin * sq[m] * x(m - 1);
                    if (m + 1 < nm) acc += lin * sq[m + 1] * x(m + 1);
                    if (m >= 2) acc += c.d2 * sq[m] * sq[m - 1] * x(m - 2);
                    if (m + 2 < nm) acc += c.d2 * sq[m + 1] * sq[m + 2] * x(m + 2);
                    y(m) = acc;
                }
            };
            // exp(-i H h) v by a Taylor series on substeps with |H - shift| h_sub <= 1.
            const int sub = std::max(1, static_cast<int>(std::ceil(radius * h)));
            const double hs = h / sub;
            v = psi.amp.row(n).transpose();
            for (int k = 0; k < sub; ++k) {
                term = v;
                for (int j = 1; j < 60; ++j) {
                    apply(term, next);
                    term = next * cplx(0.0, -hs / j);
                    v += term;
                    if (term.squaredNorm() <= 1e-34 * v.squaredNorm()) break;
                }
            }
            psi.amp.row(n) = std::exp(-I * (shift * h)) * v.transpose();
        }
        d.max_tail = std::max(d.max_tail, tail_weight(psi));
    }
    d.norm_drift = std::abs(psi.norm2() - norm0);
    if (diag) *diag = d;

    if (d.norm_drift > norm_tol)
        throw FlaggedRunError(FlaggedRunError::Reason::norm_drift,
                              "norm drift " + std::to_string(d.norm_drift) + " exceeds 1e-8");
    if (d.max_tail > tail_tol)
        throw FlaggedRunError(FlaggedRunError::Reason::cutoff_insufficient,
                              "cutoff-insufficient: tail weight " + std::to_string(d.max_tail) +
                                  " with (n_c, n_m) = (" + std::to_string(nc) + ", " +
                                  std::to_string(nm) + ")");
    return psi;
}

MomentSet measure(const FockState& psi, double tau, double omega_c) {
    const int nc = psi.n_c(), nm = psi.n_m();
    Eigen::MatrixXcd a = psi.amp;
    for (int n = 0; n < nc; ++n) a.row(n) *= std::exp(I * omega_c * double(n) * tau);
    a /= std::sqrt(a.squaredNorm());

    const Eigen::MatrixXcd la = lowering(nc).cast<cplx>();
    const Eigen::MatrixXcd lb = lowering(nm).cast<cplx>();
    const Eigen::MatrixXcd a_psi = la * a;                 // a |psi>
    const Eigen::MatrixXcd b_psi = a * lb.transpose();     // b |psi>
    const Eigen::MatrixXcd bd_psi = a * lb;                // b^dag |psi>

    MomentSet m;
    m.tau = tau;
    m.a = frobenius(a, a_psi);
    m.b = frobenius(a, b_psi);
    m.a2 = frobenius(a, la * a_psi);
    m.b2 = frobenius(a, b_psi * lb.transpose());
    m.ab = frobenius(a, la * b_psi);
    m.ab_dag = frobenius(a, la * bd_psi);
    m.na = a_psi.squaredNorm();
    m.nb = b_psi.squaredNorm();
    return m;
}

FockState to_rotating_frame(const FockState& psi, double tau, double omega_c) {
    FockState out = psi;
    for (int n = 0; n < psi.n_c(); ++n) out.amp.row(n) *= std::exp(I * (omega_c * n * tau));
    return out;
}

FockState analytic_ket(const FCoefficients& f, const Bogoliubov& bog, const InitialState& init,
                       const Cutoffs& cut) {
    require_cutoffs(cut);
    const cplx al = bog.alpha, be = bog.beta;
    const cplx alc = std::conj(al);
    const cplx k = f.k(), kn = f.k_na();
    const cplx mm = init.mu_m;

    const double phase0 = -(f.f_bp * f.f_bm + std::imag(k * mm));
    const double phase2 = -(f.f_na2 + f.f_nabp * f.f_nabm);
    const double phase1 = -(f.f_na + f.f_nabp * f.f_bm + f.f_nabm * f.f_bp + std::imag(kn * mm));

    FockState psi;
    psi.amp = Eigen::MatrixXcd::Zero(cut.n_c, cut.n_m);
    cplx cn = std::exp(-0.5 * std::norm(init.mu_c));
    for (int n = 0; n < cut.n_c; ++n) {
        if (n > 0) cn *= init.mu_c / std::sqrt(double(n));
        const double dn = n;
        const cplx weight = cn * std::exp(I * (phase0 + phase1 * dn + phase2 * dn * dn));

        // U_sq |phi> is the eigenstate of alpha^* b - beta b^dag with eigenvalue
        // phi, i.e. D(alpha phi + beta phi^*) acting on the squeezed vacuum.
        const cplx phi = std::conj(k) + dn * std::conj(kn) + mm;
        const cplx shifted = al * phi + be * std::conj(phi);
        Eigen::VectorXcd c(cut.n_m);
        c(0) = std::exp(-0.5 * std::norm(shifted) + be * std::conj(shifted) * std::conj(shifted) / (2.0 * alc)) /
               std::sqrt(std::abs(al));
        for (int m = 0; m + 1 < cut.n_m; ++m) {
            cplx next = phi * c(m);
            if (m > 0) next += be * std::sqrt(double(m)) * c(m - 1);
            c(m + 1) = next / (alc * std::sqrt(double(m + 1)));
        }
        psi.amp.row(n) = weight * c.transpose();
    }
    if (const double t = tail_weight(psi); t > tail_tol)
        throw FlaggedRunError(FlaggedRunError::Reason::cutoff_insufficient,
                              "cutoff-insufficient: analytic ket tail weight " + std::to_string(t));
    return psi;
}

double fidelity(const FockState& x, const FockState& y) {
    if (x.n_c() != y.n_c() || x.n_m() != y.n_m()) throw ConsistencyError("Fock cutoffs differ");
    return std::norm(frobenius(x.amp, y.amp)) / (x.norm2() * y.norm2());
}

Eigen::MatrixXcd reduced_mechanical(const FockState& psi) {
    Eigen::MatrixXcd rho = psi.amp.transpose() * psi.amp.conjugate();
    return rho / rho.trace().real();
}

double purity(const Eigen::MatrixXcd& rho) { return (rho * rho).trace().real(); }

int cutoff_for_amplitude(double r) { return static_cast<int>(std::ceil(r * r + 6.0 * r + 8.0)); }

Cutoffs default_cutoffs(const SystemParams& params, const InitialState& init, double tau_final) {
    Cutoffs cut;
    cut.n_c = cutoff_for_amplitude(std::abs(init.mu_c));
    // Photon sectors lighter than 1e-9 cannot push the tail monitor past its
    // threshold, so only heavier ones set the phonon reach.
    const double nbar = std::norm(init.mu_c);
    int n_heavy = 0;
    for (double w = std::exp(-nbar); n_heavy + 1 < cut.n_c; ) {
        w *= nbar / (n_heavy + 1);
        if (w < 1e-9 && n_heavy + 1 > nbar) break;
        ++n_heavy;
    }
    double reach = std::abs(init.mu_m);
    if (tau_final > 0.0) {
        // Sizing only: the tail monitor certifies the result.
        const Evolution ev(params, tau_final);
        constexpr int samples = 64;
        for (int s = 1; s <= samples; ++s) {
            const double t = tau_final * s / samples;
            const auto f = ev.table().at(t);
            const auto bog = bogoliubov_at(ev.quadratic(), t);
            const double spread = std::abs(bog.alpha) + std::abs(bog.beta);
            const double phi = std::abs(std::conj(f.k()) + init.mu_m) + n_heavy * std::abs(f.k_na());
            reach = std::max(reach, spread * phi + std::abs(bog.beta));
        }
    }
    cut.n_m = cutoff_for_amplitude(reach);
    return cut;
}

double max_relative_difference(const MomentSet& x, const MomentSet& ref) {
    auto rel = [](cplx v, cplx r) { return std::abs(v - r) / std::max(std::abs(r), 1e-6); };
    double worst = 0.0;
    for (auto [v, r] : {std::pair{x.a, ref.a}, {x.b, ref.b}, {x.a2, ref.a2}, {x.b2, ref.b2},
                        {x.ab, ref.ab}, {x.ab_dag, ref.ab_dag}, {cplx(x.na), cplx(ref.na)},
                        {cplx(x.nb), cplx(ref.nb)}})
        worst = std::max(worst, rel(v, r));
    return worst;
}

OracleReport run_oracle(const SystemParams& params, const InitialState& init, double tau,
                        const OracleOptions& options) {
    Cutoffs cut = options.cutoffs ? *options.cutoffs : default_cutoffs(params, init, tau);
    for (int attempt = 0;; ++attempt) {
        try {
            OracleReport rep;
            rep.cutoffs = cut;
            const double dt = options.dt > 0.0 ? options.dt : oracle_step(params, tau, cut.n_c);
            const auto psi0 = coherent_product(init, cut);
            rep.state = evolve(psi0, params, tau, dt, &rep.diag);
            rep.moments = measure(rep.state, tau, params.omega_c);
            if (options.halving_check && rep.diag.steps > 0) {
                const auto fine = evolve(psi0, params, tau, 0.5 * rep.diag.dt);
                rep.halving_change = max_relative_difference(rep.moments, measure(fine, tau, params.omega_c));
                if (rep.halving_change > options.halving_tol)
                    throw FlaggedRunError(FlaggedRunError::Reason::step_convergence,
                                          "step-halving changed moments by " +
                                              std::to_string(rep.halving_change));
            }
            return rep;
        } catch (const FlaggedRunError& e) {
            // Explicit cutoffs are taken as given; only defaults are grown.
            if (e.reason != FlaggedRunError::Reason::cutoff_insufficient || options.cutoffs ||
                attempt >= options.max_doublings)
                throw;
            cut.n_c *= 2;
            cut.n_m *= 2;
        }
    }
}

}  // namespace optomech
