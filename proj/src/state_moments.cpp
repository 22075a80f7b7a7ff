#include "optomech/state_moments.hpp"

#include <cmath>
#include <string>

#include "optomech/errors.hpp"

namespace optomech {

namespace {
constexpr cplx I{0.0, 1.0};
}

GammaDelta gamma_delta(cplx alpha, cplx beta, const FCoefficients& f) {
    return {(alpha + beta) * f.f_bm - I * (alpha - beta) * f.f_bp,
            (alpha + beta) * f.f_nabm - I * (alpha - beta) * f.f_nabp};
}

MomentSet moments(const FCoefficients& f, const Bogoliubov& bog, const InitialState& init) {
    if (std::abs(f.tau - bog.tau) > 1e-12 * std::max(1.0, std::abs(f.tau)))
        throw ConsistencyError("F-coefficients at tau = " + std::to_string(f.tau) +
                               " but Bogoliubov coefficients at tau = " + std::to_string(bog.tau));

    const cplx al = bog.alpha, be = bog.beta;
    const cplx mc = init.mu_c, mm = init.mu_m;
    const cplx mmc = std::conj(mm);
    const double n = std::norm(mc);
    const cplx kn = f.k_na();
    const double kn2 = std::norm(kn);
    const double th = f.theta();
    const auto [gam, del] = gamma_delta(al, be, f);

    MomentSet m;
    m.tau = f.tau;
    m.gamma = gam;
    m.delta = del;
    m.na = n;

    // <exp(-i F_NaBp Bp) exp(-i F_NaBm Bm)> over the mechanical coherent state.
    m.e_bpbm = std::exp(0.5 * (-kn2 - 2.0 * I * f.f_nabm * f.f_nabp - 2.0 * mm * kn +
                               2.0 * mmc * std::conj(kn)));

    const cplx kerr1 = std::exp(n * (std::exp(-I * th) - 1.0));
    const cplx pre = std::exp(-I * f.phi()) * kerr1 * m.e_bpbm * mc;
    m.a = pre;
    m.a2 = std::exp(-2.0 * I * f.phi()) * mc * mc * std::exp(-I * th) *
           std::exp(n * (std::exp(-2.0 * I * th) - 1.0)) * std::exp(-kn2) * m.e_bpbm * m.e_bpbm;

    const cplx lin = al * mm + be * mmc;  // quadratic-sector part of <b>
    const cplx shift = gam + del * n;     // displacement part of <b>
    m.b = lin + shift;
    m.b2 = al * al * mm * mm + al * be * (2.0 * std::norm(mm) + 1.0) + be * be * mmc * mmc +
           2.0 * lin * shift + gam * gam + 2.0 * gam * del * n + del * del * n * (1.0 + n);

    const cplx cross = std::conj(lin) * shift;
    m.nb = ((std::norm(al) + std::norm(be)) * std::norm(mm) +
            2.0 * std::real(std::conj(al) * be * mmc * mmc) + 2.0 * std::real(cross) +
            2.0 * std::real(std::conj(gam) * del) * n + std::norm(del) * n * (1.0 + n) +
            std::norm(be) + std::norm(gam));

    const cplx kerr_n = n * std::exp(-I * th) + 1.0;
    m.ab = pre * (al * mm + be * (mmc - kn) + gam + kerr_n * del);
    m.ab_dag = pre * (std::conj(al) * (mmc - kn) + std::conj(be) * mm + std::conj(gam) +
                      kerr_n * std::conj(del));
    return m;
}

MomentSet to_lab_frame(const MomentSet& m, double omega_c) {
    MomentSet out = m;
    const cplx r = std::exp(-I * omega_c * m.tau);
    out.a *= r;
    out.a2 *= r * r;
    out.ab *= r;
    out.ab_dag *= r;
    return out;
}

CovarianceMatrix covariance(const MomentSet& m) {
    const cplx a = m.a, b = m.b;
    const cplx ac = std::conj(a), bc = std::conj(b);

    const double s11 = 1.0 + 2.0 * m.na - 2.0 * std::norm(a);
    const double s22 = 1.0 + 2.0 * m.nb - 2.0 * std::norm(b);
    const cplx aa = 2.0 * m.a2 - 2.0 * a * a;
    const cplx bb = 2.0 * m.b2 - 2.0 * b * b;
    const cplx abd = 2.0 * m.ab_dag - 2.0 * a * bc;
    const cplx abb = 2.0 * m.ab - 2.0 * a * b;

    CovarianceMatrix cm;
    auto& s = cm.sigma;
    // Upper triangle from sigma_nm with X = (a, b, a^dag, b^dag).
    s(0, 0) = s11;
    s(1, 1) = s22;
    s(2, 2) = s11;
    s(3, 3) = s22;
    s(0, 1) = abd;              // {a, b^dag}
    s(0, 2) = aa;               // {a, a}
    s(0, 3) = abb;              // {a, b}
    s(1, 2) = abb;              // {b, a}
    s(1, 3) = bb;               // {b, b}
    s(2, 3) = std::conj(abd);   // {a^dag, b}
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < r; ++c) s(r, c) = std::conj(s(c, r));

    cm.d << a, b, ac, bc;
    return cm;
}

Eigen::Matrix2cd CovarianceMatrix::optical_block() const {
    Eigen::Matrix2cd out;
    out << sigma(0, 0), sigma(0, 2), sigma(2, 0), sigma(2, 2);
    return out;
}

Eigen::Matrix2cd CovarianceMatrix::mechanical_block() const {
    Eigen::Matrix2cd out;
    out << sigma(1, 1), sigma(1, 3), sigma(3, 1), sigma(3, 3);
    return out;
}

}  // namespace optomech
