#include "optomech/non_gaussianity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "optomech/errors.hpp"

namespace optomech {

namespace {

constexpr double nu_clamp = 1e-6;
constexpr double hermitian_tol = 1e-10;

double entropy_term(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

SymplecticPair symplectic_eigenvalues(const Eigen::Matrix4cd& sigma) {
    const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
    if ((sigma - sigma.adjoint()).cwiseAbs().maxCoeff() > hermitian_tol * scale)
        throw ValidationError("covariance matrix is not Hermitian");

    // i Omega = diag(1, 1, -1, -1)
    Eigen::Matrix4cd m = sigma;
    m.bottomRows<2>() *= -1.0;
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(m, false);
    std::array<double, 4> nu{};
    for (int i = 0; i < 4; ++i) nu[i] = std::abs(es.eigenvalues()[i]);
    std::sort(nu.begin(), nu.end(), std::greater<>());
    // Eigenvalues come in +-nu pairs; average each pair against rounding.
    return {0.5 * (nu[0] + nu[1]), 0.5 * (nu[2] + nu[3])};
}

double symplectic_eigenvalue(const Eigen::Matrix2cd& block) {
    const double d = 0.5 * (block(0, 0).real() + block(1, 1).real());
    return std::sqrt(std::max(0.0, d * d - std::norm(block(0, 1))));
}

double binary_entropy(double nu) {
    if (!(nu >= 1.0 - nu_clamp))
        throw DomainError("symplectic eigenvalue " + std::to_string(nu) + " below 1 (unphysical)");
    if (nu <= 1.0) return 0.0;
    return entropy_term(0.5 * (nu + 1.0)) - entropy_term(0.5 * (nu - 1.0));
}

AlBounds araki_lieb_bounds(double nu_op, double nu_me) {
    const double so = binary_entropy(nu_op), sm = binary_entropy(nu_me);
    return {std::abs(so - sm), so + sm};
}

SubsystemEigenvalues subsystem_eigenvalues_closed(const FCoefficients& f, cplx mu_c) {
    const cplx I{0.0, 1.0};
    const double n = std::norm(mu_c);
    const double k2 = std::norm(f.k_na());
    const double th = f.theta();
    const double sh = std::sin(0.5 * th);
    const double sf = std::sin(th);

    const double e1 = std::exp(-4.0 * n * sh * sh - k2);
    const cplx phase = std::exp(I * th) * std::exp(n * (std::exp(2.0 * I * th) - 1.0)) *
                       std::exp(2.0 * n * (std::exp(-I * th) - 1.0));
    const double nu_op2 =
        1.0 + 4.0 * n * (1.0 - e1) +
        4.0 * n * n *
            (1.0 - 2.0 * e1 - std::exp(-4.0 * k2 - 4.0 * n * sf * sf) +
             2.0 * std::exp(-3.0 * k2) * phase.real());
    return {std::sqrt(std::max(0.0, nu_op2)), std::sqrt(1.0 + 4.0 * k2 * n)};
}

std::string_view regime_name(Regime r) {
    switch (r) {
        case Regime::optical_dominated: return "optical-dominated";
        case Regime::mechanical_dominated: return "mechanical-dominated";
        case Regime::balanced: return "balanced";
    }
    return "balanced";
}

Regime classify_regime(double k_na_abs, double mu_c_abs) {
    constexpr double much = 5.0;
    const double opt = 2.0 * mu_c_abs;
    if (opt >= much * k_na_abs && opt > 0.0) return Regime::optical_dominated;
    if (k_na_abs >= much * opt && k_na_abs > 0.0) return Regime::mechanical_dominated;
    return Regime::balanced;
}

NonGaussianityReport delta(const Eigen::Matrix2cd& op_block, const Eigen::Matrix2cd& me_block,
                           const CovarianceMatrix& full, double k_na_abs, double mu_c_abs) {
    const double tol = 1e-12 * std::max(1.0, full.sigma.cwiseAbs().maxCoeff());
    if ((op_block - full.optical_block()).cwiseAbs().maxCoeff() > tol ||
        (me_block - full.mechanical_block()).cwiseAbs().maxCoeff() > tol)
        throw ValidationError("subsystem blocks do not belong to the full covariance matrix");

    NonGaussianityReport r;
    r.nu_full = symplectic_eigenvalues(full.sigma);
    r.nu_op = symplectic_eigenvalue(op_block);
    r.nu_me = symplectic_eigenvalue(me_block);
    r.delta = binary_entropy(r.nu_full.nu1) + binary_entropy(r.nu_full.nu2);
    const auto b = araki_lieb_bounds(r.nu_op, r.nu_me);
    r.delta_min = b.delta_min;
    r.delta_max = b.delta_max;
    r.regime = classify_regime(k_na_abs, mu_c_abs);
    return r;
}

NonGaussianityReport delta(const CovarianceMatrix& full, double k_na_abs, double mu_c_abs) {
    return delta(full.optical_block(), full.mechanical_block(), full, k_na_abs, mu_c_abs);
}

}  // namespace optomech
