#pragma once

#include <string_view>

#include <Eigen/Dense>

#include "optomech/lie_decoupling.hpp"
#include "optomech/state_moments.hpp"

namespace optomech {

struct SymplecticPair {
    double nu1 = 1.0;  // larger
    double nu2 = 1.0;
};

// |eigenvalues| of i Omega sigma with Omega = diag(-i, -i, i, i); each value
// appears twice and the distinct pair is returned in descending order.
SymplecticPair symplectic_eigenvalues(const Eigen::Matrix4cd& sigma);
// Single-mode block in the (c, c^dag) basis.
double symplectic_eigenvalue(const Eigen::Matrix2cd& block);

// von Neumann entropy (nats) of a Gaussian mode with symplectic eigenvalue nu.
double binary_entropy(double nu);

struct AlBounds {
    double delta_min = 0.0;
    double delta_max = 0.0;
};

AlBounds araki_lieb_bounds(double nu_op, double nu_me);

struct SubsystemEigenvalues {
    double nu_op = 1.0;
    double nu_me = 1.0;
};

SubsystemEigenvalues subsystem_eigenvalues_closed(const FCoefficients& f, cplx mu_c);

enum class Regime { optical_dominated, mechanical_dominated, balanced };
std::string_view regime_name(Regime r);
// Compares |K_Na| with 2|mu_c|: a factor of 5 either way selects a dominated
// regime, anything closer is balanced.
Regime classify_regime(double k_na_abs, double mu_c_abs);

struct NonGaussianityReport {
    double delta = 0.0;
    double delta_min = 0.0;
    double delta_max = 0.0;
    SymplecticPair nu_full;
    double nu_op = 1.0;
    double nu_me = 1.0;
    Regime regime = Regime::balanced;
};

NonGaussianityReport delta(const Eigen::Matrix2cd& op_block, const Eigen::Matrix2cd& me_block,
                           const CovarianceMatrix& full, double k_na_abs, double mu_c_abs);

// Convenience: blocks taken from `full`.
NonGaussianityReport delta(const CovarianceMatrix& full, double k_na_abs, double mu_c_abs);

}  // namespace optomech
