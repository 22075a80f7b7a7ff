#pragma once

#include <Eigen/Dense>

#include "optomech/lie_decoupling.hpp"
#include "optomech/squeezing_dynamics.hpp"

namespace optomech {

struct InitialState {
    cplx mu_c{0.0, 0.0};
    cplx mu_m{0.0, 0.0};
};

struct GammaDelta {
    cplx gamma;
    cplx delta;
};

// b(tau) = alpha b + beta b^dag + Gamma + Delta a^dag a in the Heisenberg picture.
GammaDelta gamma_delta(cplx alpha, cplx beta, const FCoefficients& f);

// First and second moments in the frame rotating at the cavity frequency.
struct MomentSet {
    double tau = 0.0;
    cplx a, b;
    cplx a2, b2, ab, ab_dag;
    double na = 0.0, nb = 0.0;
    cplx gamma, delta, e_bpbm;
};

MomentSet moments(const FCoefficients& f, const Bogoliubov& bog, const InitialState& init);

// Multiplies every moment carrying net cavity charge by exp(-i omega_c tau).
MomentSet to_lab_frame(const MomentSet& m, double omega_c);

// Basis X = (a, b, a^dag, b^dag),
// sigma_nm = <{X_n, X_m^dag}> - 2 <X_n><X_m^dag>; vacuum gives the identity.
struct CovarianceMatrix {
    Eigen::Matrix4cd sigma;
    Eigen::Vector4cd d;

    Eigen::Matrix2cd optical_block() const;
    Eigen::Matrix2cd mechanical_block() const;
};

CovarianceMatrix covariance(const MomentSet& m);

}  // namespace optomech
