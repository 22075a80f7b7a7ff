#pragma once

#include "optomech/lie_decoupling.hpp"
#include "optomech/squeezing_dynamics.hpp"

namespace optomech {

// Dimensionless Hamiltonian (mechanical frequency = 1):
//   H = omega_c a^dag a + b^dag b + D1 (b + b^dag) + D2 (b + b^dag)^2
//       - G a^dag a (b + b^dag)
struct SystemParams {
    double omega_c = 1.0;
    SqueezingProfile squeezing = Constant{0.0};
    CouplingProfile coupling;
};

}  // namespace optomech
