#pragma once

#include <vector>

#include "optomech/profile.hpp"
#include "optomech/squeezing_dynamics.hpp"

namespace optomech {

// G multiplies -a^dag a (b + b^dag); D1 multiplies (b + b^dag).
struct CouplingProfile {
    ScalarProfile g{1.0};
    ScalarProfile d1{0.0};
};

// Coefficients of the ordered-exponential form of the interaction-picture
// propagator. Names follow the generator each one multiplies:
// Na = a^dag a, Bp = b + b^dag, Bm = i(b^dag - b).
struct FCoefficients {
    double tau = 0.0;
    double f_na = 0.0;
    double f_na2 = 0.0;
    double f_bp = 0.0;
    double f_bm = 0.0;
    double f_nabp = 0.0;
    double f_nabm = 0.0;

    cplx k() const { return {f_bm, f_bp}; }
    cplx k_na() const { return {f_nabm, f_nabp}; }
    double theta() const { return 2.0 * (f_na2 + f_nabp * f_nabm); }
    double phi() const { return f_na + f_na2 + 2.0 * f_nabp * f_bm; }
};

// Coefficients at every grid point of sol. Single and double integrals are
// accumulated in one pass with a fourth-order cumulative rule.
std::vector<FCoefficients> f_coefficient_series(const QuadraticSolution& sol,
                                                const CouplingProfile& couplings);

// Coefficient series of one solution, reusable across many evaluation times.
class FCoefficientTable {
public:
    FCoefficientTable(const QuadraticSolution& sol, const CouplingProfile& couplings);
    FCoefficientTable(const QuadraticSolution& sol, const CouplingProfile& couplings,
                      std::size_t count);

    FCoefficients at(double tau) const;
    const std::vector<FCoefficients>& values() const { return values_; }

private:
    std::vector<FCoefficients> values_;
    std::vector<FCoefficients> rates_;  // d/dtau of each coefficient
    double step_ = 0.0;
};

// Coefficients at an arbitrary tau in the grid; off-grid values are cubic
// Hermite interpolants of the cumulative integrals and their integrands.
FCoefficients compute_f_coefficients(const QuadraticSolution& sol, const CouplingProfile& couplings,
                                     double tau);

// Closed forms for constant g and constant d2 (D1 = 0).
FCoefficients constant_squeezing_f(double g0, double d2, double tau);
double k_na_squared_constant(double g0, double d2, double tau);

// Second-order expansion in d2 for D2 = d2 cos(2 tau) at resonance (D1 = 0).
// Valid while two_scale_valid(d2, tau).
FCoefficients resonant_f(double g0, double d2, double tau);
// |K_Na|^2 truncated at second order in d2.
double k_na_squared_resonant(double g0, double d2, double tau);

}  // namespace optomech
