#pragma once

#include <complex>
#include <cstddef>
#include <variant>
#include <vector>

#include "optomech/profile.hpp"

namespace optomech {

using cplx = std::complex<double>;

// D2(tau) = d2
struct Constant {
    double d2 = 0.0;
};

// D2(tau) = d2 cos(omega0 tau)
struct Modulated {
    double d2 = 0.0;
    double omega0 = 2.0;
};

// D2(tau) sampled, monotone cubic in between.
struct Tabulated {
    TabulatedSeries samples;
};

using SqueezingProfile = std::variant<Constant, Modulated, Tabulated>;

double d2_at(const SqueezingProfile& profile, double tau);
// Upper bound of |D2| on [0, tau_max].
double max_abs_d2(const SqueezingProfile& profile, double tau_max);
// sqrt(1 + 4 max|D2|): fastest oscillation rate of the quadratic sector.
double zeta_eff(const SqueezingProfile& profile, double tau_max);

// Uniformly sampled quadratic sector. p11/ip22 solve y'' + (1 + 4 D2) y = 0
// with (y, y') = (1, 0) and (0, 1) at tau = 0; j = int_0^tau (1 + 4 D2) p11.
struct QuadraticSolution {
    std::vector<double> grid;
    std::vector<double> p11, dp11, ip22, dip22, j;
    SqueezingProfile profile;

    double step() const { return grid[1] - grid[0]; }
    double tau_max() const { return grid.back(); }
    std::size_t size() const { return grid.size(); }
};

struct SolverOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    // Samples per unit of zeta_eff * tau, and the floor on the total count.
    double resolution = 256.0;
    std::size_t min_samples = 4096;
    // Constant profiles use the closed form unless integration is forced.
    bool force_integration = false;
};

QuadraticSolution solve_quadratic(const SqueezingProfile& profile, double tau_max,
                                  const SolverOptions& options = {});

struct QuadraticPoint {
    double p11 = 0.0;
    double ip22 = 0.0;
};

QuadraticPoint constant_solution(double d2, double tau);

struct TwoScalePoint {
    double p11 = 0.0;
    double ip22 = 0.0;
    // d2 cosh(d2 tau) > 0.1: outside the slow-time expansion's validity.
    bool validity_warning = false;
};

bool two_scale_valid(double d2, double tau);
TwoScalePoint two_scale_solution(double d2, double tau);

struct MathieuParams {
    double a = 0.0;
    double q = 0.0;
};

MathieuParams mathieu_params(double d2, double omega0);

// Full state (p11, dp11, ip22, dip22, j) at tau, cubic Hermite between samples
// using the ODE right-hand side as the derivative.
struct QuadraticState {
    double p11, dp11, ip22, dip22, j;
};
QuadraticState state_at(const QuadraticSolution& sol, double tau);

// |P11 P22 + I_P22 J - 1| with P22 = d I_P22 / dtau.
double identity_residual(const QuadraticState& s);

cplx xi_at(const QuadraticSolution& sol, double tau);
cplx xi_dot_at(const QuadraticSolution& sol, double tau);

struct Bogoliubov {
    double tau = 0.0;
    cplx alpha{1.0, 0.0};
    cplx beta{0.0, 0.0};
};

Bogoliubov bogoliubov_from_xi(double tau, cplx xi, cplx xi_dot);
Bogoliubov bogoliubov_at(const QuadraticSolution& sol, double tau);

// ||alpha|^2 - |beta|^2 - 1|
double bogoliubov_residual(const Bogoliubov& b);

}  // namespace optomech
