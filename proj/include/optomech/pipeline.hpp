#pragma once

#include <utility>
#include <vector>

#include "optomech/lie_decoupling.hpp"
#include "optomech/non_gaussianity.hpp"
#include "optomech/state_moments.hpp"
#include "optomech/system.hpp"

namespace optomech {

struct PointResult {
    FCoefficients f;
    Bogoliubov bog;
    MomentSet moments;
    CovarianceMatrix cov;
    NonGaussianityReport ng;
};

// Quadratic sector and coefficient table solved once on [0, tau_max], then
// evaluated at any tau in range. Immutable after construction.
class Evolution {
public:
    Evolution(const SystemParams& params, double tau_max, const SolverOptions& options = {});

    const SystemParams& params() const { return params_; }
    const QuadraticSolution& quadratic() const { return sol_; }
    const FCoefficientTable& table() const { return table_; }

    PointResult at(double tau, const InitialState& init) const;

private:
    SystemParams params_;
    QuadraticSolution sol_;
    FCoefficientTable table_;
};

// Full evaluation chain from already known coefficients.
PointResult evaluate(const FCoefficients& f, const Bogoliubov& bog, const InitialState& init);

// (<x1>, <p1>) with x1 = (a + a^dag)/sqrt 2, p1 = i(a^dag - a)/sqrt 2, from <a>
// in the rotating frame, or in the lab frame when `lab_frame` is set.
std::vector<std::pair<double, double>> quadrature_trajectory(const SystemParams& params,
                                                             const InitialState& init,
                                                             const std::vector<double>& grid,
                                                             bool lab_frame = false,
                                                             const SolverOptions& options = {});

std::pair<double, double> quadratures(cplx a);

}  // namespace optomech
