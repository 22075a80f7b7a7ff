#include "optomech/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "optomech/errors.hpp"

namespace optomech {

Evolution::Evolution(const SystemParams& params, double tau_max, const SolverOptions& options)
    : params_(params),
      sol_(solve_quadratic(params.squeezing, tau_max, options)),
      table_(sol_, params.coupling) {}

PointResult Evolution::at(double tau, const InitialState& init) const {
    return evaluate(table_.at(tau), bogoliubov_at(sol_, tau), init);
}

PointResult evaluate(const FCoefficients& f, const Bogoliubov& bog, const InitialState& init) {
    PointResult r;
    r.f = f;
    r.bog = bog;
    r.moments = moments(f, bog, init);
    r.cov = covariance(r.moments);
    r.ng = delta(r.cov, std::abs(f.k_na()), std::abs(init.mu_c));
    return r;
}

std::pair<double, double> quadratures(cplx a) {
    return {std::sqrt(2.0) * a.real(), std::sqrt(2.0) * a.imag()};
}

std::vector<std::pair<double, double>> quadrature_trajectory(const SystemParams& params,
                                                             const InitialState& init,
                                                             const std::vector<double>& grid,
                                                             bool lab_frame,
                                                             const SolverOptions& options) {
    if (grid.empty()) return {};
    const double t_max = *std::max_element(grid.begin(), grid.end());
    if (*std::min_element(grid.begin(), grid.end()) < 0.0) throw DomainError("negative tau in grid");
    // A zero-length horizon still needs a valid solution grid.
    const Evolution ev(params, std::max(t_max, 1e-9), options);
    std::vector<std::pair<double, double>> out;
    out.reserve(grid.size());
    for (double t : grid) {
        const auto f = ev.table().at(t);
        auto m = moments(f, bogoliubov_at(ev.quadratic(), t), init);
        if (lab_frame) m = to_lab_frame(m, params.omega_c);
        out.push_back(quadratures(m.a));
    }
    return out;
}

}  // namespace optomech
