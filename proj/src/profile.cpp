#include "optomech/profile.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

// Boost 1.74's pchip header calls isnan unqualified; <math.h> provides ::isnan.
#include <math.h>
#include <boost/math/interpolators/pchip.hpp>

#include "optomech/errors.hpp"

namespace optomech {

struct TabulatedSeries::Impl {
    // pchip needs four points; shorter tables fall back to linear.
    std::optional<boost::math::interpolators::pchip<std::vector<double>>> pchip;
};

TabulatedSeries::TabulatedSeries(std::vector<double> tau, std::vector<double> value)
    : tau_(std::move(tau)), value_(std::move(value)) {
    if (tau_.size() != value_.size() || tau_.size() < 2)
        throw DomainError("tabulated series needs at least two (tau, value) pairs");
    for (std::size_t i = 1; i < tau_.size(); ++i)
        if (!(tau_[i] > tau_[i - 1]))
            throw DomainError("tabulated series abscissae must be strictly increasing");
    auto impl = std::make_shared<Impl>();
    if (tau_.size() >= 4) impl->pchip.emplace(std::vector<double>(tau_), std::vector<double>(value_));
    impl_ = std::move(impl);
}

double TabulatedSeries::operator()(double tau) const {
    if (tau < front() || tau > back())
        throw DomainError("tau = " + std::to_string(tau) + " outside tabulated range");
    if (impl_->pchip) return (*impl_->pchip)(tau);
    auto it = std::upper_bound(tau_.begin(), tau_.end(), tau);
    std::size_t k = it == tau_.end() ? tau_.size() - 1 : static_cast<std::size_t>(it - tau_.begin());
    double w = (tau - tau_[k - 1]) / (tau_[k] - tau_[k - 1]);
    return (1 - w) * value_[k - 1] + w * value_[k];
}

double TabulatedSeries::max_abs() const {
    // Monotone interpolation never overshoots the samples.
    double m = 0;
    for (double v : value_) m = std::max(m, std::abs(v));
    return m;
}

double ScalarProfile::operator()(double tau) const {
    if (const double* c = std::get_if<double>(&source)) return *c;
    return std::get<TabulatedSeries>(source)(tau);
}

bool ScalarProfile::is_zero() const {
    if (const double* c = std::get_if<double>(&source)) return *c == 0.0;
    return std::get<TabulatedSeries>(source).max_abs() == 0.0;
}

bool ScalarProfile::covers(double t0, double t1) const {
    if (is_constant()) return true;
    return std::get<TabulatedSeries>(source).covers(t0, t1);
}

}  // namespace optomech
