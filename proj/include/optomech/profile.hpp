#pragma once

#include <memory>
#include <variant>
#include <vector>

namespace optomech {

// Samples of a real function of tau, interpolated by a monotone piecewise
// cubic (PCHIP). Abscissae strictly increasing.
class TabulatedSeries {
public:
    TabulatedSeries(std::vector<double> tau, std::vector<double> value);

    double operator()(double tau) const;
    double front() const { return tau_.front(); }
    double back() const { return tau_.back(); }
    bool covers(double t0, double t1) const { return front() <= t0 && back() >= t1; }
    const std::vector<double>& tau() const { return tau_; }
    const std::vector<double>& value() const { return value_; }
    double max_abs() const;

private:
    std::vector<double> tau_;
    std::vector<double> value_;
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

// Constant or tabulated scalar coefficient (G or D1).
struct ScalarProfile {
    std::variant<double, TabulatedSeries> source = 0.0;

    double operator()(double tau) const;
    bool is_constant() const { return std::holds_alternative<double>(source); }
    bool is_zero() const;
    bool covers(double t0, double t1) const;
};

}  // namespace optomech
