#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "optomech/errors.hpp"
#include "optomech/squeezing_dynamics.hpp"

using namespace optomech;
using std::numbers::pi;

namespace {

TabulatedSeries sample(double (*f)(double), double t0, double t1, int n) {
    std::vector<double> t(n), v(n);
    for (int i = 0; i < n; ++i) {
        t[i] = t0 + (t1 - t0) * i / (n - 1);
        v[i] = f(t[i]);
    }
    return {t, v};
}

}  // namespace

TEST_CASE("free oscillator limit") {
    const auto sol = solve_quadratic(Constant{0.0}, 2 * pi);
    for (std::size_t i = 0; i < sol.size(); i += 97) {
        CHECK(sol.p11[i] == doctest::Approx(std::cos(sol.grid[i])).epsilon(1e-14));
        CHECK(sol.ip22[i] == doctest::Approx(std::sin(sol.grid[i])).epsilon(1e-14));
    }
    CHECK(sol.grid.front() == 0.0);
    CHECK(sol.tau_max() == 2 * pi);
}

TEST_CASE("constant closed form") {
    auto p = constant_solution(0.0, pi / 2);
    CHECK(p.p11 == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(p.ip22 == doctest::Approx(1.0));
    // zeta = 3 for d2 = 2
    p = constant_solution(2.0, pi);
    CHECK(p.p11 == doctest::Approx(-1.0));
    CHECK(std::abs(p.ip22) < 1e-15);
    const auto sol = solve_quadratic(Constant{2.0}, pi);
    CHECK(sol.p11.back() == doctest::Approx(-1.0));
    CHECK_THROWS_AS(constant_solution(-0.25, 1.0), UnsupportedRegimeError);
    CHECK_THROWS_AS(solve_quadratic(Constant{-0.3}, 1.0), UnsupportedRegimeError);
}

TEST_CASE("integrator reproduces constant closed form") {
    SolverOptions forced;
    forced.force_integration = true;
    for (double d2 : {0.0, 0.5, 2.0}) {
        const auto sol = solve_quadratic(Constant{d2}, 10 * pi, forced);
        double worst = 0.0;
        for (std::size_t i = 0; i < sol.size(); ++i) {
            const auto c = constant_solution(d2, sol.grid[i]);
            worst = std::max({worst, std::abs(sol.p11[i] - c.p11), std::abs(sol.ip22[i] - c.ip22)});
        }
        CHECK(worst <= 1e-8);
    }
}

TEST_CASE("boundary conditions and symplectic identities on every grid point") {
    const SqueezingProfile profiles[] = {Constant{0.5}, Modulated{0.1, 2.0}, Modulated{0.3, 1.3},
                                         Tabulated{sample([](double t) { return 0.2 * std::sin(t); }, 0.0, 7.0, 60)}};
    for (const auto& prof : profiles) {
        const auto sol = solve_quadratic(prof, 7.0);
        CHECK(sol.p11[0] == 1.0);
        CHECK(sol.dp11[0] == 0.0);
        CHECK(sol.ip22[0] == 0.0);
        CHECK(sol.dip22[0] == 1.0);
        const double bog_tol = std::holds_alternative<Constant>(prof) ? 1e-10 : 1e-6;
        double worst_id = 0.0, worst_bog = 0.0;
        for (std::size_t i = 0; i < sol.size(); ++i) {
            const double t = sol.grid[i];
            worst_id = std::max(worst_id, identity_residual(state_at(sol, t)));
            const auto b = bogoliubov_at(sol, t);
            worst_bog = std::max(worst_bog, bogoliubov_residual(b));
        }
        CHECK(worst_id < 1e-6);
        CHECK(worst_bog < bog_tol);
    }
}

TEST_CASE("modulated drive against a tight reference integration") {
    // Reference: independent DOP853 run at rtol = atol = 1e-13.
    const auto sol = solve_quadratic(Modulated{0.1, 2.0}, 4 * pi);
    auto s = state_at(sol, 2 * pi);
    CHECK(s.p11 == doctest::Approx(1.2020243079966613).epsilon(1e-8));
    CHECK(s.ip22 == doctest::Approx(-0.6419943860576096).epsilon(1e-8));
    CHECK(s.dp11 == doctest::Approx(-0.6929382042523968).epsilon(1e-8));
    s = state_at(sol, 4 * pi);
    CHECK(s.p11 == doctest::Approx(1.8897248740297314).epsilon(1e-8));
    CHECK(s.ip22 == doctest::Approx(-1.543385715277284).epsilon(1e-8));
    CHECK(bogoliubov_residual(bogoliubov_at(sol, 2 * pi)) < 1e-6);
}

TEST_CASE("tabulated profile follows its interpolant") {
    // Linear data: the monotone cubic reproduces it exactly, so the reference
    // can integrate D2 = 0.05 + 0.02 tau analytically.
    const auto tab = sample([](double t) { return 0.05 + 0.02 * t; }, 0.0, 2 * pi, 40);
    const auto sol = solve_quadratic(Tabulated{tab}, 2 * pi);
    CHECK(sol.p11.back() == doctest::Approx(0.27667628722821).epsilon(1e-8));
    CHECK(sol.ip22.back() == doctest::Approx(0.8008209956781094).epsilon(1e-8));
    CHECK_THROWS_AS(solve_quadratic(Tabulated{tab}, 7.0), DomainError);
}

TEST_CASE("zero-amplitude drives reduce to the free oscillator") {
    const auto zero = sample([](double) { return 0.0; }, 0.0, 5.0, 10);
    for (const SqueezingProfile& prof : {SqueezingProfile{Modulated{0.0, 2.0}}, SqueezingProfile{Tabulated{zero}}}) {
        const auto sol = solve_quadratic(prof, 5.0);
        double worst = 0.0;
        for (std::size_t i = 0; i < sol.size(); ++i)
            worst = std::max({worst, std::abs(sol.p11[i] - std::cos(sol.grid[i])),
                              std::abs(sol.ip22[i] - std::sin(sol.grid[i]))});
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("two-scale form") {
    auto p = two_scale_solution(0.1, 0.0);
    CHECK(p.p11 == 1.0);
    CHECK(p.ip22 == 0.0);
    p = two_scale_solution(0.1, pi);
    CHECK(p.p11 == doctest::Approx(-std::cosh(0.1 * pi)));
    CHECK(p.p11 == doctest::Approx(-1.04969).epsilon(1e-4));
    for (double t : {0.3, 1.7, 9.0}) {
        p = two_scale_solution(0.0, t);
        CHECK(p.p11 == std::cos(t));
        CHECK(p.ip22 == std::sin(t));
        CHECK_FALSE(p.validity_warning);
    }
    CHECK(two_scale_solution(0.2, 20.0).validity_warning);
    CHECK_FALSE(two_scale_solution(0.05, 4 * pi).validity_warning);
    CHECK_THROWS_AS(two_scale_solution(1.0, 1.0), DomainError);
}

TEST_CASE("mathieu parameter map") {
    auto m = mathieu_params(0.1, 2.0);
    CHECK(m.a == 1.0);
    CHECK(m.q == doctest::Approx(-0.2));
    m = mathieu_params(0.0, 2.0);
    CHECK(m.a == 1.0);
    CHECK(m.q == 0.0);
    m = mathieu_params(0.5, 1.0);
    CHECK(m.a == 4.0);
    CHECK(m.q == -4.0);
    CHECK_THROWS_AS(mathieu_params(0.1, 0.0), DomainError);
}

TEST_CASE("alpha beta* is not real in general") {
    // Only |alpha|^2 - |beta|^2 = 1 constrains a single-mode pair; the phase
    // relation alpha beta* = alpha* beta fails already for constant squeezing.
    const auto b = bogoliubov_at(solve_quadratic(Constant{0.5}, 1.0), 1.0);
    CHECK(bogoliubov_residual(b) < 1e-12);
    const double z = std::sqrt(3.0);
    const double expect = -(1 / z - z) / 2 * std::sin(z) * std::cos(z);
    CHECK((b.alpha * std::conj(b.beta)).imag() == doctest::Approx(expect).epsilon(1e-12));
    CHECK(std::abs(expect) > 0.05);
}

TEST_CASE("xi and Bogoliubov coefficients") {
    const double d2 = 0.7, z = std::sqrt(1 + 4 * d2);
    const auto sol = solve_quadratic(Constant{d2}, 5.0);
    CHECK(xi_at(sol, 0.0) == cplx(1.0, 0.0));
    for (double t : {0.0, 0.123, 2.5, 4.99}) {
        const cplx expect(std::cos(z * t), -std::sin(z * t) / z);
        CHECK(std::abs(xi_at(sol, t) - expect) < 1e-12);
    }
    const auto free = solve_quadratic(Constant{0.0}, 3.0);
    const auto b = bogoliubov_at(free, 2.2);
    CHECK(std::abs(b.alpha - std::exp(cplx(0, -2.2))) < 1e-12);
    CHECK(std::abs(b.beta) < 1e-12);

    const auto b3 = bogoliubov_at(solve_quadratic(Constant{2.0}, pi), pi);
    CHECK(std::abs(b3.alpha - cplx(-1.0, 0.0)) < 1e-12);
    CHECK(std::abs(b3.beta) < 1e-12);

    CHECK_THROWS_AS(xi_at(sol, 5.1), DomainError);
    CHECK_THROWS_AS(bogoliubov_at(sol, -0.1), DomainError);
}

TEST_CASE("resonant two-scale xi matches the rotating-wave closed form") {
    // With the 1/(1 - d2) factor replaced by 1, xi = e^{-i t} cosh(d t) + i e^{i t} sinh(d t).
    const double d = 0.1;
    for (double t : {0.5, 3.0, 7.0}) {
        const auto p = two_scale_solution(d, t);
        const cplx xi(p.p11, -p.ip22 * (1 - d));
        const cplx rwa = std::exp(cplx(0, -t)) * std::cosh(d * t) + cplx(0, 1) * std::exp(cplx(0, t)) * std::sinh(d * t);
        CHECK(std::abs(xi - rwa) < 1e-14);
    }
}

TEST_CASE("off-grid interpolation is accurate") {
    const auto sol = solve_quadratic(Constant{0.3}, 3.0);
    const double z = std::sqrt(2.2);
    for (double t : {0.00011, 1.23456, 2.99999}) {
        const auto s = state_at(sol, t);
        CHECK(s.p11 == doctest::Approx(std::cos(z * t)).epsilon(1e-11));
        CHECK(s.dp11 == doctest::Approx(-z * std::sin(z * t)).epsilon(1e-10));
    }
}
