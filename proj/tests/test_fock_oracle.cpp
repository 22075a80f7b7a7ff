#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "optomech/errors.hpp"
#include "optomech/fock_oracle.hpp"
#include "optomech/pipeline.hpp"

using namespace optomech;
using std::numbers::pi;

namespace {

SystemParams constant_system(double g, double d2, double d1 = 0.0, double omega_c = 1.0) {
    SystemParams p;
    p.omega_c = omega_c;
    p.squeezing = Constant{d2};
    p.coupling.g = ScalarProfile{g};
    p.coupling.d1 = ScalarProfile{d1};
    return p;
}

double lowest_level(double g, double d2, double omega_c, int n_c) {
    // Each photon sector is a displaced oscillator of frequency zeta.
    const double z2 = 1 + 4 * d2;
    double best = 1e300;
    for (int n = 0; n < n_c; ++n)
        best = std::min(best, omega_c * n + 0.5 * (std::sqrt(z2) - 1) - g * g * n * n / z2);
    return best;
}

}  // namespace

TEST_CASE("Hamiltonian matrix elements") {
    const Cutoffs cut{3, 5};
    auto h = build_hamiltonian(constant_system(0.0, 0.0, 0.0, 1.7), 0.0, cut);
    CHECK(h.rows() == 15);
    CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    for (int n = 0; n < 3; ++n)
        for (int m = 0; m < 5; ++m) CHECK(h(n * 5 + m, n * 5 + m).real() == doctest::Approx(1.7 * n + m));
    CHECK((h - Eigen::MatrixXcd(h.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);

    h = build_hamiltonian(constant_system(0.4, 0.3, 0.2), 0.0, cut);
    CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
    // Photon sector n = 2, phonons m = 1, 2.
    CHECK(h(11, 12).real() == doctest::Approx(std::sqrt(2.0) * (0.2 - 0.4 * 2)));
    CHECK(h(11, 13).real() == doctest::Approx(0.3 * std::sqrt(6.0)));
    CHECK(h(11, 11).real() == doctest::Approx(2.0 + 1.0 + 0.3 * 3.0));
    // Different photon numbers never couple.
    CHECK(h.block(0, 5, 5, 10).cwiseAbs().maxCoeff() == 0.0);

    SystemParams mod = constant_system(0.0, 0.0);
    mod.squeezing = Modulated{0.25, 2.0};
    CHECK(build_hamiltonian(mod, pi / 2, cut)(0, 0).real() == doctest::Approx(-0.25));

    CHECK_THROWS_AS(build_hamiltonian(mod, 0.0, {1, 5}), DomainError);
}

TEST_CASE("ground level approaches the displaced-oscillator value from above") {
    const double g = 2.0, d2 = 0.3, wc = 1.0;
    const int n_c = 4;
    const double exact = lowest_level(g, d2, wc, n_c);
    double prev = 1e300;
    for (int n_m : {20, 40, 80}) {
        const auto h = build_hamiltonian(constant_system(g, d2, 0.0, wc), 0.0, {n_c, n_m});
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
        const double e0 = es.eigenvalues()(0);
        CHECK(e0 >= exact - 1e-9);
        CHECK(e0 <= prev + 1e-12);
        prev = e0;
    }
    CHECK(prev == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("coherent product and tail weight") {
    const auto psi = coherent_product({cplx(1.0, 0.5), cplx(-0.3, 0.2)}, {30, 30});
    CHECK(psi.norm2() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(tail_weight(psi) < 1e-12);
    const auto m = measure(psi, 0.0, 1.0);
    CHECK(std::abs(m.a - cplx(1.0, 0.5)) < 1e-12);
    CHECK(std::abs(m.b - cplx(-0.3, 0.2)) < 1e-12);
    CHECK(m.na == doctest::Approx(1.25));

    FockState top;
    top.amp = Eigen::MatrixXcd::Zero(10, 10);
    top.amp(9, 0) = 1.0;
    CHECK(tail_weight(top) == 1.0);
    top.amp(0, 0) = 1.0;
    CHECK(tail_weight(top) == 0.5);

    CHECK(cutoff_for_amplitude(0.0) == 8);
    CHECK(cutoff_for_amplitude(1.0) == 15);
    CHECK(cutoff_for_amplitude(2.5) == 30);
}

TEST_CASE("free evolution") {
    // Vacuum is an eigenstate when D1 = 0: only n = 0 is populated.
    const auto params = constant_system(0.7, 0.0);
    const auto vac = coherent_product({}, {4, 10});
    EvolveDiagnostics diag;
    const auto out = evolve(vac, params, 3.0, 0.05, &diag);
    CHECK(diag.steps == 60);
    CHECK(diag.dt == doctest::Approx(0.05));
    CHECK(fidelity(out, vac) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(diag.norm_drift < 1e-12);

    // Uncoupled coherent amplitudes rotate at their own frequencies.
    const InitialState init{cplx(0.8, 0.1), cplx(0.5, -0.4)};
    const auto psi = evolve(coherent_product(init, {20, 20}), constant_system(0.0, 0.0, 0.0, 2.3), 1.9, 0.1);
    auto m = measure(psi, 1.9, 2.3);
    CHECK(std::abs(m.a - init.mu_c) < 1e-12);
    CHECK(std::abs(m.b - init.mu_m * std::exp(cplx(0, -1.9))) < 1e-12);
    m = measure(psi, 1.9, 0.0);
    CHECK(std::abs(m.a - init.mu_c * std::exp(cplx(0, -2.3 * 1.9))) < 1e-12);
    const auto rot = measure(to_rotating_frame(psi, 1.9, 2.3), 1.9, 0.0);
    CHECK(std::abs(rot.a - init.mu_c) < 1e-12);

    CHECK(evolve(vac, params, 0.0, 0.1).amp == vac.amp);
    CHECK_THROWS_AS(evolve(vac, params, 1.0, 0.0), DomainError);
}

TEST_CASE("oracle agrees with the decoupled solution at the small-parameter point") {
    const auto params = constant_system(0.5, 0.3);
    const InitialState init{1.0, 0.0};
    const Evolution ev(params, pi / 2);
    OracleOptions opt;
    opt.cutoffs = Cutoffs{16, 48};
    for (double tau : {pi / 8, pi / 4, pi / 2}) {
        const auto rep = run_oracle(params, init, tau, opt);
        const auto ana = ev.at(tau, init);
        CHECK(max_relative_difference(ana.moments, rep.moments) < 1e-3);
        CHECK(rep.halving_change < 1e-4);
        const auto ket = analytic_ket(ana.f, ana.bog, init, rep.cutoffs);
        CHECK(fidelity(ket, to_rotating_frame(rep.state, tau, params.omega_c)) >= 0.999);
    }
}

TEST_CASE("oracle under modulated squeezing and a linear drive") {
    SystemParams params = constant_system(1.0, 0.0, 0.2);
    params.squeezing = Modulated{0.1, 2.0};
    const InitialState init{cplx(0.3, 0.1), cplx(0.2, -0.1)};
    const Evolution ev(params, pi);
    const auto rep = run_oracle(params, init, pi);
    const auto ana = ev.at(pi, init);
    CHECK(max_relative_difference(ana.moments, rep.moments) < 1e-3);
    const auto ket = analytic_ket(ana.f, ana.bog, init, rep.cutoffs);
    CHECK(fidelity(ket, to_rotating_frame(rep.state, pi, params.omega_c)) >= 0.999);
}

TEST_CASE("analytic ket structure") {
    const InitialState init{cplx(1.2, -0.4), cplx(0.3, 0.6)};
    const Cutoffs cut{24, 24};
    FCoefficients zero;
    const Bogoliubov id;
    CHECK(fidelity(analytic_ket(zero, id, init, cut), coherent_product(init, cut)) ==
          doctest::Approx(1.0).epsilon(1e-13));

    // Photon number is conserved: row n keeps the Poisson weight.
    const auto params = constant_system(0.3, 0.4);
    const Evolution ev(params, 2.0);
    const auto r = ev.at(2.0, init);
    const auto ket = analytic_ket(r.f, r.bog, init, {24, 80});
    const double nbar = std::norm(init.mu_c);
    double poisson = std::exp(-nbar);
    for (int n = 0; n < 10; ++n) {
        if (n > 0) poisson *= nbar / n;
        CHECK(ket.amp.row(n).squaredNorm() == doctest::Approx(poisson).epsilon(1e-9));
    }
    CHECK_THROWS_AS(analytic_ket(r.f, r.bog, init, {24, 4}), FlaggedRunError);
}

TEST_CASE("mechanical purity tracks the Gaussian estimate at early times") {
    const auto params = constant_system(0.5, 0.3);
    const InitialState init{1.0, 0.0};
    const Evolution ev(params, 0.4);
    for (double tau : {0.1, 0.2, 0.4}) {
        const auto r = ev.at(tau, init);
        const auto ket = analytic_ket(r.f, r.bog, init, {16, 32});
        const double p = purity(reduced_mechanical(ket));
        CHECK(p == doctest::Approx(1.0 / r.ng.nu_me).epsilon(0.02));
        CHECK(p <= 1.0 + 1e-12);
    }
}

TEST_CASE("monitors") {
    const auto params = constant_system(0.5, 0.3);
    const InitialState init{1.0, 0.0};

    OracleOptions tiny;
    tiny.cutoffs = Cutoffs{4, 4};
    try {
        run_oracle(params, init, pi / 2, tiny);
        FAIL("expected a flagged run");
    } catch (const FlaggedRunError& e) {
        CHECK(e.reason == FlaggedRunError::Reason::cutoff_insufficient);
        CHECK(std::string(e.what()).find("cutoff-insufficient") != std::string::npos);
    }

    const auto rep = run_oracle(params, init, pi / 2);
    CHECK(rep.cutoffs.n_c == cutoff_for_amplitude(1.0));
    CHECK(rep.diag.max_tail <= 1e-8);

    // Midpoint steps are exact for a constant Hamiltonian, so step halving
    // needs a time-dependent one to bite.
    SystemParams mod = params;
    mod.squeezing = Modulated{0.3, 2.0};
    OracleOptions coarse;
    coarse.cutoffs = Cutoffs{16, 48};
    coarse.dt = 0.3;
    coarse.halving_tol = 1e-9;
    try {
        run_oracle(mod, {0.3, 0.0}, pi / 2, coarse);
        FAIL("expected a flagged run");
    } catch (const FlaggedRunError& e) {
        CHECK(e.reason == FlaggedRunError::Reason::step_convergence);
    }
}

TEST_CASE("oracle step follows the fastest scale") {
    auto p = constant_system(0.5, 0.3);
    CHECK(oracle_step(p, 1.0, 16) == doctest::Approx(2 * pi / (200 * 2.2)));
    p = constant_system(3.0, 0.0);
    CHECK(oracle_step(p, 1.0, 16) == doctest::Approx(2 * pi / (200 * 12.0)));
}
