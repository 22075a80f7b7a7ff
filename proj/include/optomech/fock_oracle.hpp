#pragma once

#include <optional>

#include <Eigen/Dense>

#include "optomech/lie_decoupling.hpp"
#include "optomech/state_moments.hpp"
#include "optomech/system.hpp"

namespace optomech {

// Two-mode ket truncated to photon numbers [0, n_c) and phonon numbers
// [0, n_m); amp(n, m) = <n, m|psi>.
struct FockState {
    Eigen::MatrixXcd amp;

    int n_c() const { return static_cast<int>(amp.rows()); }
    int n_m() const { return static_cast<int>(amp.cols()); }
    double norm2() const { return amp.squaredNorm(); }
};

struct Cutoffs {
    int n_c = 0;
    int n_m = 0;
};

FockState coherent_product(const InitialState& init, const Cutoffs& cut);

// Dense Hamiltonian on the truncated space, row index n * n_m + m.
Eigen::MatrixXcd build_hamiltonian(const SystemParams& params, double tau, const Cutoffs& cut);

// Weight in the top 10% of either index, relative to the total norm.
double tail_weight(const FockState& psi);

struct EvolveDiagnostics {
    int steps = 0;
    double dt = 0.0;
    double norm_drift = 0.0;
    double max_tail = 0.0;
};

// Lab-frame step product of midpoint propagators exp(-i H(t + dt/2) dt).
// Throws FlaggedRunError when the norm drifts by more than 1e-8 or the tail
// weight exceeds 1e-8.
FockState evolve(const FockState& psi0, const SystemParams& params, double tau_final, double dt,
                 EvolveDiagnostics* diag = nullptr);

// Largest step allowed by 2 pi / (200 max(omega_c, zeta_eff^2, g sqrt(n_c))).
double oracle_step(const SystemParams& params, double tau_final, int n_c);

// Moments of a lab-frame ket at time tau, expressed in the frame rotating at
// omega_c.
MomentSet measure(const FockState& psi, double tau, double omega_c);

// Removes the free cavity rotation exp(-i omega_c n tau) from a lab-frame ket.
FockState to_rotating_frame(const FockState& psi, double tau, double omega_c);

// Ket assembled from the decoupled solution (rotating frame): a photon-number
// superposition of mechanical squeezed coherent states.
FockState analytic_ket(const FCoefficients& f, const Bogoliubov& bog, const InitialState& init,
                       const Cutoffs& cut);

// |<x|y>|^2 / (|x|^2 |y|^2): global phase does not matter.
double fidelity(const FockState& x, const FockState& y);

Eigen::MatrixXcd reduced_mechanical(const FockState& psi);
double purity(const Eigen::MatrixXcd& rho);

// ceil(r^2 + 6 r + 8) for a coherent amplitude of modulus r.
int cutoff_for_amplitude(double r);
// Photon cutoff from |mu_c|; phonon cutoff from the largest conditional
// mechanical amplitude on [0, tau_final].
Cutoffs default_cutoffs(const SystemParams& params, const InitialState& init, double tau_final);

struct OracleOptions {
    std::optional<Cutoffs> cutoffs;
    double dt = 0.0;             // 0: oracle_step
    bool halving_check = true;   // rerun at dt/2 and compare moments
    double halving_tol = 1e-4;   // relative, 1e-6 absolute floor
    int max_doublings = 2;       // cutoff doublings after a tail flag
};

struct OracleReport {
    MomentSet moments;
    FockState state;
    Cutoffs cutoffs;
    EvolveDiagnostics diag;
    double halving_change = 0.0;
};

OracleReport run_oracle(const SystemParams& params, const InitialState& init, double tau,
                        const OracleOptions& options = {});

// Largest relative difference between two moment sets (1e-6 absolute floor).
double max_relative_difference(const MomentSet& x, const MomentSet& ref);

}  // namespace optomech
