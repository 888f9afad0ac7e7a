// evolve.hpp — exact reduced dynamics, cat-state targets, formation time and survival
//
// In a fixed sector the bath traces out to
//   ρ_{mm'}(t) = ρ_{mm'}(0) · e^{−i t f(t)(m² − m'²)} · e^{−t Γ(t)(m − m')²},
// i.e. one-axis twisting by the accumulated phase t·f(t) plus Gaussian dephasing.

#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "mqsim/bath.hpp"
#include "mqsim/dicke.hpp"

namespace mqsim {

enum class MqsConvention {
    PaperEq6,         // (e^{−iπ/4}|θ,φ⟩ + e^{iπ/4}|θ−π,φ⟩)/√2
    TwistCompatible,  // (e^{−iπ/4}|θ,φ⟩ + e^{iπ/4}|θ,φ+π⟩)/√2
};

std::string to_string(MqsConvention conv);

// Suppressed forces Γ ≡ 0 so unitary twisting can be checked on its own. Not reachable
// from scenario files.
enum class Decoherence { Physical, Suppressed };

struct EvolutionParams {
    SpectralDensity spectrum;
    SectorLabel sector;
    double theta{0.0};
    double phi{0.0};
    DickeState<double> initial;
    MqsConvention mqs_convention{MqsConvention::TwistCompatible};
    Decoherence decoherence{Decoherence::Physical};

    // Symmetric sector of N spins starting from the coherent state |θ, φ⟩.
    static EvolutionParams coherent(const SpectralDensity& spectrum, int n_particles, double theta,
                                    double phi, MqsConvention conv = MqsConvention::TwistCompatible);
};

// Elementwise reduced dynamics for an accumulated twist phase `twist` = t·f(t) and
// accumulated dephasing `dephasing` = t·Γ(t). Works on any sector, including mixed
// per-sector inputs ρ_l(0).
template <typename Real>
DickeDensityMatrix<Real> apply_reduced_dynamics(const DickeDensityMatrix<Real>& rho0, double twist,
                                                double dephasing) {
    if (rho0.basis != Basis::Lz) throw UsageError("apply_reduced_dynamics: input must be in the L_z basis");
    const auto d = rho0.sector.dimension();
    // e^{−i·twist·m²} per row; reduced mod 2π before forming the phase.
    ComplexVector<Real> phase(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const double m = rho0.sector.m(i);
        const double angle = std::remainder(twist * m * m, 2.0 * std::numbers::pi);
        phase(i) = std::polar(Real(1), Real(-angle));
    }
    DickeDensityMatrix<Real> out{rho0.sector, ComplexMatrix<Real>(d, d), Basis::Lz};
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) {
            const double dm = static_cast<double>(j - i);  // m − m' = (l − i) − (l − j)
            const Real decay = static_cast<Real>(std::exp(-dephasing * dm * dm));
            out.elements(i, j) = rho0.elements(i, j) * phase(i) * std::conj(phase(j)) * decay;
        }
    }
    return out;
}

template <typename Real>
DickeDensityMatrix<Real> apply_reduced_dynamics(const DickeState<Real>& psi0, double twist, double dephasing) {
    return apply_reduced_dynamics(projector(psi0), twist, dephasing);
}

struct KernelSample {
    double t{0.0};
    double f{0.0};
    double gamma{0.0};
};

// f(t), Γ(t) honoring the Decoherence hook; t = 0 gives zeros.
KernelSample sample_kernels(const EvolutionParams& p, double t);

// ρ(t) in the L_z basis. t = 0 returns the initial projector.
DickeDensityMatrix<double> evolve_state(const EvolutionParams& p, double t);

// Cat-state target. The antipodal component carries the global phase that makes it
// equal to e^{−iπL_z}|θ,φ⟩ on the equator, so at θ = π/2 both conventions coincide and
// the target is exactly the state reached at t·f(t) = π/2 for every even N.
DickeState<double> mqs_target(const SectorLabel& sector, double theta, double phi, MqsConvention conv);

struct TauSolution {
    double tau{0.0};
    double bracket_lo{0.0};  // g(lo) < 0
    double bracket_hi{0.0};  // g(hi) ≥ 0
    double residual{0.0};    // τ f(τ) − π/2
    int evaluations{0};
};

struct TauOptions {
    double horizon_factor{1e6};       // search up to horizon_factor · t_c
    double residual_tolerance{1e-9};  // relative to π/2
};

// Earliest root of t·f(t) = π/2. Throws NoFormationError when unreachable.
TauSolution solve_tau_mqs(const SpectralDensity& sd, const TauOptions& opts = {});

struct MqsReport {
    int n_particles{0};
    double tau_mqs{0.0};
    double f_at_tau{0.0};
    double gamma_at_tau{0.0};
    double tau_gamma{0.0};  // τ·Γ(τ)
    double fidelity{0.0};
    double corner{0.0};
    double purity{0.0};
    bool feasible{false};               // τ Γ(τ) N² < 1
    std::optional<long long> n_max;     // floor(1/sqrt(τΓ(τ))); empty when Γ(τ) = 0
    MqsConvention convention_used{MqsConvention::TwistCompatible};
};

MqsReport assess_mqs(const EvolutionParams& p, const TauOptions& opts = {});

struct Snapshot {
    double time{0.0};
    double f{0.0};
    double gamma{0.0};
    DickeDensityMatrix<double> rho;
};

// ρ at each time, rotated to `basis`. `jobs` > 1 evaluates times concurrently; output
// order and values do not depend on it.
std::vector<Snapshot> snapshot_series(const EvolutionParams& p, const std::vector<double>& times,
                                      Basis basis, int jobs = 1);

} // namespace mqsim
