// kernels.hpp — Lamb-shift kernel f(t) and decoherence kernel Γ(t)
//
//   f(t) = (1/t) ∫₀^∞ G_0(ω) (ωt − sin ωt) / ω² dω
//   Γ(t) = (1/t) ∫₀^∞ G_T(ω) (1 − cos ωt) / ω² dω
//
// The integrals are split into a low-frequency block [0, 2π/t] integrated directly
// with a cancellation-free integrand, a Filon–Legendre block up to the spectral
// cutoff, and a tail whose non-oscillatory part is integrated after ω → ω_cut/u and
// whose oscillatory part is bounded by 2·h(ω_cut)/t (extended until negligible).

#pragma once

#include <string>
#include <vector>

#include "mqsim/bath.hpp"

namespace mqsim {

struct KernelOptions {
    double relative_tolerance{1e-9};  // contract on the returned value
    double internal_tolerance{1e-12}; // target handed to the quadrature rules
};

struct KernelValue {
    double value{0.0};
    double error_bound{0.0};
};

// f(t); t > 0. Throws DomainError for t ≤ 0, NumericError if the tolerance is missed.
KernelValue lamb_kernel(const SpectralDensity& sd, double t, const KernelOptions& opts = {});
// Γ(t); t > 0. Throws NumericError when Γ diverges (G_T ~ 1/ω at ω → 0).
KernelValue decoherence_kernel(const SpectralDensity& sd, double t, const KernelOptions& opts = {});

double f_of_t(const SpectralDensity& sd, double t);
double gamma_of_t(const SpectralDensity& sd, double t);

// Full width at half maximum of G_T over [0, ∞); t_c = 1/width.
double correlation_time(const SpectralDensity& sd);

struct MarkovLimits {
    double f_markov{0.0};
    double gamma_markov{0.0};
    double t_eval{0.0};
    bool gamma_from_zero_frequency{false};  // Γ_M = (π/2)·G_T(0⁺)
    std::vector<std::string> warnings;
};

// f_M = f(t_eval); Γ_M = (π/2)·G_T(0⁺) when finite, Γ(t_eval) otherwise.
// t_eval ≤ 0 selects the default 10³·t_c; explicit values must be ≥ 100·t_c.
MarkovLimits markov_limits(const SpectralDensity& sd, double t_eval = 0.0);

struct KernelTable {
    std::vector<double> times;
    std::vector<double> f_values;
    std::vector<double> gamma_values;
    double f_markov{0.0};
    double gamma_markov{0.0};
    double t_eval{0.0};
    double t_corr{0.0};
    std::vector<std::string> warnings;
};

// Evaluates both kernels on a strictly increasing positive grid. `jobs` > 1 splits the
// grid across threads; results are identical for any job count.
KernelTable tabulate_kernels(const SpectralDensity& sd, const std::vector<double>& grid, int jobs = 1);

} // namespace mqsim
