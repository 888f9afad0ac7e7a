// bath.hpp — bath coupling spectra G_0(ω) and the thermal spectrum G_T(ω)
//
// Units: ħ = k_B = 1. All frequencies share one unit (ω_c by default, s⁻¹ for the
// physical presets); β is in inverse frequency units and β = +∞ means zero temperature.

#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace mqsim {

enum class SpectrumKind { Ohmic, Lorentzian, Tabulated };

// coth(βω) as printed for the finite-temperature spectrum, or the susceptibility
// convention coth(βω/2).
enum class ThermalConvention { PaperCoth, StandardCothHalf };

struct SpectralSample {
    double omega;
    double value;
};

struct SpectralDensity {
    SpectrumKind kind{SpectrumKind::Ohmic};
    double alpha{0.0};     // dimensionless coupling
    double omega_c{1.0};   // cutoff (Ohmic) or half width (Lorentzian)
    double omega_0{0.0};   // Lorentzian center
    std::vector<SpectralSample> table;  // Tabulated only, ω strictly increasing
    double beta{std::numeric_limits<double>::infinity()};
    ThermalConvention thermal{ThermalConvention::PaperCoth};

    static SpectralDensity ohmic(double alpha, double omega_c,
                                 double beta = std::numeric_limits<double>::infinity(),
                                 ThermalConvention conv = ThermalConvention::PaperCoth);
    static SpectralDensity lorentzian(double alpha, double omega_c, double omega_0,
                                      double beta = std::numeric_limits<double>::infinity(),
                                      ThermalConvention conv = ThermalConvention::PaperCoth);
    static SpectralDensity tabulated(std::vector<SpectralSample> table,
                                     double beta = std::numeric_limits<double>::infinity(),
                                     ThermalConvention conv = ThermalConvention::PaperCoth);

    bool zero_temperature() const noexcept { return beta == std::numeric_limits<double>::infinity(); }

    // Throws UsageError describing the first violated invariant.
    void validate() const;
};

std::string to_string(SpectrumKind kind);
std::string to_string(ThermalConvention conv);

// G_0(ω). Throws DomainError for ω < 0.
double eval_g0(const SpectralDensity& sd, double omega);

// G_T(ω) = G_0(ω)·coth(βω) (or coth(βω/2)). At ω = 0 the analytic limit is returned,
// which is +∞ when G_0(0) > 0 at finite temperature.
double eval_gt(const SpectralDensity& sd, double omega);

// Thermal factor alone; 1 at zero temperature.
double thermal_factor(const SpectralDensity& sd, double omega);

// G_0(0⁺).
double g0_at_zero(const SpectralDensity& sd);

// lim_{ω→0⁺} G_T(ω); +∞ when it diverges.
double gt_at_zero(const SpectralDensity& sd);

// η = sqrt(∫₀^∞ G_0(ω) dω).
double total_coupling(const SpectralDensity& sd);

// Frequency beyond which the spectrum is treated as a tail: ω_0 + 50·ω_c for the
// analytic families, the last node for tables.
double integration_cutoff(const SpectralDensity& sd);

// True if G_0 vanishes identically beyond integration_cutoff().
bool has_compact_support(const SpectralDensity& sd);

// Points where G_0 is not smooth or has structure narrower than the cutoff scale.
std::vector<double> spectral_breakpoints(const SpectralDensity& sd);

// Spectrum with G'(sω) = s·G(ω): frequencies and β⁻¹ scale by s. Ohmic keeps α;
// Lorentzian α and tabulated values scale by s so G keeps frequency units.
SpectralDensity rescale_frequency(const SpectralDensity& sd, double s);

} // namespace mqsim
