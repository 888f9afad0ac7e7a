// bath.cpp — spectral densities

#include "mqsim/bath.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mqsim/errors.hpp"
#include "mqsim/quadrature.hpp"

namespace mqsim {

SpectralDensity SpectralDensity::ohmic(double alpha, double omega_c, double beta,
                                       ThermalConvention conv) {
    SpectralDensity sd;
    sd.kind = SpectrumKind::Ohmic;
    sd.alpha = alpha;
    sd.omega_c = omega_c;
    sd.beta = beta;
    sd.thermal = conv;
    sd.validate();
    return sd;
}

SpectralDensity SpectralDensity::lorentzian(double alpha, double omega_c, double omega_0,
                                            double beta, ThermalConvention conv) {
    SpectralDensity sd;
    sd.kind = SpectrumKind::Lorentzian;
    sd.alpha = alpha;
    sd.omega_c = omega_c;
    sd.omega_0 = omega_0;
    sd.beta = beta;
    sd.thermal = conv;
    sd.validate();
    return sd;
}

SpectralDensity SpectralDensity::tabulated(std::vector<SpectralSample> table, double beta,
                                           ThermalConvention conv) {
    SpectralDensity sd;
    sd.kind = SpectrumKind::Tabulated;
    sd.table = std::move(table);
    sd.beta = beta;
    sd.thermal = conv;
    sd.validate();
    return sd;
}

void SpectralDensity::validate() const {
    auto fail = [](const std::string& msg) { throw UsageError("spectral density: " + msg); };
    if (std::isnan(beta) || !(beta > 0.0)) fail("beta must be > 0 (use +inf for zero temperature)");
    switch (kind) {
        case SpectrumKind::Ohmic:
        case SpectrumKind::Lorentzian:
            if (!std::isfinite(alpha) || alpha < 0.0) fail("alpha must be finite and >= 0");
            if (!std::isfinite(omega_c) || !(omega_c > 0.0)) fail("omega_c must be finite and > 0");
            if (kind == SpectrumKind::Lorentzian && (!std::isfinite(omega_0) || omega_0 < 0.0)) {
                fail("omega_0 must be finite and >= 0");
            }
            break;
        case SpectrumKind::Tabulated: {
            if (table.empty()) fail("tabulated spectrum needs at least one sample");
            for (std::size_t i = 0; i < table.size(); ++i) {
                const auto& s = table[i];
                if (!std::isfinite(s.omega) || s.omega < 0.0) fail("table frequencies must be finite and >= 0");
                if (!std::isfinite(s.value) || s.value < 0.0) fail("table values must be finite and >= 0");
                if (i > 0 && !(s.omega > table[i - 1].omega)) fail("table frequencies must be strictly increasing");
            }
            break;
        }
    }
}

std::string to_string(SpectrumKind kind) {
    switch (kind) {
        case SpectrumKind::Ohmic: return "ohmic";
        case SpectrumKind::Lorentzian: return "lorentzian";
        case SpectrumKind::Tabulated: return "tabulated";
    }
    return "unknown";
}

std::string to_string(ThermalConvention conv) {
    return conv == ThermalConvention::PaperCoth ? "paper" : "standard";
}

double eval_g0(const SpectralDensity& sd, double omega) {
    if (!(omega >= 0.0)) {
        std::ostringstream msg;
        msg << "eval_g0: frequency must be >= 0, got " << omega;
        throw DomainError(msg.str());
    }
    switch (sd.kind) {
        case SpectrumKind::Ohmic:
            return sd.alpha * omega * std::exp(-omega / sd.omega_c);
        case SpectrumKind::Lorentzian: {
            const double d = omega - sd.omega_0;
            const double wc2 = sd.omega_c * sd.omega_c;
            return sd.alpha * wc2 / (wc2 + d * d);
        }
        case SpectrumKind::Tabulated: {
            const auto& tab = sd.table;
            if (tab.empty() || omega < tab.front().omega || omega > tab.back().omega) return 0.0;
            auto hi = std::upper_bound(tab.begin(), tab.end(), omega,
                                       [](double w, const SpectralSample& s) { return w < s.omega; });
            if (hi == tab.end()) return tab.back().value;
            auto lo = std::prev(hi);
            const double u = (omega - lo->omega) / (hi->omega - lo->omega);
            return lo->value + u * (hi->value - lo->value);
        }
    }
    return 0.0;
}

double thermal_factor(const SpectralDensity& sd, double omega) {
    if (sd.zero_temperature()) return 1.0;
    const double x = sd.thermal == ThermalConvention::PaperCoth ? sd.beta * omega : 0.5 * sd.beta * omega;
    return 1.0 / std::tanh(x);
}

double g0_at_zero(const SpectralDensity& sd) {
    if (sd.kind == SpectrumKind::Tabulated) {
        return sd.table.front().omega == 0.0 ? sd.table.front().value : 0.0;
    }
    return eval_g0(sd, 0.0);
}

double gt_at_zero(const SpectralDensity& sd) {
    const double g0 = g0_at_zero(sd);
    if (sd.zero_temperature()) return g0;
    if (g0 > 0.0) return std::numeric_limits<double>::infinity();
    double slope = 0.0;
    switch (sd.kind) {
        case SpectrumKind::Ohmic:
            slope = sd.alpha;
            break;
        case SpectrumKind::Lorentzian:
            slope = 0.0;  // g0 > 0 unless α = 0
            break;
        case SpectrumKind::Tabulated:
            if (sd.table.size() > 1 && sd.table.front().omega == 0.0) {
                slope = (sd.table[1].value - sd.table[0].value) / sd.table[1].omega;
            }
            break;
    }
    // G_0 ≈ slope·ω and coth(x) ≈ 1/x.
    const double scale = sd.thermal == ThermalConvention::PaperCoth ? 1.0 : 2.0;
    return scale * slope / sd.beta;
}

double eval_gt(const SpectralDensity& sd, double omega) {
    const double g0 = eval_g0(sd, omega);
    if (sd.zero_temperature()) return g0;
    if (omega == 0.0) return gt_at_zero(sd);
    return g0 * thermal_factor(sd, omega);
}

double integration_cutoff(const SpectralDensity& sd) {
    switch (sd.kind) {
        case SpectrumKind::Ohmic: return 50.0 * sd.omega_c;
        case SpectrumKind::Lorentzian: return sd.omega_0 + 50.0 * sd.omega_c;
        case SpectrumKind::Tabulated: return sd.table.empty() ? 0.0 : sd.table.back().omega;
    }
    return 0.0;
}

bool has_compact_support(const SpectralDensity& sd) {
    return sd.kind == SpectrumKind::Tabulated;
}

std::vector<double> spectral_breakpoints(const SpectralDensity& sd) {
    std::vector<double> pts;
    switch (sd.kind) {
        case SpectrumKind::Ohmic:
            pts = {sd.omega_c, 10.0 * sd.omega_c};
            break;
        case SpectrumKind::Lorentzian:
            for (double k : {-10.0, -3.0, -1.0, 0.0, 1.0, 3.0, 10.0}) {
                const double w = sd.omega_0 + k * sd.omega_c;
                if (w > 0.0) pts.push_back(w);
            }
            break;
        case SpectrumKind::Tabulated:
            for (const auto& s : sd.table) pts.push_back(s.omega);
            break;
    }
    return pts;
}

double total_coupling(const SpectralDensity& sd) {
    double integral = 0.0;
    if (sd.kind == SpectrumKind::Tabulated) {
        quad::CompensatedSum sum;
        for (std::size_t i = 1; i < sd.table.size(); ++i) {
            const auto& a = sd.table[i - 1];
            const auto& b = sd.table[i];
            sum.add(0.5 * (a.value + b.value) * (b.omega - a.omega));
        }
        integral = sum.value();
    } else {
        auto g0 = [&](double w) { return eval_g0(sd, w); };
        const double cut = integration_cutoff(sd);
        const auto brk = spectral_breakpoints(sd);
        quad::Tolerance tol{1e-13, 0.0, 4000};
        const auto body = quad::integrate(g0, 0.0, cut, tol, brk);
        const auto tail = quad::integrate_to_infinity(g0, cut, tol);
        integral = body.value + tail.value;
    }
    if (!std::isfinite(integral) || integral < 0.0) {
        throw NumericError("total_coupling: integral of G_0 is not finite", integral, 0.0);
    }
    return std::sqrt(integral);
}

SpectralDensity rescale_frequency(const SpectralDensity& sd, double s) {
    if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("rescale_frequency: scale must be finite and > 0");
    SpectralDensity out = sd;
    out.omega_c = sd.omega_c * s;
    out.omega_0 = sd.omega_0 * s;
    out.beta = sd.beta / s;
    if (sd.kind == SpectrumKind::Lorentzian) out.alpha = sd.alpha * s;
    for (auto& sample : out.table) {
        sample.omega *= s;
        sample.value *= s;
    }
    return out;
}

} // namespace mqsim
