// scenario.hpp — JSON run descriptions and built-in presets
//
// Schema (version 1):
//   {
//     "schema": 1, "name": "fig1", "units": "omega_c" | "hz",
//     "spectrum": {"kind": "ohmic", "alpha": 2.5e-5, "omega_c": 1, "beta": null},
//     "n_particles": 50, "theta": 1.5707963267948966, "phi": 0,
//     "time_grid": {"spacing": "log", "start": 0.1, "stop": 1e6, "count": 200},
//     "snapshot_times": {"tau_fractions": [0.3, 1.0], "times": []},
//     "basis": "lx",
//     "conventions": {"thermal": "paper", "mqs": "twist"},
//     "outputs": ["kernels", "snapshots", "report"],
//     "output_dir": "out/fig1"
//   }
// "beta": null means zero temperature. With "units": "hz" frequencies are in s⁻¹, times in
// s, and "temperature_kelvin" may replace "beta".

#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "mqsim/bath.hpp"
#include "mqsim/dicke.hpp"
#include "mqsim/evolve.hpp"

namespace mqsim {

// Schema violation; `field` is a dotted path such as "spectrum.alpha".
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// k_B/ħ in s⁻¹ K⁻¹ (exact SI constants).
inline constexpr double kBoltzmannOverHbar = 1.380649e-23 / 1.054571817e-34;

enum class Units { OmegaC, Hz };

struct TimeGrid {
    enum class Spacing { Linear, Log };
    Spacing spacing{Spacing::Log};
    double start{0.1};
    double stop{1e6};
    int count{0};

    std::vector<double> points() const;
};

struct SnapshotTimes {
    std::vector<double> tau_fractions;  // multiples of τ_MQS
    std::vector<double> times;          // absolute times
    bool empty() const noexcept { return tau_fractions.empty() && times.empty(); }
};

struct Outputs {
    bool kernels{false};
    bool snapshots{false};
    bool report{false};
};

struct Scenario {
    std::string name;
    Units units{Units::OmegaC};
    SpectralDensity spectrum;
    std::optional<double> temperature_kelvin;  // echo only; spectrum.beta is authoritative
    int n_particles{1};
    double theta{0.0};
    double phi{0.0};
    TimeGrid time_grid;
    SnapshotTimes snapshot_times;
    Basis basis{Basis::Lz};
    MqsConvention mqs_convention{MqsConvention::TwistCompatible};
    Outputs outputs;
    std::filesystem::path output_dir{"."};
};

Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario(const std::filesystem::path& path);
nlohmann::json scenario_json(const Scenario& s);

// β = ħ/(k_B T) in seconds.
double beta_from_kelvin(double kelvin);

std::vector<std::string> preset_names();
Scenario preset(const std::string& name);

} // namespace mqsim
