// scenario.cpp — schema parsing, serialization and presets

#include "mqsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>

namespace mqsim {

namespace {

using nlohmann::json;

constexpr double kFig2Alpha = 0.04298762165503342;
constexpr double kPhononAlpha = 5e-6;
constexpr double kPhononKelvin = 1e-4;
constexpr double kCavityDetuning = 1e10;

std::string join(const std::string& parent, const std::string& key) {
    return parent.empty() ? key : parent + "." + key;
}

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) throw ConfigError(join(path, key), "unknown field");
    }
}

const json& require(const json& obj, const std::string& path, const std::string& key) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(join(path, key), "required field is missing");
    return *it;
}

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(path, "expected a finite number");
    return x;
}

double positive(const json& v, const std::string& path) {
    const double x = as_number(v, path);
    if (!(x > 0.0)) throw ConfigError(path, "must be > 0");
    return x;
}

std::string as_string(const json& v, const std::string& path) {
    if (!v.is_string()) throw ConfigError(path, "expected a string");
    return v.get<std::string>();
}

std::vector<double> number_list(const json& v, const std::string& path) {
    if (!v.is_array()) throw ConfigError(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(as_number(v[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

ThermalConvention parse_thermal(const std::string& s, const std::string& path) {
    if (s == "paper") return ThermalConvention::PaperCoth;
    if (s == "standard") return ThermalConvention::StandardCothHalf;
    throw ConfigError(path, "expected \"paper\" or \"standard\", got \"" + s + "\"");
}

MqsConvention parse_mqs(const std::string& s, const std::string& path) {
    if (s == "paper") return MqsConvention::PaperEq6;
    if (s == "twist") return MqsConvention::TwistCompatible;
    throw ConfigError(path, "expected \"paper\" or \"twist\", got \"" + s + "\"");
}

SpectralDensity parse_spectrum(const json& j, Units units, ThermalConvention thermal,
                               std::optional<double>& kelvin) {
    const std::string path = "spectrum";
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    reject_unknown(j, path, {"kind", "alpha", "omega_c", "omega_0", "beta", "temperature_kelvin", "table"});
    const std::string kind = as_string(require(j, path, "kind"), "spectrum.kind");

    double beta = std::numeric_limits<double>::infinity();
    const bool has_beta = j.contains("beta") && !j["beta"].is_null();
    const bool has_kelvin = j.contains("temperature_kelvin") && !j["temperature_kelvin"].is_null();
    if (has_beta && has_kelvin) {
        throw ConfigError("spectrum.temperature_kelvin", "give either beta or temperature_kelvin, not both");
    }
    if (has_beta) beta = positive(j["beta"], "spectrum.beta");
    if (has_kelvin) {
        if (units != Units::Hz) throw ConfigError("spectrum.temperature_kelvin", "requires \"units\": \"hz\"");
        const double t = as_number(j["temperature_kelvin"], "spectrum.temperature_kelvin");
        if (t < 0.0) throw ConfigError("spectrum.temperature_kelvin", "must be >= 0");
        kelvin = t;
        beta = beta_from_kelvin(t);
    }

    try {
        if (kind == "ohmic") {
            return SpectralDensity::ohmic(as_number(require(j, path, "alpha"), "spectrum.alpha"),
                                          as_number(require(j, path, "omega_c"), "spectrum.omega_c"), beta,
                                          thermal);
        }
        if (kind == "lorentzian") {
            return SpectralDensity::lorentzian(as_number(require(j, path, "alpha"), "spectrum.alpha"),
                                               as_number(require(j, path, "omega_c"), "spectrum.omega_c"),
                                               as_number(require(j, path, "omega_0"), "spectrum.omega_0"), beta,
                                               thermal);
        }
        if (kind == "tabulated") {
            const auto& t = require(j, path, "table");
            if (!t.is_array()) throw ConfigError("spectrum.table", "expected an array of [omega, value] pairs");
            std::vector<SpectralSample> table;
            for (std::size_t i = 0; i < t.size(); ++i) {
                const std::string p = "spectrum.table[" + std::to_string(i) + "]";
                if (!t[i].is_array() || t[i].size() != 2) throw ConfigError(p, "expected [omega, value]");
                table.push_back({as_number(t[i][0], p + "[0]"), as_number(t[i][1], p + "[1]")});
            }
            return SpectralDensity::tabulated(std::move(table), beta, thermal);
        }
    } catch (const UsageError& e) {
        throw ConfigError(path, e.what());
    }
    throw ConfigError("spectrum.kind", "expected \"ohmic\", \"lorentzian\" or \"tabulated\", got \"" + kind + "\"");
}

TimeGrid parse_grid(const json& j) {
    const std::string path = "time_grid";
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    reject_unknown(j, path, {"spacing", "start", "stop", "count"});
    TimeGrid g;
    const std::string spacing = j.contains("spacing") ? as_string(j["spacing"], "time_grid.spacing") : "log";
    if (spacing == "log") {
        g.spacing = TimeGrid::Spacing::Log;
    } else if (spacing == "linear") {
        g.spacing = TimeGrid::Spacing::Linear;
    } else {
        throw ConfigError("time_grid.spacing", "expected \"log\" or \"linear\"");
    }
    g.start = positive(require(j, path, "start"), "time_grid.start");
    g.stop = positive(require(j, path, "stop"), "time_grid.stop");
    const auto& c = require(j, path, "count");
    if (!c.is_number_integer() || c.get<long long>() < 1 || c.get<long long>() > 1000000) {
        throw ConfigError("time_grid.count", "expected an integer in [1, 1000000]");
    }
    g.count = c.get<int>();
    if (g.count > 1 && !(g.stop > g.start)) throw ConfigError("time_grid.stop", "must exceed time_grid.start");
    return g;
}

} // namespace

std::vector<double> TimeGrid::points() const {
    std::vector<double> out(static_cast<std::size_t>(std::max(count, 0)));
    if (count == 1) {
        out[0] = start;
        return out;
    }
    for (int i = 0; i < count; ++i) {
        const double u = static_cast<double>(i) / (count - 1);
        if (spacing == Spacing::Log) {
            out[i] = std::exp(std::log(start) + u * (std::log(stop) - std::log(start)));
        } else {
            out[i] = start + u * (stop - start);
        }
    }
    out.front() = start;
    out.back() = stop;
    return out;
}

double beta_from_kelvin(double kelvin) {
    if (kelvin == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / (kBoltzmannOverHbar * kelvin);
}

Scenario parse_scenario(const json& j) {
    if (!j.is_object()) throw ConfigError("(root)", "expected a JSON object");
    reject_unknown(j, "", {"schema", "name", "units", "spectrum", "n_particles", "theta", "phi", "time_grid",
                           "snapshot_times", "basis", "conventions", "outputs", "output_dir"});
    const auto& schema = require(j, "", "schema");
    if (!schema.is_number_integer() || schema.get<int>() != 1) throw ConfigError("schema", "expected 1");

    Scenario s;
    s.name = as_string(require(j, "", "name"), "name");
    if (s.name.empty()) throw ConfigError("name", "must be nonempty");
    if (s.name.find_first_of("/\\") != std::string::npos) throw ConfigError("name", "must not contain path separators");

    if (j.contains("units")) {
        const std::string u = as_string(j["units"], "units");
        if (u == "omega_c") {
            s.units = Units::OmegaC;
        } else if (u == "hz") {
            s.units = Units::Hz;
        } else {
            throw ConfigError("units", "expected \"omega_c\" or \"hz\"");
        }
    }

    ThermalConvention thermal = ThermalConvention::PaperCoth;
    if (j.contains("conventions")) {
        const auto& c = j["conventions"];
        if (!c.is_object()) throw ConfigError("conventions", "expected an object");
        reject_unknown(c, "conventions", {"thermal", "mqs"});
        if (c.contains("thermal")) thermal = parse_thermal(as_string(c["thermal"], "conventions.thermal"), "conventions.thermal");
        if (c.contains("mqs")) s.mqs_convention = parse_mqs(as_string(c["mqs"], "conventions.mqs"), "conventions.mqs");
    }

    s.spectrum = parse_spectrum(require(j, "", "spectrum"), s.units, thermal, s.temperature_kelvin);

    const auto& n = require(j, "", "n_particles");
    if (!n.is_number_integer() || n.get<long long>() < 1 || n.get<long long>() > 100000) {
        throw ConfigError("n_particles", "expected an integer in [1, 100000]");
    }
    s.n_particles = n.get<int>();
    s.theta = j.contains("theta") ? as_number(j["theta"], "theta") : 0.5 * std::numbers::pi;
    s.phi = j.contains("phi") ? as_number(j["phi"], "phi") : 0.0;

    s.time_grid = parse_grid(require(j, "", "time_grid"));

    if (j.contains("snapshot_times")) {
        const auto& st = j["snapshot_times"];
        if (!st.is_object()) throw ConfigError("snapshot_times", "expected an object");
        reject_unknown(st, "snapshot_times", {"tau_fractions", "times"});
        if (st.contains("tau_fractions")) {
            s.snapshot_times.tau_fractions = number_list(st["tau_fractions"], "snapshot_times.tau_fractions");
            for (std::size_t i = 0; i < s.snapshot_times.tau_fractions.size(); ++i) {
                if (s.snapshot_times.tau_fractions[i] < 0.0) {
                    throw ConfigError("snapshot_times.tau_fractions[" + std::to_string(i) + "]", "must be >= 0");
                }
            }
        }
        if (st.contains("times")) {
            s.snapshot_times.times = number_list(st["times"], "snapshot_times.times");
            for (std::size_t i = 0; i < s.snapshot_times.times.size(); ++i) {
                if (s.snapshot_times.times[i] < 0.0) {
                    throw ConfigError("snapshot_times.times[" + std::to_string(i) + "]", "must be >= 0");
                }
            }
        }
    }

    if (j.contains("basis")) {
        const std::string b = as_string(j["basis"], "basis");
        if (b == "lz") {
            s.basis = Basis::Lz;
        } else if (b == "lx") {
            s.basis = Basis::Lx;
        } else {
            throw ConfigError("basis", "expected \"lz\" or \"lx\"");
        }
    }

    const auto& outs = require(j, "", "outputs");
    if (!outs.is_array() || outs.empty()) throw ConfigError("outputs", "expected a nonempty array");
    for (std::size_t i = 0; i < outs.size(); ++i) {
        const std::string p = "outputs[" + std::to_string(i) + "]";
        const std::string o = as_string(outs[i], p);
        if (o == "kernels") {
            s.outputs.kernels = true;
        } else if (o == "snapshots") {
            s.outputs.snapshots = true;
        } else if (o == "report") {
            s.outputs.report = true;
        } else {
            throw ConfigError(p, "expected \"kernels\", \"snapshots\" or \"report\"");
        }
    }
    if (s.outputs.snapshots && s.snapshot_times.empty()) {
        throw ConfigError("snapshot_times", "required when outputs contains \"snapshots\"");
    }

    s.output_dir = j.contains("output_dir") ? as_string(j["output_dir"], "output_dir") : std::string(".");
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("(file)", "cannot open " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("(file)", std::string("invalid JSON: ") + e.what());
    }
    return parse_scenario(j);
}

json scenario_json(const Scenario& s) {
    json spec;
    spec["kind"] = to_string(s.spectrum.kind);
    if (s.spectrum.kind == SpectrumKind::Tabulated) {
        json rows = json::array();
        for (const auto& r : s.spectrum.table) rows.push_back({r.omega, r.value});
        spec["table"] = rows;
    } else {
        spec["alpha"] = s.spectrum.alpha;
        spec["omega_c"] = s.spectrum.omega_c;
        if (s.spectrum.kind == SpectrumKind::Lorentzian) spec["omega_0"] = s.spectrum.omega_0;
    }
    if (s.temperature_kelvin) {
        spec["temperature_kelvin"] = *s.temperature_kelvin;
    } else if (s.spectrum.zero_temperature()) {
        spec["beta"] = nullptr;
    } else {
        spec["beta"] = s.spectrum.beta;
    }

    json outputs = json::array();
    if (s.outputs.kernels) outputs.push_back("kernels");
    if (s.outputs.snapshots) outputs.push_back("snapshots");
    if (s.outputs.report) outputs.push_back("report");

    json j = {
        {"schema", 1},
        {"name", s.name},
        {"units", s.units == Units::Hz ? "hz" : "omega_c"},
        {"spectrum", spec},
        {"n_particles", s.n_particles},
        {"theta", s.theta},
        {"phi", s.phi},
        {"time_grid",
         {{"spacing", s.time_grid.spacing == TimeGrid::Spacing::Log ? "log" : "linear"},
          {"start", s.time_grid.start},
          {"stop", s.time_grid.stop},
          {"count", s.time_grid.count}}},
        {"basis", to_string(s.basis)},
        {"conventions", {{"thermal", to_string(s.spectrum.thermal)}, {"mqs", to_string(s.mqs_convention)}}},
        {"outputs", outputs},
        {"output_dir", s.output_dir.string()},
    };
    if (!s.snapshot_times.empty()) {
        j["snapshot_times"] = {{"tau_fractions", s.snapshot_times.tau_fractions},
                               {"times", s.snapshot_times.times}};
    }
    return j;
}

std::vector<std::string> preset_names() { return {"fig1", "fig2", "phonon", "cavity"}; }

Scenario preset(const std::string& name) {
    Scenario s;
    s.name = name;
    s.output_dir = "out/" + name;
    if (name == "fig1") {
        // η ≈ 0.005 ω_c ⇒ α = η² = 2.5e-5.
        s.spectrum = SpectralDensity::ohmic(2.5e-5, 1.0);
        s.n_particles = 50;
        s.theta = 0.5 * std::numbers::pi;
        s.phi = 0.0;
        s.time_grid = {TimeGrid::Spacing::Log, 0.1, 1e6, 141};
        s.snapshot_times.tau_fractions = {0.3, 1.0};
        s.basis = Basis::Lx;
        s.outputs = {true, true, true};
        return s;
    }
    if (name == "fig2") {
        // α solves τ_MQS = 100/ω_c for a Lorentzian of half width ω_c centered at 10 ω_c.
        s.spectrum = SpectralDensity::lorentzian(kFig2Alpha, 1.0, 10.0);
        s.n_particles = 50;
        s.theta = 0.5 * std::numbers::pi;
        s.phi = 0.0;
        s.time_grid = {TimeGrid::Spacing::Log, 0.01, 1e4, 121};
        s.snapshot_times.tau_fractions = {1.0};
        s.basis = Basis::Lx;
        s.outputs = {true, true, true};
        return s;
    }
    if (name == "phonon") {
        // Debye cutoff 1e13 s⁻¹ at 0.1 mK.
        s.units = Units::Hz;
        s.temperature_kelvin = kPhononKelvin;
        s.spectrum = SpectralDensity::ohmic(kPhononAlpha, 1e13, beta_from_kelvin(kPhononKelvin));
        s.n_particles = 100;
        s.theta = 0.5 * std::numbers::pi;
        s.time_grid = {TimeGrid::Spacing::Log, 1e-15, 1e-3, 121};
        s.basis = Basis::Lx;
        s.outputs = {true, false, true};
        return s;
    }
    if (name == "cavity") {
        // η ~ 1 MHz coupling, 1 MHz linewidth, 10 GHz detuning, optical photons at T = 0.
        s.units = Units::Hz;
        s.spectrum = SpectralDensity::lorentzian(1e6, 1e6, kCavityDetuning);
        s.n_particles = 100;
        s.theta = 0.5 * std::numbers::pi;
        s.time_grid = {TimeGrid::Spacing::Log, 1e-10, 1e-1, 101};
        s.basis = Basis::Lx;
        s.outputs = {true, false, true};
        return s;
    }
    throw ConfigError("preset", "unknown preset \"" + name + "\"");
}

} // namespace mqsim
