// cli.cpp — `run`, `sweep`, `presets`, `emit-preset`

#include "mqsim/cli.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "mqsim/errors.hpp"
#include "mqsim/evolve.hpp"
#include "mqsim/io.hpp"
#include "mqsim/kernels.hpp"

namespace mqsim::cli {

namespace {

using nlohmann::json;

// Runs `fn`, converting numeric and domain failures into RunError tagged with `op`.
template <typename Fn>
auto step(const std::string& op, Fn&& fn) {
    try {
        return fn();
    } catch (const RunError&) {
        throw;
    } catch (const ConfigError&) {
        throw;
    } catch (const NumericError& e) {
        throw RunError(op, e.what());
    } catch (const DomainError& e) {
        throw RunError(op, e.what());
    } catch (const UsageError& e) {
        throw RunError(op, e.what());
    }
}

std::string units_tag(const Scenario& s) { return s.units == Units::Hz ? "hz" : "omega_c"; }

std::vector<std::string> header_comments(const Scenario& s) {
    return {"scenario " + s.name, "units " + units_tag(s) + (s.units == Units::Hz ? " (time in s, frequency in s^-1)" : " (time in 1/omega_c)")};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Runs fn(i) for i in [0, n) on `jobs` threads with a strided split; results are stored
// by index so the schedule never affects output.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(jobs > 0 ? jobs : 1, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

std::vector<double> parse_values(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) throw ConfigError("--values", "empty entry in value list");
        item = item.substr(b, e - b + 1);
        if (item == "inf") {
            out.push_back(std::numeric_limits<double>::infinity());
            continue;
        }
        char* end = nullptr;
        errno = 0;
        const double v = std::strtod(item.c_str(), &end);
        if (end != item.c_str() + item.size() || errno == ERANGE || !std::isfinite(v)) {
            throw ConfigError("--values", "not a number: \"" + item + "\"");
        }
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError("--values", "value list is empty");
    return out;
}

Scenario apply_axis(Scenario s, SweepAxis axis, double v) {
    switch (axis) {
    case SweepAxis::N:
        s.n_particles = static_cast<int>(v);
        break;
    case SweepAxis::Beta:
        s.spectrum.beta = v;
        s.temperature_kelvin.reset();
        break;
    case SweepAxis::Alpha:
        s.spectrum.alpha = v;
        break;
    case SweepAxis::Omega0:
        s.spectrum.omega_0 = v;
        break;
    }
    return s;
}

void validate_axis(const Scenario& base, SweepAxis axis, const std::vector<double>& values) {
    if (values.empty()) throw ConfigError("--values", "value list is empty");
    if (axis == SweepAxis::Omega0 && base.spectrum.kind != SpectrumKind::Lorentzian) {
        throw ConfigError("--axis", "omega_0 applies only to lorentzian spectra");
    }
    if (axis == SweepAxis::Alpha && base.spectrum.kind == SpectrumKind::Tabulated) {
        throw ConfigError("--axis", "alpha does not apply to tabulated spectra");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = values[i];
        const std::string field = "--values[" + std::to_string(i) + "]";
        if (axis == SweepAxis::N && (v < 1 || v > 100000 || v != std::floor(v))) {
            throw ConfigError(field, "N must be an integer in [1, 100000]");
        }
        if (axis == SweepAxis::Beta && !(v > 0.0)) throw ConfigError(field, "beta must be > 0");
        if (axis != SweepAxis::Beta && !std::isfinite(v)) throw ConfigError(field, "must be finite");
        if (axis == SweepAxis::Alpha && !(v >= 0.0)) throw ConfigError(field, "alpha must be >= 0");
        if (axis == SweepAxis::Omega0 && !(v >= 0.0)) throw ConfigError(field, "omega_0 must be >= 0");
    }
}

struct SweepRow {
    MqsReport report;
    double gamma_markov{std::nan("")};
    std::string error;
};

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

} // namespace

SweepAxis parse_axis(const std::string& name) {
    if (name == "N") return SweepAxis::N;
    if (name == "beta") return SweepAxis::Beta;
    if (name == "alpha") return SweepAxis::Alpha;
    if (name == "omega_0") return SweepAxis::Omega0;
    throw ConfigError("--axis", "expected N, beta, alpha or omega_0, got \"" + name + "\"");
}

std::string to_string(SweepAxis axis) {
    switch (axis) {
    case SweepAxis::N: return "N";
    case SweepAxis::Beta: return "beta";
    case SweepAxis::Alpha: return "alpha";
    case SweepAxis::Omega0: return "omega_0";
    }
    return "?";
}

json run_scenario(const Scenario& s, const RunOptions& opts) {
    const auto dir = s.output_dir;
    json artifacts = json::array();
    auto emit = [&](const std::string& file, const std::string& content) {
        io::write_atomic(dir / file, content);
        artifacts.push_back((dir / file).string());
    };

    json summary = {{"status", "ok"}, {"scenario", s.name}, {"units", units_tag(s)}};

    const auto params = step("coherent_state", [&] {
        return EvolutionParams::coherent(s.spectrum, s.n_particles, s.theta, s.phi, s.mqs_convention);
    });

    if (s.outputs.kernels) {
        const auto table = step("tabulate_kernels", [&] {
            return tabulate_kernels(s.spectrum, s.time_grid.points(), opts.jobs);
        });
        auto meta = io::kernel_table_json(table);
        meta["scenario"] = s.name;
        meta["units"] = units_tag(s);
        meta["spectrum"] = io::spectrum_json(s.spectrum);
        meta["csv"] = s.name + "_kernels.csv";
        emit(s.name + "_kernels.csv", io::kernel_table_csv(table, header_comments(s)));
        emit(s.name + "_kernels.json", dump(meta));
        summary["f_markov"] = table.f_markov;
        summary["gamma_markov"] = table.gamma_markov;
    }

    const bool need_tau = s.outputs.report || !s.snapshot_times.tau_fractions.empty();
    std::optional<MqsReport> report;
    if (need_tau) {
        report = step("solve_tau_mqs", [&] { return assess_mqs(params); });
        summary["tau_mqs"] = report->tau_mqs;
        summary["n_max"] = report->n_max ? json(*report->n_max) : json(nullptr);
        summary["feasible"] = report->feasible;
    }

    if (s.outputs.report) {
        json doc = {
            {"scenario", s.name},
            {"units", units_tag(s)},
            {"spectrum", io::spectrum_json(s.spectrum)},
            {"conventions", {{"thermal", to_string(s.spectrum.thermal)}, {"mqs", to_string(s.mqs_convention)}}},
            {"initial", {{"theta", s.theta}, {"phi", s.phi}}},
            {"report", io::report_json(*report)},
        };
        if (s.temperature_kelvin) doc["spectrum"]["temperature_kelvin"] = *s.temperature_kelvin;
        emit(s.name + "_report.json", dump(doc));
    }

    if (s.outputs.snapshots) {
        std::vector<double> times;
        for (double frac : s.snapshot_times.tau_fractions) times.push_back(frac * report->tau_mqs);
        for (double t : s.snapshot_times.times) times.push_back(t);
        const auto snaps = step("snapshot_series", [&] { return snapshot_series(params, times, s.basis, opts.jobs); });
        json index = {
            {"scenario", s.name},
            {"units", units_tag(s)},
            {"basis", to_string(s.basis)},
            {"sector", {{"n_particles", params.sector.n_particles}, {"two_l", params.sector.two_l}}},
            {"snapshots", json::array()},
        };
        for (std::size_t k = 0; k < snaps.size(); ++k) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "%02zu", k);
            const std::string file = s.name + "_snapshot_" + buf + ".csv";
            auto comments = header_comments(s);
            comments.push_back("basis " + to_string(s.basis) + ", t = " + io::format_number(snaps[k].time) +
                               ", rows m, columns m', values |rho|");
            emit(file, io::density_grid_csv(snaps[k].rho, comments));
            auto side = io::snapshot_sidecar(snaps[k], file);
            if (k < s.snapshot_times.tau_fractions.size()) side["tau_fraction"] = s.snapshot_times.tau_fractions[k];
            index["snapshots"].push_back(side);
        }
        emit(s.name + "_snapshots.json", dump(index));
    }

    summary["artifacts"] = artifacts;
    return summary;
}

std::string sweep_csv(const Scenario& base, SweepAxis axis, const std::vector<double>& values,
                      const RunOptions& opts) {
    validate_axis(base, axis, values);
    std::vector<SweepRow> rows(values.size());
    parallel_for(values.size(), opts.jobs, [&](std::size_t i) {
        const Scenario s = apply_axis(base, axis, values[i]);
        SweepRow& row = rows[i];
        std::string op = "coherent_state";
        try {
            s.spectrum.validate();
            const auto params = EvolutionParams::coherent(s.spectrum, s.n_particles, s.theta, s.phi, s.mqs_convention);
            op = "solve_tau_mqs";
            row.report = assess_mqs(params);
            op = "markov_limits";
            row.gamma_markov = markov_limits(s.spectrum).gamma_markov;
        } catch (const std::exception& e) {
            row.error = op + ": " + e.what();
        }
    });

    std::ostringstream out;
    out << "# scenario " << base.name << ", sweep over " << to_string(axis) << '\n';
    out << to_string(axis)
        << ",n_particles,tau_mqs,f_at_tau,gamma_at_tau,tau_gamma,gamma_markov,fidelity,corner,purity,feasible,n_max,error\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const int n = axis == SweepAxis::N ? static_cast<int>(values[i]) : base.n_particles;
        out << (axis == SweepAxis::N ? std::to_string(n) : io::format_number(values[i])) << ',' << n << ',';
        if (r.error.empty() || r.report.tau_mqs > 0.0) {
            const auto& m = r.report;
            out << io::format_number(m.tau_mqs) << ',' << io::format_number(m.f_at_tau) << ','
                << io::format_number(m.gamma_at_tau) << ',' << io::format_number(m.tau_gamma) << ','
                << io::format_number(r.gamma_markov) << ',' << io::format_number(m.fidelity) << ','
                << io::format_number(m.corner) << ',' << io::format_number(m.purity) << ','
                << (m.feasible ? "true" : "false") << ',' << (m.n_max ? std::to_string(*m.n_max) : "") << ',';
        } else {
            out << ",,,,,,,,,,";
        }
        out << csv_escape(r.error) << '\n';
    }
    return out.str();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"mqsim: bath-induced macroscopic quantum superposition simulator", "mqsim"};
    app.require_subcommand(1);

    std::string output_dir;
    int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    std::string thermal;
    std::string mqs;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--output-dir", output_dir, "Directory for artifacts (overrides the config)");
        sub->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--thermal-convention", thermal, "coth(beta w) or coth(beta w / 2)")
            ->check(CLI::IsMember({"paper", "standard"}));
        sub->add_option("--mqs-convention", mqs, "Cat-state target convention")
            ->check(CLI::IsMember({"paper", "twist"}));
    };

    std::string config;
    auto* run = app.add_subcommand("run", "Run a scenario config (or a preset name)");
    run->add_option("config", config, "Scenario JSON file")->required();
    add_common(run);

    std::string sweep_config, axis, values;
    auto* sweep = app.add_subcommand("sweep", "Sweep one parameter over a scenario");
    sweep->add_option("config", sweep_config, "Scenario JSON file")->required();
    sweep->add_option("--axis", axis, "N, beta, alpha or omega_0")->required();
    sweep->add_option("--values", values, "Comma-separated values")->required();
    add_common(sweep);

    app.add_subcommand("presets", "List built-in presets");

    std::string preset_name;
    auto* emit = app.add_subcommand("emit-preset", "Print a preset's config for editing");
    emit->add_option("name", preset_name, "Preset name")->required();
    emit->add_option("--output-dir", output_dir, "Write <name>.json here instead of stdout");

    std::vector<const char*> argv{"mqsim"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return Success;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return ConfigFailure;
    }

    auto load = [&](const std::string& path) {
        const auto names = preset_names();
        const bool is_preset =
            !std::filesystem::exists(path) && std::find(names.begin(), names.end(), path) != names.end();
        Scenario s = is_preset ? preset(path) : load_scenario(path);
        if (!output_dir.empty()) s.output_dir = output_dir;
        if (!thermal.empty()) s.spectrum.thermal = thermal == "paper" ? ThermalConvention::PaperCoth : ThermalConvention::StandardCothHalf;
        if (!mqs.empty()) s.mqs_convention = mqs == "paper" ? MqsConvention::PaperEq6 : MqsConvention::TwistCompatible;
        return s;
    };

    try {
        if (app.got_subcommand("presets")) {
            for (const auto& n : preset_names()) out << n << '\n';
            return Success;
        }
        if (app.got_subcommand("emit-preset")) {
            const auto text = dump(scenario_json(preset(preset_name)));
            if (output_dir.empty()) {
                out << text;
            } else {
                const auto path = std::filesystem::path(output_dir) / (preset_name + ".json");
                io::write_atomic(path, text);
                out << json{{"status", "ok"}, {"preset", preset_name}, {"artifacts", {path.string()}}}.dump() << '\n';
            }
            return Success;
        }
        if (app.got_subcommand("run")) {
            const Scenario s = load(config);
            out << run_scenario(s, {jobs}).dump() << '\n';
            return Success;
        }
        if (app.got_subcommand("sweep")) {
            const Scenario s = load(sweep_config);
            const SweepAxis ax = parse_axis(axis);
            const auto vals = parse_values(values);
            const std::string text = sweep_csv(s, ax, vals, {jobs});
            const auto path = s.output_dir / (s.name + "_sweep_" + to_string(ax) + ".csv");
            io::write_atomic(path, text);
            out << json{{"status", "ok"}, {"scenario", s.name}, {"axis", to_string(ax)}, {"points", vals.size()},
                        {"artifacts", {path.string()}}}.dump()
                << '\n';
            return Success;
        }
    } catch (const ConfigError& e) {
        err << "config error at " << e.field() << ": " << e.what() << '\n';
        out << json{{"status", "error"}, {"kind", "config"}, {"field", e.field()}, {"message", e.what()}}.dump() << '\n';
        return ConfigFailure;
    } catch (const RunError& e) {
        err << "numeric error in " << e.operation() << ": " << e.what() << '\n';
        out << json{{"status", "error"}, {"kind", "numeric"}, {"operation", e.operation()}, {"message", e.what()}}.dump()
            << '\n';
        return NumericFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        out << json{{"status", "error"}, {"kind", "io"}, {"message", e.what()}}.dump() << '\n';
        return Failure;
    }
    return Failure;
}

} // namespace mqsim::cli
