// io.cpp — artifact encodings

#include "mqsim/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <system_error>

#include <unistd.h>

namespace mqsim::io {

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc{}) throw std::runtime_error("format_number: to_chars failed");
    return std::string(buf.data(), end);
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            out.close();
            fs::remove(tmp);
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    fs::rename(tmp, path);
}

std::string kernel_table_csv(const KernelTable& table, const std::vector<std::string>& comments) {
    std::ostringstream out;
    for (const auto& c : comments) out << "# " << c << '\n';
    out << "t,f,gamma\n";
    for (std::size_t i = 0; i < table.times.size(); ++i) {
        out << format_number(table.times[i]) << ',' << format_number(table.f_values[i]) << ','
            << format_number(table.gamma_values[i]) << '\n';
    }
    return out.str();
}

nlohmann::json kernel_table_json(const KernelTable& table) {
    return {
        {"f_markov", table.f_markov},
        {"gamma_markov", table.gamma_markov},
        {"t_eval", table.t_eval},
        {"t_corr", table.t_corr},
        {"points", table.times.size()},
        {"warnings", table.warnings},
    };
}

std::string density_grid_csv(const DickeDensityMatrix<double>& rho, const std::vector<std::string>& comments) {
    std::ostringstream out;
    for (const auto& c : comments) out << "# " << c << '\n';
    const auto d = rho.sector.dimension();
    out << "m";
    for (Eigen::Index j = 0; j < d; ++j) out << ',' << format_number(rho.sector.m(j));
    out << '\n';
    for (Eigen::Index i = 0; i < d; ++i) {
        out << format_number(rho.sector.m(i));
        for (Eigen::Index j = 0; j < d; ++j) out << ',' << format_number(std::abs(rho.elements(i, j)));
        out << '\n';
    }
    return out.str();
}

nlohmann::json snapshot_sidecar(const Snapshot& snap, const std::string& grid_file) {
    return {
        {"time", snap.time},
        {"f", snap.f},
        {"gamma", snap.gamma},
        {"basis_tag", to_string(snap.rho.basis)},
        {"sector", {{"n_particles", snap.rho.sector.n_particles}, {"two_l", snap.rho.sector.two_l}}},
        {"m_order", "+l..-l (rows m, columns m')"},
        {"grid", grid_file},
    };
}

nlohmann::json spectrum_json(const SpectralDensity& sd) {
    nlohmann::json j;
    j["kind"] = to_string(sd.kind);
    if (sd.kind == SpectrumKind::Tabulated) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& s : sd.table) rows.push_back({s.omega, s.value});
        j["table"] = rows;
    } else {
        j["alpha"] = sd.alpha;
        j["omega_c"] = sd.omega_c;
        if (sd.kind == SpectrumKind::Lorentzian) j["omega_0"] = sd.omega_0;
    }
    if (sd.zero_temperature()) {
        j["beta"] = nullptr;
    } else {
        j["beta"] = sd.beta;
    }
    j["thermal_convention"] = to_string(sd.thermal);
    return j;
}

nlohmann::json report_json(const MqsReport& r) {
    nlohmann::json j = {
        {"n_particles", r.n_particles},
        {"tau_mqs", r.tau_mqs},
        {"f_at_tau", r.f_at_tau},
        {"gamma_at_tau", r.gamma_at_tau},
        {"tau_gamma", r.tau_gamma},
        {"fidelity", r.fidelity},
        {"corner", r.corner},
        {"purity", r.purity},
        {"feasible", r.feasible},
        {"convention_used", to_string(r.convention_used)},
    };
    if (r.n_max) {
        j["n_max"] = *r.n_max;
    } else {
        j["n_max"] = nullptr;
    }
    return j;
}

} // namespace mqsim::io
