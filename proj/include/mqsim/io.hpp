// io.hpp — CSV/JSON encodings of kernel tables, snapshots and reports

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "mqsim/bath.hpp"
#include "mqsim/evolve.hpp"
#include "mqsim/kernels.hpp"

namespace mqsim::io {

// Shortest decimal string that parses back to the same double; "inf"/"-inf"/"nan".
std::string format_number(double x);

// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

// `comments` are emitted as leading "# ..." lines; header is `t,f,gamma`.
std::string kernel_table_csv(const KernelTable& table, const std::vector<std::string>& comments = {});
nlohmann::json kernel_table_json(const KernelTable& table);

// (2l+1)×(2l+1) grid of |ρ_{mm'}|; first column carries m, header carries m'.
std::string density_grid_csv(const DickeDensityMatrix<double>& rho, const std::vector<std::string>& comments = {});
nlohmann::json snapshot_sidecar(const Snapshot& snap, const std::string& grid_file);

nlohmann::json spectrum_json(const SpectralDensity& sd);
nlohmann::json report_json(const MqsReport& report);

} // namespace mqsim::io
