#include <charconv>
#include <cstring>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "mqsim/io.hpp"

using namespace mqsim;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("mqsim_io_" + name);
    fs::remove_all(dir);
    return dir;
}

} // namespace

TEST(Format, ShortestRoundTrip) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::uint64_t> bits;
    for (int i = 0; i < 20000; ++i) {
        double x;
        const auto b = bits(rng);
        std::memcpy(&x, &b, sizeof x);
        if (!std::isfinite(x)) continue;
        const auto s = io::format_number(x);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        EXPECT_EQ(back, x) << s;
    }
    EXPECT_EQ(io::format_number(0.1), "0.1");
    EXPECT_EQ(io::format_number(2.0), "2");
    EXPECT_EQ(io::format_number(std::numeric_limits<double>::infinity()), "inf");
    EXPECT_EQ(io::format_number(-std::numeric_limits<double>::infinity()), "-inf");
    EXPECT_EQ(io::format_number(std::nan("")), "nan");
}

TEST(Atomic, WritesWholeFileAndLeavesNoTemporaries) {
    const auto dir = scratch("atomic");
    io::write_atomic(dir / "a" / "x.txt", "first");
    io::write_atomic(dir / "a" / "x.txt", "second");
    EXPECT_EQ(slurp(dir / "a" / "x.txt"), "second");
    int files = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir / "a")) ++files;
    EXPECT_EQ(files, 1);
    fs::remove_all(dir);
}

TEST(Csv, KernelTableLayout) {
    KernelTable t;
    t.times = {0.5, 1.0};
    t.f_values = {0.25, 0.125};
    t.gamma_values = {1.0, 3.0};
    const auto csv = io::kernel_table_csv(t, {"scenario demo"});
    EXPECT_EQ(csv, "# scenario demo\nt,f,gamma\n0.5,0.25,1\n1,0.125,3\n");
    t.warnings = {"w"};
    const auto j = io::kernel_table_json(t);
    EXPECT_EQ(j["points"], 2);
    EXPECT_EQ(j["warnings"][0], "w");
}

TEST(Csv, DensityGridCarriesMLabels) {
    const auto psi = coherent_state<double>(SectorLabel::symmetric(2), 0.0, 0.0);
    const auto csv = io::density_grid_csv(projector(psi));
    EXPECT_EQ(csv, "m,1,0,-1\n1,1,0,0\n0,0,0,0\n-1,0,0,0\n");
    const auto half = io::density_grid_csv(projector(coherent_state<double>(SectorLabel::symmetric(1), 0.0, 0.0)));
    EXPECT_EQ(half.substr(0, half.find('\n')), "m,0.5,-0.5");
}

TEST(Json, SpectrumAndReport) {
    const auto zero = io::spectrum_json(SpectralDensity::ohmic(2.5e-5, 1.0));
    EXPECT_TRUE(zero["beta"].is_null());
    EXPECT_EQ(zero["kind"], "ohmic");
    const auto lor = io::spectrum_json(SpectralDensity::lorentzian(1.0, 1.0, 10.0, 2.0, ThermalConvention::StandardCothHalf));
    EXPECT_EQ(lor["omega_0"], 10.0);
    EXPECT_EQ(lor["beta"], 2.0);
    EXPECT_EQ(lor["thermal_convention"], "standard");
    const auto tab = io::spectrum_json(SpectralDensity::tabulated({{1.0, 2.0}}));
    EXPECT_EQ(tab["table"][0][1], 2.0);

    MqsReport r;
    r.n_particles = 4;
    r.tau_mqs = 2.0;
    const auto j = io::report_json(r);
    EXPECT_TRUE(j["n_max"].is_null());
    EXPECT_EQ(j["convention_used"], "twist");
    r.n_max = 60;
    EXPECT_EQ(io::report_json(r)["n_max"], 60);
}
