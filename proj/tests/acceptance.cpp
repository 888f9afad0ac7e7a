// Acceptance suite: one PASS/FAIL line per criterion; exit status is nonzero if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mqsim/cli.hpp"
#include "mqsim/evolve.hpp"
#include "mqsim/kernels.hpp"
#include "mqsim/scenario.hpp"

using namespace mqsim;
using cd = std::complex<double>;
namespace fs = std::filesystem;

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    return out;
}

double tau_oracle(double alpha) {
    double lo = 1.0, hi = 1.0;
    while (alpha * (hi - std::atan(hi)) < kHalfPi) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (alpha * (mid - std::atan(mid)) < kHalfPi ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Numeric rows of a CSV, skipping comment and header lines.
std::vector<std::vector<double>> numeric_rows(const std::string& csv) {
    std::vector<std::vector<double>> out;
    std::stringstream ss(csv);
    std::string line;
    bool header = true;
    while (std::getline(ss, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        std::vector<double> row;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        out.push_back(row);
    }
    return out;
}

int cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run_cli(args, out, err);
    if (code != 0) std::fprintf(stderr, "%s", err.str().c_str());
    return code;
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("mqsim_acceptance_" + name);
    fs::remove_all(dir);
    return dir;
}

Outcome kernel_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    const double a = 2.5e-5;
    const auto sd = SpectralDensity::ohmic(a, 1.0);
    double worst = 0.0;
    for (double t : log_grid(1e-2, 1e6, 50)) {
        const double f = a * (t - std::atan(t)) / t;
        const double g = a * std::log1p(t * t) / (2.0 * t);
        worst = std::max({worst, std::abs(f_of_t(sd, t) / f - 1.0), std::abs(gamma_of_t(sd, t) / g - 1.0)});
    }
    const double secs = seconds_since(t0);
    return {worst <= 1e-8 && secs <= 10.0, fmt("max relative error %.2e over 50 points, %.2f s", worst, secs)};
}

Outcome markov_limit() {
    const double a = 2.5e-5;
    const auto sd = SpectralDensity::ohmic(a, 1.0);
    const double f = f_of_t(sd, 1e6), g = gamma_of_t(sd, 1e6);
    const double rel = std::abs(f / a - 1.0);
    return {rel <= 1e-4 && g < 1e-4 * a, fmt("|f/(alpha w_c) - 1| = %.2e, Gamma/(alpha w_c) = %.2e", rel, g / a)};
}

Outcome formation_time() {
    const auto sd = SpectralDensity::ohmic(2.5e-5, 1.0);
    const auto sol = solve_tau_mqs(sd);
    const double ref = tau_oracle(2.5e-5);
    const double rel = std::abs(sol.tau / ref - 1.0);
    const double res = std::abs(sol.residual) / kHalfPi;
    return {rel <= 1e-6 && res <= 1e-9 && std::abs(ref / 6.2833e4 - 1.0) < 1e-4,
            fmt("tau = %.8g (oracle %.8g), relative residual %.1e", sol.tau, ref, res)};
}

Outcome ideal_formation() {
    double worst = 0.0;
    for (int n : {2, 4, 10, 50}) {
        auto p = EvolutionParams::coherent(SpectralDensity::ohmic(2.5e-5, 1.0), n, kHalfPi, 0.0, MqsConvention::PaperEq6);
        p.decoherence = Decoherence::Suppressed;
        const auto r = assess_mqs(p);
        worst = std::max(worst, 1.0 - r.fidelity);
    }
    return {worst <= 1e-10, fmt("max 1 - fidelity = %.2e for N in {2,4,10,50}", worst)};
}

Outcome brute_force() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> logt(-1.0, 5.0), angle(0.0, 2.0 * std::numbers::pi);
    double worst_evolve = 0.0, worst_coherent = 0.0;
    const auto sd = SpectralDensity::ohmic(0.01, 1.0, 50.0);
    for (int n = 1; n <= 4; ++n) {
        const auto p = EvolutionParams::coherent(sd, n, 0.5 * angle(rng), angle(rng));
        for (int k = 0; k < 10; ++k) {
            const double t = std::pow(10.0, logt(rng));
            const auto rho = evolve_state(p, t);
            const auto ks = sample_kernels(p, t);
            for (int i = 0; i <= n; ++i) {
                for (int j = 0; j <= n; ++j) {
                    const double m = n / 2.0 - i, mp = n / 2.0 - j;
                    const cd ref = p.initial.amplitudes(i) * std::conj(p.initial.amplitudes(j)) *
                                   std::exp(cd(0.0, -t * ks.f * (m * m - mp * mp))) *
                                   std::exp(-t * ks.gamma * (m - mp) * (m - mp));
                    worst_evolve = std::max(worst_evolve, std::abs(rho.elements(i, j) - ref));
                }
            }
        }
    }
    for (int n = 1; n <= 10; ++n) {
        const double theta = 0.5 * angle(rng), phi = angle(rng);
        const auto psi = coherent_state<double>(SectorLabel::symmetric(n), theta, phi);
        std::vector<cd> proj(n + 1, 0.0);
        for (unsigned long s = 0; s < (1ul << n); ++s) {
            cd amp = 1.0;
            int down = 0;
            for (int b = 0; b < n; ++b) {
                if (s >> b & 1ul) {
                    amp *= std::polar(std::sin(theta / 2), phi);
                    ++down;
                } else {
                    amp *= std::cos(theta / 2);
                }
            }
            proj[down] += amp;
        }
        for (int k = 0; k <= n; ++k) {
            const double norm = std::sqrt(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
            worst_coherent = std::max(worst_coherent, std::abs(psi.amplitudes(k) - proj[k] / norm));
        }
    }
    return {worst_evolve <= 1e-12 && worst_coherent <= 1e-12,
            fmt("evolve_state max |diff| %.1e (N<=4), coherent_state max |diff| %.1e (N<=10)", worst_evolve,
                worst_coherent)};
}

Outcome fig1_reproduction() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto dir = scratch("fig1");
    if (cli({"run", "fig1", "--output-dir", dir.string()}) != 0) return {false, "fig1 run failed"};
    const auto kernels = numeric_rows(slurp(dir / "fig1_kernels.csv"));
    const auto meta = nlohmann::json::parse(slurp(dir / "fig1_kernels.json"));
    const double t_corr = meta["t_corr"].get<double>(), f_m = meta["f_markov"].get<double>();
    const auto sd = preset("fig1").spectrum;
    const double gamma_late = gamma_of_t(sd, 100.0 * t_corr);

    double gamma_peak = 0.0, t_peak = 0.0;
    bool f_monotone = true;
    for (std::size_t i = 0; i < kernels.size(); ++i) {
        if (kernels[i][2] > gamma_peak) {
            gamma_peak = kernels[i][2];
            t_peak = kernels[i][0];
        }
        if (i > 0 && kernels[i][1] < kernels[i - 1][1]) f_monotone = false;
    }
    const double f_last = kernels.back()[1];
    const bool gamma_ok = gamma_peak > gamma_late && t_peak < 100.0 * t_corr;
    const bool f_ok = f_monotone && std::abs(f_last / f_m - 1.0) < 1e-2 && std::abs(f_last / sd.alpha - 1.0) < 1e-4;

    // Four largest |ρ| in the L_x snapshot at τ must include the (±25, ∓25) corners.
    const auto grid = numeric_rows(slurp(dir / "fig1_snapshot_01.csv"));
    struct Cell {
        double value, m, mp;
    };
    std::vector<Cell> cells;
    std::vector<double> mp_labels;
    {
        std::stringstream ss(slurp(dir / "fig1_snapshot_01.csv"));
        std::string line;
        while (std::getline(ss, line) && line[0] == '#') {}
        std::stringstream hs(line);
        std::string cell;
        std::getline(hs, cell, ',');
        while (std::getline(hs, cell, ',')) mp_labels.push_back(std::stod(cell));
    }
    for (const auto& row : grid) {
        for (std::size_t j = 1; j < row.size(); ++j) cells.push_back({row[j], row[0], mp_labels[j - 1]});
    }
    std::partial_sort(cells.begin(), cells.begin() + 4, cells.end(),
                      [](const Cell& a, const Cell& b) { return a.value > b.value; });
    bool has_upper = false, has_lower = false;
    for (int k = 0; k < 4; ++k) {
        has_upper |= cells[k].m == 25 && cells[k].mp == -25;
        has_lower |= cells[k].m == -25 && cells[k].mp == 25;
    }
    const double secs = seconds_since(t0);
    fs::remove_all(dir);
    return {gamma_ok && f_ok && has_upper && has_lower && secs <= 60.0,
            fmt("Gamma peak %.3e at t=%.3g vs Gamma(100 t_c)=", gamma_peak, t_peak) + fmt("%.3e; ", gamma_late) +
                (f_ok ? "f monotone to f_M; " : "f shape wrong; ") +
                (has_upper && has_lower ? "corners in top-4 |rho|; " : "corners missing from top-4; ") +
                fmt("%.2f s", secs)};
}

Outcome feasibility() {
    const auto p = EvolutionParams::coherent(SpectralDensity::ohmic(2.5e-5, 1.0), 50, kHalfPi, 0.0);
    const auto r = assess_mqs(p);
    const long long n = r.n_max.value_or(-1);
    return {std::abs(r.tau_gamma / 2.762e-4 - 1.0) < 1e-3 && n >= 59 && n <= 61,
            fmt("tau*Gamma(tau) = %.5e, n_max = %.0f", r.tau_gamma, static_cast<double>(n))};
}

Outcome physical_presets() {
    auto n_max = [](const std::string& name) {
        const auto s = preset(name);
        const auto r = assess_mqs(EvolutionParams::coherent(s.spectrum, s.n_particles, s.theta, s.phi, s.mqs_convention));
        return static_cast<double>(r.n_max.value_or(-1));
    };
    const double phonon = n_max("phonon"), cavity = n_max("cavity");
    return {phonon >= 100 && phonon <= 1000 && cavity >= 10 && cavity <= 1000,
            fmt("phonon n_max = %.0f (want 100..1000), cavity n_max = %.0f (want 10..1000)", phonon, cavity)};
}

Outcome invariants() {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> kind(0, 2), particles(1, 64), nodes(2, 10);
    int failures = 0, snapshots = 0;
    std::string first;
    for (int trial = 0; trial < 200; ++trial) {
        SpectralDensity sd;
        const double beta = u(rng) < 0.5 ? std::numeric_limits<double>::infinity() : std::pow(10.0, 2.0 * u(rng) - 0.5);
        const auto conv = u(rng) < 0.5 ? ThermalConvention::PaperCoth : ThermalConvention::StandardCothHalf;
        switch (kind(rng)) {
        case 0:
            sd = SpectralDensity::ohmic(std::pow(10.0, -4.0 * u(rng) - 1.0), 0.5 + 2.0 * u(rng), beta, conv);
            break;
        case 1:
            // Finite-temperature Lorentzians have a divergent Γ, so only T = 0 is sampled.
            sd = SpectralDensity::lorentzian(std::pow(10.0, -3.0 * u(rng) - 1.0), 0.5 + u(rng), 20.0 * u(rng));
            break;
        default: {
            std::vector<SpectralSample> table;
            double w = 0.05 + 0.5 * u(rng);
            for (int i = 0, n = nodes(rng); i < n; ++i) {
                table.push_back({w, 0.1 * u(rng)});
                w += 0.1 + u(rng);
            }
            sd = SpectralDensity::tabulated(table, beta, conv);
        }
        }
        const int n = particles(rng);
        const auto p = EvolutionParams::coherent(sd, n, std::numbers::pi * u(rng), 2.0 * std::numbers::pi * u(rng));
        const auto grid = log_grid(1e-2, 1e4, 12);
        const auto table = tabulate_kernels(sd, grid);
        for (std::size_t i = 1; i < grid.size(); ++i) {
            if (grid[i] * table.f_values[i] < grid[i - 1] * table.f_values[i - 1] * (1.0 - 1e-12)) {
                ++failures;
                if (first.empty()) first = "t f(t) decreased in trial " + std::to_string(trial);
            }
        }
        const auto snaps = snapshot_series(p, {0.0, 0.3, 17.0, 900.0}, trial % 2 ? Basis::Lx : Basis::Lz);
        for (const auto& s : snaps) {
            ++snapshots;
            if (!diagnose(s.rho).valid()) {
                ++failures;
                if (first.empty()) first = "invalid density matrix in trial " + std::to_string(trial);
            }
        }
    }
    double worst = 0.0;
    for (int two_l = 1; two_l <= 512; two_l += (two_l < 64 ? 1 : 37)) {
        const auto d = rotation_to_x<double>(SectorLabel::make(two_l, two_l));
        worst = std::max(worst, (d.transpose() * d - RealMatrix<double>::Identity(two_l + 1, two_l + 1)).cwiseAbs().maxCoeff());
    }
    {
        const auto d = rotation_to_x<double>(SectorLabel::make(512, 512));
        worst = std::max(worst, (d.transpose() * d - RealMatrix<double>::Identity(513, 513)).cwiseAbs().maxCoeff());
    }
    return {failures == 0 && worst <= 1e-12,
            fmt("200 scenarios, %.0f snapshots, %.0f violations; max rotation unitarity error %.1e", snapshots,
                failures, worst) +
                (first.empty() ? "" : " (" + first + ")")};
}

Outcome determinism() {
    const auto a = scratch("detA"), b = scratch("detB");
    if (cli({"run", "fig1", "--output-dir", a.string()}) != 0 || cli({"run", "fig1", "--output-dir", b.string()}) != 0) {
        return {false, "fig1 run failed"};
    }
    int files = 0, differing = 0;
    for (const auto& e : fs::directory_iterator(a)) {
        ++files;
        if (slurp(e.path()) != slurp(b / e.path().filename())) ++differing;
    }
    const std::vector<std::string> sweep{"sweep", "fig1", "--axis", "N", "--values", "2,10,50,100,3,64,17,8"};
    auto with = [&](const fs::path& dir, const char* jobs) {
        auto args = sweep;
        args.insert(args.end(), {"--jobs", jobs, "--output-dir", dir.string()});
        return cli(args);
    };
    if (with(a, "1") != 0 || with(b, "8") != 0) return {false, "sweep failed"};
    const bool sweep_same = slurp(a / "fig1_sweep_N.csv") == slurp(b / "fig1_sweep_N.csv");
    fs::remove_all(a);
    fs::remove_all(b);
    return {differing == 0 && files > 0 && sweep_same,
            fmt("%.0f run artifacts, %.0f differ; sweep --jobs 1 vs 8 ", files, differing) +
                (sweep_same ? "identical" : "differ")};
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"kernel oracle equivalence", kernel_oracle},
        {"Markov limit", markov_limit},
        {"formation time", formation_time},
        {"ideal cat-state formation", ideal_formation},
        {"brute-force equivalence", brute_force},
        {"fig1 qualitative reproduction", fig1_reproduction},
        {"feasibility arithmetic", feasibility},
        {"physical-unit presets order of magnitude", physical_presets},
        {"invariant suite", invariants},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
