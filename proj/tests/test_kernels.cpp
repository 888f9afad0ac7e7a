#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "mqsim/bath.hpp"
#include "mqsim/errors.hpp"
#include "mqsim/kernels.hpp"

using namespace mqsim;

namespace {

double f_ohmic(double a, double wc, double t) { return a * (wc * t - std::atan(wc * t)) / t; }
double gamma_ohmic(double a, double wc, double t) { return a * std::log1p(wc * wc * t * t) / (2.0 * t); }

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    return out;
}

SpectralDensity random_table(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> step(0.05, 1.0), val(0.0, 2.0);
    std::uniform_int_distribution<int> count(2, 12);
    std::vector<SpectralSample> table;
    double w = step(rng) * 0.5;
    for (int i = 0, n = count(rng); i < n; ++i) {
        table.push_back({w, val(rng)});
        w += step(rng);
    }
    return SpectralDensity::tabulated(table);
}

} // namespace

TEST(Kernels, SpotValues) {
    const auto sd = SpectralDensity::ohmic(1.0, 1.0);
    EXPECT_NEAR(f_of_t(sd, 1.0), 1.0 - std::numbers::pi / 4.0, 1e-12);
    EXPECT_NEAR(gamma_of_t(sd, 1.0), std::log(2.0) / 2.0, 1e-12);
}

TEST(Kernels, OhmicClosedFormsAcrossDecades) {
    for (double wc : {1.0, 3.0}) {
        const auto sd = SpectralDensity::ohmic(2.5e-5, wc);
        for (double t : log_grid(1e-3, 1e6, 60)) {
            const double f = f_of_t(sd, t), g = gamma_of_t(sd, t);
            EXPECT_NEAR(f, f_ohmic(2.5e-5, wc, t), 1e-9 * f_ohmic(2.5e-5, wc, t)) << "t=" << t;
            EXPECT_NEAR(g, gamma_ohmic(2.5e-5, wc, t), 1e-9 * gamma_ohmic(2.5e-5, wc, t)) << "t=" << t;
        }
    }
}

TEST(Kernels, ErrorBoundsAreReported) {
    const auto sd = SpectralDensity::ohmic(1.0, 1.0);
    const auto k = lamb_kernel(sd, 50.0);
    EXPECT_NEAR(k.value, f_ohmic(1.0, 1.0, 50.0), 1e-12);
    EXPECT_GE(k.error_bound, 0.0);
    EXPECT_LE(k.error_bound, 1e-9 * k.value);
}

TEST(Kernels, ShortTimeLimit) {
    const auto sd = SpectralDensity::lorentzian(1.0, 1.0, 10.0);
    EXPECT_LT(f_of_t(sd, 1e-8), 1e-12);
    EXPECT_LT(gamma_of_t(sd, 1e-8), 1e-6);
}

TEST(Kernels, ThermalDecoherenceLongTime) {
    // (1 − cos ωt)/ω² → (π t/2) δ(ω), so Γ → (π/2) G_T(0) = (π/2) α/β.
    const auto sd = SpectralDensity::ohmic(1.0, 1.0, 2.0);
    EXPECT_NEAR(gamma_of_t(sd, 1e5), 0.25 * std::numbers::pi, 1e-3);
    const auto standard = SpectralDensity::ohmic(1.0, 1.0, 2.0, ThermalConvention::StandardCothHalf);
    EXPECT_NEAR(gamma_of_t(standard, 1e5), 0.5 * std::numbers::pi, 2e-3);
}

TEST(Kernels, FiniteTemperatureLorentzianDiverges) {
    const auto sd = SpectralDensity::lorentzian(1.0, 1.0, 10.0, 2.0);
    EXPECT_THROW(gamma_of_t(sd, 1.0), NumericError);
    EXPECT_NO_THROW(f_of_t(sd, 1.0));
}

TEST(Kernels, NonPositiveTimeRejected) {
    const auto sd = SpectralDensity::ohmic(1.0, 1.0);
    EXPECT_THROW(f_of_t(sd, 0.0), DomainError);
    EXPECT_THROW(gamma_of_t(sd, -1.0), DomainError);
}

TEST(Kernels, FrequencyScalingSymmetry) {
    // G'(sω) = s G(ω) ⇒ f'(t/s) = s f(t), Γ'(t/s) = s Γ(t).
    const double s = 7.0;
    for (const auto& sd : {SpectralDensity::lorentzian(0.3, 1.0, 10.0), SpectralDensity::ohmic(0.3, 1.0, 5.0),
                           SpectralDensity::tabulated({{0.2, 1.0}, {1.0, 0.4}, {3.0, 0.9}})}) {
        const auto r = rescale_frequency(sd, s);
        for (double t : {0.05, 1.0, 30.0, 800.0}) {
            EXPECT_NEAR(f_of_t(r, t / s), s * f_of_t(sd, t), 1e-8 * s * f_of_t(sd, t));
            EXPECT_NEAR(gamma_of_t(r, t / s), s * gamma_of_t(sd, t), 1e-8 * s * gamma_of_t(sd, t));
        }
    }
}

TEST(KernelProperties, RandomTabulatedSpectra) {
    std::mt19937_64 rng(20240611);
    const auto grid = log_grid(1e-2, 1e4, 40);
    for (int trial = 0; trial < 25; ++trial) {
        const auto sd = random_table(rng);
        const auto table = tabulate_kernels(sd, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            EXPECT_GE(table.gamma_values[i], 0.0);
            if (i > 0) {
                const double prev = grid[i - 1] * table.f_values[i - 1];
                EXPECT_GE(grid[i] * table.f_values[i], prev * (1.0 - 1e-9) - 1e-300) << "trial " << trial;
            }
        }
    }
}

TEST(CorrelationTime, LorentzianAndOhmic) {
    EXPECT_NEAR(correlation_time(SpectralDensity::lorentzian(1.0, 1.0, 10.0)), 0.5, 1e-9);
    // Half-maximum crossings of ω e^{−ω} at 0.231961 and 2.678347.
    const double tc = correlation_time(SpectralDensity::ohmic(1.0, 1.0));
    EXPECT_NEAR(tc, 1.0 / (2.678346990 - 0.231960953), 1e-7);
    EXPECT_NEAR(correlation_time(SpectralDensity::ohmic(1.0, 4.0)), tc / 4.0, 1e-9);
}

TEST(CorrelationTime, DegenerateSpectrumRejected) {
    EXPECT_THROW(correlation_time(SpectralDensity::ohmic(0.0, 1.0)), DomainError);
    EXPECT_THROW(correlation_time(SpectralDensity::lorentzian(1.0, 1.0, 10.0, 2.0)), DomainError);
    EXPECT_GT(correlation_time(SpectralDensity::ohmic(1.0, 1.0, 2.0)), 0.0);
}

TEST(Markov, ZeroTemperatureOhmic) {
    const auto m = markov_limits(SpectralDensity::ohmic(2.5e-5, 1.0));
    EXPECT_NEAR(m.f_markov, 2.5e-5, 2.5e-5 * 5e-3);
    EXPECT_EQ(m.gamma_markov, 0.0);
    EXPECT_TRUE(m.gamma_from_zero_frequency);
    EXPECT_TRUE(m.warnings.empty());
    const auto late = markov_limits(SpectralDensity::ohmic(2.5e-5, 1.0), 1e6);
    EXPECT_NEAR(late.f_markov, 2.5e-5, 2.5e-5 * 1e-4);
}

TEST(Markov, ThermalOhmicUsesZeroFrequencyWeight) {
    const auto m = markov_limits(SpectralDensity::ohmic(0.3, 1.0, 4.0), 1e4);
    EXPECT_NEAR(m.gamma_markov, 0.5 * std::numbers::pi * 0.3 / 4.0, 1e-15);
}

TEST(Markov, LorentzianFlagsLogGrowth) {
    const auto sd = SpectralDensity::lorentzian(1.0, 1.0, 10.0);
    const auto m = markov_limits(sd);
    EXPECT_FALSE(m.warnings.empty());
    // t f(t) has slope ∫G_0(1 − cos ωt)/ω ≈ G_0(0) ln t + C, so f gains G_0(0) ln 100 over two decades.
    const double gain = f_of_t(sd, 1e5) - f_of_t(sd, 1e3);
    EXPECT_NEAR(gain, g0_at_zero(sd) * std::log(100.0), 0.02 * g0_at_zero(sd) * std::log(100.0));
}

TEST(Markov, EvaluationTimeTooEarly) {
    EXPECT_THROW(markov_limits(SpectralDensity::lorentzian(1.0, 1.0, 10.0), 1.0), UsageError);
}

TEST(Tabulate, EmptyGridAndValidation) {
    const auto sd = SpectralDensity::ohmic(1.0, 1.0);
    const auto empty = tabulate_kernels(sd, {});
    EXPECT_TRUE(empty.times.empty());
    EXPECT_GT(empty.t_corr, 0.0);
    EXPECT_GT(empty.f_markov, 0.0);
    EXPECT_THROW(tabulate_kernels(sd, {1.0, 1.0}), DomainError);
    EXPECT_THROW(tabulate_kernels(sd, {0.0, 1.0}), DomainError);
}

TEST(Tabulate, ThreadCountDoesNotChangeValues) {
    const auto sd = SpectralDensity::lorentzian(0.04, 1.0, 10.0);
    const auto grid = log_grid(1e-2, 1e4, 37);
    const auto a = tabulate_kernels(sd, grid, 1);
    const auto b = tabulate_kernels(sd, grid, 4);
    EXPECT_EQ(a.f_values, b.f_values);
    EXPECT_EQ(a.gamma_values, b.gamma_values);
}

TEST(Tabulate, LorentzianShape) {
    const auto sd = SpectralDensity::lorentzian(0.04, 1.0, 10.0);
    const auto t = tabulate_kernels(sd, log_grid(0.5, 1e4, 30));
    const double peak = *std::max_element(t.gamma_values.begin(), t.gamma_values.end());
    EXPECT_LT(t.gamma_values.back(), 0.5 * peak);
    EXPECT_NEAR(t.gamma_values.back(), t.gamma_markov, 0.05 * t.gamma_markov);
    EXPECT_GT(t.f_values.back(), t.f_values.front());
}
