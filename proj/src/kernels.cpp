// kernels.cpp — f(t), Γ(t), Markov limits and bath correlation time

#include "mqsim/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "mqsim/errors.hpp"
#include "mqsim/quadrature.hpp"

namespace mqsim {

namespace {

constexpr double kPi = std::numbers::pi;

// (x − sin x)/x³, free of cancellation for small x.
double lamb_shape(double x) {
    if (std::abs(x) < 1.0) {
        const double x2 = x * x;
        double term = 1.0 / 6.0;
        double sum = term;
        for (int k = 1; k < 12; ++k) {
            // ratio of successive terms of Σ (−1)^k x^{2k} / (2k+3)!
            term *= -x2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        return sum;
    }
    return (x - std::sin(x)) / (x * x * x);
}

// (1 − cos x)/x² = ½·sinc²(x/2).
double decoherence_shape(double x) {
    const double y = 0.5 * x;
    const double s = y == 0.0 ? 1.0 : std::sin(y) / y;
    return 0.5 * s * s;
}

enum class Which { Lamb, Decoherence };

KernelValue evaluate_kernel(const SpectralDensity& sd, double t, const KernelOptions& opts, Which which) {
    const char* name = which == Which::Lamb ? "f_of_t" : "gamma_of_t";
    if (!(t > 0.0) || !std::isfinite(t)) {
        std::ostringstream msg;
        msg << name << ": time must be finite and > 0, got " << t;
        throw DomainError(msg.str());
    }
    if (which == Which::Decoherence && !std::isfinite(gt_at_zero(sd))) {
        throw NumericError(std::string(name) +
                           ": G_T(ω) ~ 1/ω as ω → 0 (G_0(0) > 0 at finite temperature); the decoherence integral diverges",
                           std::numeric_limits<double>::infinity(), 0.0);
    }

    auto spectrum = [&](double w) { return which == Which::Lamb ? eval_g0(sd, w) : eval_gt(sd, w); };
    // h(ω) = G(ω)/ω², the envelope multiplying the oscillatory factor.
    auto envelope = [&](double w) { return spectrum(w) / (w * w); };

    const auto brk = spectral_breakpoints(sd);
    const double cutoff = integration_cutoff(sd);
    const bool compact = has_compact_support(sd);
    quad::Tolerance tol{opts.internal_tolerance, 0.0, 20000};

    // Block 1: [0, 2π/t], integrand without cancellation.
    const double split = 2.0 * kPi / t;
    const double low_end = compact ? std::min(split, cutoff) : split;
    quad::Estimate low;
    if (which == Which::Lamb) {
        const double t3 = t * t * t;
        low = quad::integrate([&](double w) { return spectrum(w) * w * t3 * lamb_shape(w * t); },
                              0.0, low_end, tol, brk);
    } else {
        const double t2 = t * t;
        low = quad::integrate([&](double w) { return spectrum(w) * t2 * decoherence_shape(w * t); },
                              0.0, low_end, tol, brk);
    }

    // Block 2: [2π/t, cutoff], non-oscillatory part p and Fourier part of h.
    auto plain = [&](double w) { return which == Which::Lamb ? t * spectrum(w) / w : envelope(w); };
    quad::CompensatedSum total;
    total.add(low.value);
    double error = low.error;

    auto add_fourier_block = [&](double a, double b) {
        const auto block = quad::integrate_fourier(plain, envelope, t, a, b, tol, brk);
        total.add(block.plain);
        total.add(which == Which::Lamb ? -block.fourier.imag() : -block.fourier.real());
        error += block.error;
    };

    double tail_start = split;
    if (split < cutoff) {
        add_fourier_block(split, cutoff);
        tail_start = cutoff;
    }

    // Block 3: tail. Compact spectra end at the cutoff.
    if (!(compact && tail_start >= cutoff)) {
        int doublings = 0;
        for (;;) {
            const double bound = 2.0 * std::abs(envelope(tail_start)) / t;
            if (bound <= opts.internal_tolerance * std::abs(total.value())) {
                error += bound;
                break;
            }
            if (++doublings > 200) {
                throw NumericError(std::string(name) + ": oscillatory tail bound did not fall below tolerance",
                                   total.value() / t, bound / t);
            }
            add_fourier_block(tail_start, 2.0 * tail_start);
            tail_start *= 2.0;
        }
        const auto tail = quad::integrate_to_infinity(plain, tail_start, tol);
        total.add(tail.value);
        error += tail.error;
    }

    const double value = total.value() / t;
    const double bound = error / t;
    if (!std::isfinite(value) || bound > opts.relative_tolerance * std::abs(value) + 1e-300) {
        std::ostringstream msg;
        msg << name << "(t=" << t << ") missed relative tolerance " << opts.relative_tolerance
            << ": estimate " << value << " +/- " << bound;
        throw NumericError(msg.str(), value, bound);
    }
    return {value, bound};
}

double bisect_level(const SpectralDensity& sd, double lo, double hi, double level) {
    // g(lo) and g(hi) straddle `level`.
    const bool rising = eval_gt(sd, lo) < level;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        const bool below = eval_gt(sd, mid) < level;
        if (below == rising) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

KernelValue lamb_kernel(const SpectralDensity& sd, double t, const KernelOptions& opts) {
    return evaluate_kernel(sd, t, opts, Which::Lamb);
}

KernelValue decoherence_kernel(const SpectralDensity& sd, double t, const KernelOptions& opts) {
    return evaluate_kernel(sd, t, opts, Which::Decoherence);
}

double f_of_t(const SpectralDensity& sd, double t) { return lamb_kernel(sd, t).value; }

double gamma_of_t(const SpectralDensity& sd, double t) { return decoherence_kernel(sd, t).value; }

double correlation_time(const SpectralDensity& sd) {
    if (!std::isfinite(gt_at_zero(sd))) {
        throw DomainError("correlation_time: G_T diverges at ω = 0, width undefined");
    }
    const double cutoff = integration_cutoff(sd);
    if (!(cutoff > 0.0)) throw DomainError("correlation_time: spectrum has no support, width undefined");

    std::vector<double> xs;
    constexpr int kLinear = 4000;
    for (int i = 0; i <= kLinear; ++i) xs.push_back(cutoff * i / kLinear);
    if (sd.kind == SpectrumKind::Tabulated) {
        for (std::size_t i = 1; i < sd.table.size(); ++i) {
            const double a = sd.table[i - 1].omega, b = sd.table[i].omega;
            for (int k = 0; k <= 64; ++k) xs.push_back(a + (b - a) * k / 64.0);
        }
    } else {
        for (double b : spectral_breakpoints(sd)) {
            for (int k = -100; k <= 100; ++k) {
                const double w = b + sd.omega_c * k / 50.0;
                if (w >= 0.0 && w <= cutoff) xs.push_back(w);
            }
        }
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    std::vector<double> gs(xs.size());
    std::size_t imax = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        gs[i] = eval_gt(sd, xs[i]);
        if (gs[i] > gs[imax]) imax = i;
    }
    double gmax = gs[imax];
    if (sd.kind != SpectrumKind::Tabulated && imax > 0 && imax + 1 < xs.size()) {
        // Golden-section refinement of the peak for the smooth families.
        double a = xs[imax - 1], b = xs[imax + 1];
        const double r = 0.5 * (std::sqrt(5.0) - 1.0);
        double c = b - r * (b - a), d = a + r * (b - a);
        double gc = eval_gt(sd, c), gd = eval_gt(sd, d);
        for (int i = 0; i < 100 && (b - a) > 1e-14 * std::abs(b); ++i) {
            if (gc > gd) {
                b = d; d = c; gd = gc; c = b - r * (b - a); gc = eval_gt(sd, c);
            } else {
                a = c; c = d; gc = gd; d = a + r * (b - a); gd = eval_gt(sd, d);
            }
        }
        gmax = std::max(gmax, std::max(gc, gd));
    }
    if (!(gmax > 0.0)) throw DomainError("correlation_time: spectrum vanishes, width undefined");
    const double half = 0.5 * gmax;

    std::size_t first = 0;
    while (gs[first] < half) ++first;
    std::size_t last = gs.size() - 1;
    while (gs[last] < half) --last;

    const double lower = first == 0 ? 0.0 : bisect_level(sd, xs[first - 1], xs[first], half);
    const double upper = last + 1 == gs.size() ? xs[last] : bisect_level(sd, xs[last], xs[last + 1], half);
    const double width = upper - lower;
    if (!(width > 0.0)) throw DomainError("correlation_time: degenerate spectrum, width undefined");
    return 1.0 / width;
}

MarkovLimits markov_limits(const SpectralDensity& sd, double t_eval) {
    const double tc = correlation_time(sd);
    MarkovLimits out;
    if (t_eval <= 0.0) {
        t_eval = 1e3 * tc;
    } else if (t_eval < 100.0 * tc) {
        std::ostringstream msg;
        msg << "markov_limits: t_eval = " << t_eval << " is below 100·t_c = " << 100.0 * tc;
        throw UsageError(msg.str());
    }
    out.t_eval = t_eval;
    out.f_markov = f_of_t(sd, t_eval);
    const double gt0 = gt_at_zero(sd);
    if (std::isfinite(gt0)) {
        out.gamma_markov = 0.5 * kPi * gt0;
        out.gamma_from_zero_frequency = true;
    } else {
        out.gamma_markov = gamma_of_t(sd, t_eval);
    }
    if (g0_at_zero(sd) > 0.0) {
        out.warnings.push_back(
            "G_0(0) > 0: f(t) grows logarithmically and has no Markov limit; f_markov is f(t_eval)");
    }
    return out;
}

KernelTable tabulate_kernels(const SpectralDensity& sd, const std::vector<double>& grid, int jobs) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0) || !std::isfinite(grid[i]) || (i > 0 && !(grid[i] > grid[i - 1]))) {
            throw DomainError("tabulate_kernels: grid must be finite, positive and strictly increasing");
        }
    }
    KernelTable table;
    table.times = grid;
    table.f_values.assign(grid.size(), 0.0);
    table.gamma_values.assign(grid.size(), 0.0);

    const std::size_t n = grid.size();
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(jobs > 0 ? jobs : 1, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            table.f_values[i] = f_of_t(sd, grid[i]);
            table.gamma_values[i] = gamma_of_t(sd, grid[i]);
        }
    } else {
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < n; i += workers) {
                        table.f_values[i] = f_of_t(sd, grid[i]);
                        table.gamma_values[i] = gamma_of_t(sd, grid[i]);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    const auto limits = markov_limits(sd);
    table.f_markov = limits.f_markov;
    table.gamma_markov = limits.gamma_markov;
    table.t_eval = limits.t_eval;
    table.t_corr = correlation_time(sd);
    table.warnings = limits.warnings;
    return table;
}

} // namespace mqsim
