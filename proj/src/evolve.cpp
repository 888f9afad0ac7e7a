// evolve.cpp — formation time solve, cat-state assessment, snapshot series

#include "mqsim/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "mqsim/errors.hpp"
#include "mqsim/kernels.hpp"

namespace mqsim {

namespace {
constexpr double kHalfPi = 0.5 * std::numbers::pi;
}

std::string to_string(MqsConvention conv) {
    return conv == MqsConvention::PaperEq6 ? "paper" : "twist";
}

EvolutionParams EvolutionParams::coherent(const SpectralDensity& spectrum, int n_particles, double theta,
                                          double phi, MqsConvention conv) {
    EvolutionParams p;
    p.spectrum = spectrum;
    p.sector = SectorLabel::symmetric(n_particles);
    p.theta = theta;
    p.phi = phi;
    p.initial = coherent_state<double>(p.sector, theta, phi);
    p.mqs_convention = conv;
    return p;
}

KernelSample sample_kernels(const EvolutionParams& p, double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("evolve: time must be finite and >= 0");
    KernelSample k{t, 0.0, 0.0};
    if (t == 0.0) return k;
    k.f = f_of_t(p.spectrum, t);
    if (p.decoherence == Decoherence::Physical) k.gamma = gamma_of_t(p.spectrum, t);
    return k;
}

DickeDensityMatrix<double> evolve_state(const EvolutionParams& p, double t) {
    if (!(p.initial.sector == p.sector)) throw UsageError("evolve_state: initial state belongs to another sector");
    const auto k = sample_kernels(p, t);
    if (t == 0.0) return projector(p.initial);
    return apply_reduced_dynamics(p.initial, t * k.f, t * k.gamma);
}

DickeState<double> mqs_target(const SectorLabel& sector, double theta, double phi, MqsConvention conv) {
    const auto first = coherent_state<double>(sector, theta, phi);
    DickeState<double> second;
    const auto d = sector.dimension();
    if (conv == MqsConvention::TwistCompatible) {
        // e^{−iπL_z}|θ,φ⟩ = |θ,φ+π⟩ up to a global phase.
        second = first;
        for (Eigen::Index i = 0; i < d; ++i) {
            second.amplitudes(i) *= std::polar(1.0, -std::numbers::pi * sector.m(i));
        }
    } else {
        second = coherent_state<double>(sector, theta - std::numbers::pi, phi);
        second.amplitudes *= std::polar(1.0, -std::numbers::pi * sector.l());
    }
    DickeState<double> out{sector, ComplexVector<double>(d), Basis::Lz};
    const auto minus = std::polar(1.0, -0.25 * std::numbers::pi);
    const auto plus = std::polar(1.0, 0.25 * std::numbers::pi);
    out.amplitudes = minus * first.amplitudes + plus * second.amplitudes;
    out.amplitudes /= out.amplitudes.norm();
    return out;
}

TauSolution solve_tau_mqs(const SpectralDensity& sd, const TauOptions& opts) {
    double scale;
    try {
        scale = correlation_time(sd);
    } catch (const DomainError&) {
        scale = sd.kind == SpectrumKind::Tabulated ? 1.0 / integration_cutoff(sd) : 1.0 / sd.omega_c;
    }
    TauSolution sol;
    auto g = [&](double t) {
        ++sol.evaluations;
        return t * f_of_t(sd, t) - kHalfPi;
    };

    const double horizon = opts.horizon_factor * scale;
    const double g_horizon = g(horizon);
    if (g_horizon < 0.0) {
        std::ostringstream msg;
        msg << "solve_tau_mqs: t·f(t) reaches only " << g_horizon + kHalfPi << " < π/2 by t = " << horizon;
        throw NoFormationError(msg.str(), g_horizon + kHalfPi, horizon);
    }

    double lo, hi, glo, ghi;
    double t = std::min(scale, horizon);
    double gt = g(t);
    if (gt >= 0.0) {
        hi = t;
        ghi = gt;
        lo = 0.5 * t;
        glo = g(lo);
        for (int i = 0; glo >= 0.0; ++i) {
            if (i > 2000) throw NumericError("solve_tau_mqs: could not bracket the root from below", lo, hi);
            hi = lo;
            ghi = glo;
            lo *= 0.5;
            glo = g(lo);
        }
    } else {
        lo = t;
        glo = gt;
        hi = std::min(2.0 * t, horizon);
        ghi = hi == horizon ? g_horizon : g(hi);
        while (ghi < 0.0) {
            lo = hi;
            glo = ghi;
            hi = std::min(2.0 * hi, horizon);
            ghi = hi == horizon ? g_horizon : g(hi);
        }
    }

    // Bisection to a narrow bracket, then Illinois-safeguarded secant steps.
    while (hi - lo > 1e-2 * hi) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (gm < 0.0) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
            ghi = gm;
        }
    }
    double best = std::abs(glo) < std::abs(ghi) ? lo : hi;
    double gbest = std::min(std::abs(glo), std::abs(ghi));
    int side = 0;
    double flo = glo, fhi = ghi;
    for (int iter = 0; iter < 200; ++iter) {
        if (gbest == 0.0 || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
        double x = (lo * fhi - hi * flo) / (fhi - flo);
        if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
        const double gx = g(x);
        if (std::abs(gx) < gbest) {
            gbest = std::abs(gx);
            best = x;
        }
        if (gx < 0.0) {
            lo = x;
            glo = gx;
            flo = gx;
            if (side == -1) fhi *= 0.5;
            side = -1;
        } else {
            hi = x;
            ghi = gx;
            fhi = gx;
            if (side == 1) flo *= 0.5;
            side = 1;
        }
        if (gbest <= 1e-3 * opts.residual_tolerance * kHalfPi) break;
    }

    sol.tau = best;
    sol.bracket_lo = lo;
    sol.bracket_hi = hi;
    sol.residual = best * f_of_t(sd, best) - kHalfPi;
    if (std::abs(sol.residual) > opts.residual_tolerance * kHalfPi) {
        std::ostringstream msg;
        msg << "solve_tau_mqs: residual " << sol.residual << " exceeds tolerance at τ = " << best;
        throw NumericError(msg.str(), best, std::abs(sol.residual));
    }
    return sol;
}

MqsReport assess_mqs(const EvolutionParams& p, const TauOptions& opts) {
    const auto sol = solve_tau_mqs(p.spectrum, opts);
    const auto k = sample_kernels(p, sol.tau);
    const auto rho = apply_reduced_dynamics(p.initial, sol.tau * k.f, sol.tau * k.gamma);
    const auto target = mqs_target(p.sector, p.theta, p.phi, p.mqs_convention);

    MqsReport r;
    r.n_particles = p.sector.n_particles;
    r.tau_mqs = sol.tau;
    r.f_at_tau = k.f;
    r.gamma_at_tau = k.gamma;
    r.tau_gamma = sol.tau * k.gamma;
    r.fidelity = fidelity(rho, target);
    r.purity = purity(rho);
    r.corner = coherence_corner(to_x_basis(rho));
    const double n = p.sector.n_particles;
    r.feasible = r.tau_gamma * n * n < 1.0;
    if (r.tau_gamma > 0.0) r.n_max = static_cast<long long>(std::floor(1.0 / std::sqrt(r.tau_gamma)));
    r.convention_used = p.mqs_convention;
    return r;
}

std::vector<Snapshot> snapshot_series(const EvolutionParams& p, const std::vector<double>& times,
                                      Basis basis, int jobs) {
    for (double t : times) {
        if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("snapshot_series: times must be finite and >= 0");
    }
    const std::size_t n = times.size();
    std::vector<KernelSample> samples(n);
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(jobs > 0 ? jobs : 1, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) samples[i] = sample_kernels(p, times[i]);
    } else {
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < n; i += workers) samples[i] = sample_kernels(p, times[i]);
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

    RealMatrix<double> rotation;
    if (basis == Basis::Lx) rotation = rotation_to_x<double>(p.sector);
    std::vector<Snapshot> out;
    out.reserve(n);
    for (const auto& k : samples) {
        auto rho = k.t == 0.0 ? projector(p.initial) : apply_reduced_dynamics(p.initial, k.t * k.f, k.t * k.gamma);
        if (basis == Basis::Lx) rho = to_x_basis(rho, rotation);
        out.push_back({k.t, k.f, k.gamma, std::move(rho)});
    }
    return out;
}

} // namespace mqsim
