// quadrature.hpp — adaptive Gauss–Kronrod and Filon–Legendre rules for the kernel integrals

#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace mqsim::quad {

using RealFunction = std::function<double(double)>;

// Neumaier-compensated running sum. Order of add() calls fixes the result bit-for-bit.
class CompensatedSum {
public:
    void add(double x) noexcept;
    double value() const noexcept { return sum_ + carry_; }

private:
    double sum_{0.0};
    double carry_{0.0};
};

struct Estimate {
    double value{0.0};
    double error{0.0};
    std::size_t evaluations{0};
};

struct Tolerance {
    double relative{1e-11};
    double absolute{0.0};
    int max_intervals{4000};
};

// Globally adaptive 21-point Gauss–Kronrod on [a, b]. `breakpoints` inside (a, b) are
// used as initial subdivision points (kinks of tabulated spectra, Lorentzian peaks).
// Never evaluates f at a or b.
Estimate integrate(const RealFunction& f, double a, double b, const Tolerance& tol,
                   std::span<const double> breakpoints = {});

// ∫_a^∞ f via ω = a/u, u ∈ (0, 1]. Requires a > 0 and f decaying at least like 1/ω^(1+ε).
Estimate integrate_to_infinity(const RealFunction& f, double a, const Tolerance& tol);

// Result of ∫ p(ω) dω and ∫ q(ω) e^{iωt} dω over a union of panels.
struct FourierPair {
    double plain{0.0};
    std::complex<double> fourier{0.0, 0.0};
    double error{0.0};
    std::size_t panels{0};
};

// Adaptive Filon–Legendre quadrature. On each panel both p and q are expanded in
// Legendre polynomials from Gauss–Legendre samples; the oscillatory moments are exact
// (2 i^k j_k(κ)), so accuracy depends on how well p and q are resolved, not on t.
// A panel is accepted when the two highest Legendre coefficients fall below
// `relative` times the largest one (or below `absolute` in integrated size).
FourierPair integrate_fourier(const RealFunction& p, const RealFunction& q, double t,
                              double a, double b, const Tolerance& tol,
                              std::span<const double> breakpoints = {});

// j_0(x) .. j_{count-1}(x) for x ≥ 0.
std::vector<double> spherical_bessel_sequence(int count, double x);

// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1], ascending.
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussLegendreRule gauss_legendre(int n);

} // namespace mqsim::quad
