// dicke.hpp — collective spin states in a fixed total-spin sector
//
// Index convention: component i of every vector/matrix belongs to m = l − i, so the
// first entry is m = +l and the last is m = −l.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "mqsim/errors.hpp"

namespace mqsim {

enum class Basis { Lz, Lx };

inline std::string to_string(Basis b) { return b == Basis::Lz ? "lz" : "lx"; }

struct SectorLabel {
    int n_particles{1};
    int two_l{1};  // 2l, so half-integer l stays exact

    static SectorLabel symmetric(int n) { return SectorLabel::make(n, n); }

    static SectorLabel make(int n, int two_l) {
        if (n < 1) throw UsageError("sector: number of particles must be >= 1");
        if (two_l < 0 || two_l > n || (n - two_l) % 2 != 0) {
            std::ostringstream msg;
            msg << "sector: 2l = " << two_l << " is not reachable with N = " << n;
            throw UsageError(msg.str());
        }
        return SectorLabel{n, two_l};
    }

    double l() const noexcept { return 0.5 * two_l; }
    Eigen::Index dimension() const noexcept { return two_l + 1; }
    double m(Eigen::Index i) const noexcept { return 0.5 * (two_l - 2.0 * static_cast<double>(i)); }
    bool is_symmetric() const noexcept { return two_l == n_particles; }

    friend bool operator==(const SectorLabel&, const SectorLabel&) = default;
};

template <typename Real>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using RealMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real = double>
struct DickeState {
    SectorLabel sector;
    ComplexVector<Real> amplitudes;
    Basis basis{Basis::Lz};
};

template <typename Real = double>
struct DickeDensityMatrix {
    SectorLabel sector;
    ComplexMatrix<Real> elements;
    Basis basis{Basis::Lz};
};

// log C(n, k) through lgamma; stays finite far beyond n = 171 where n! overflows.
inline double log_binomial(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Projection of the product state ⊗(cos θ/2 |↑⟩ + sin θ/2 e^{iφ} |↓⟩) onto the symmetric
// sector: c_m = sqrt(C(2l, l−m)) cos^{l+m}(θ/2) sin^{l−m}(θ/2) e^{i(l−m)φ}.
// c_{+l} is real and positive for 0 ≤ θ < π.
template <typename Real = double>
DickeState<Real> coherent_state(const SectorLabel& sector, Real theta, Real phi) {
    if (!sector.is_symmetric()) {
        throw UsageError("coherent_state: coherent states live in the symmetric sector l = N/2");
    }
    using std::abs, std::log, std::exp, std::cos, std::sin, std::sqrt;
    const int n = sector.two_l;
    const Real c = cos(theta / 2);
    const Real s = sin(theta / 2);
    const Real two_pi = 2 * std::numbers::pi_v<Real>;
    const Real phi0 = std::remainder(phi, two_pi);

    DickeState<Real> out{sector, ComplexVector<Real>::Zero(sector.dimension()), Basis::Lz};
    for (int k = 0; k <= n; ++k) {  // k = l − m spins down
        const int up = n - k;
        if ((c == 0 && up > 0) || (s == 0 && k > 0)) continue;
        Real logmag = Real(0.5 * log_binomial(n, k));
        if (up > 0) logmag += up * log(abs(c));
        if (k > 0) logmag += k * log(abs(s));
        Real sign = 1;
        if (c < 0 && up % 2 == 1) sign = -sign;
        if (s < 0 && k % 2 == 1) sign = -sign;
        const Real angle = std::remainder(k * phi0, two_pi);
        out.amplitudes(k) = std::polar(sign * exp(logmag), angle);
    }
    out.amplitudes /= out.amplitudes.norm();
    return out;
}

// Wigner d^l(π/2) = exp(−i(π/2)L_y) in the L_z basis, real. Column m is the L_x
// eigenvector |l, m⟩_x; the first row is (−1)^{l−m} sqrt(C(2l, l−m)) / 2^l.
// Built by coupling one spin-½ at a time:
//   d^j_{m'm} = Σ CG(j−½ ⊗ ½ → j) · d^{j−½} · d^{½}
// with non-negative Clebsch–Gordan weights, so rounding errors do not amplify.
template <typename Real = double>
RealMatrix<Real> rotation_to_x(const SectorLabel& sector) {
    using std::sqrt;
    const Real c = sqrt(Real(0.5));  // cos(π/4)
    const Real s = c;                // sin(π/4)
    RealMatrix<Real> prev = RealMatrix<Real>::Ones(1, 1);
    for (int two_j = 1; two_j <= sector.two_l; ++two_j) {
        RealMatrix<Real> next(two_j + 1, two_j + 1);
        const Real inv = Real(1) / Real(two_j);
        for (int b = 0; b <= two_j; ++b) {
            for (int a = 0; a <= two_j; ++a) {
                Real v = 0;
                if (a < two_j && b < two_j) v += sqrt(Real(two_j - a) * Real(two_j - b)) * prev(a, b) * c;
                if (a < two_j && b > 0) v -= sqrt(Real(two_j - a) * Real(b)) * prev(a, b - 1) * s;
                if (a > 0 && b < two_j) v += sqrt(Real(a) * Real(two_j - b)) * prev(a - 1, b) * s;
                if (a > 0 && b > 0) v += sqrt(Real(a) * Real(b)) * prev(a - 1, b - 1) * c;
                next(a, b) = v * inv;
            }
        }
        prev = std::move(next);
    }
    return prev;
}

// L_z-basis components → L_x-basis components: ψ_x = dᵀ ψ_z, ρ_x = dᵀ ρ_z d.
template <typename Real>
DickeState<Real> to_x_basis(const DickeState<Real>& psi, const RealMatrix<Real>& rotation) {
    if (psi.basis != Basis::Lz) throw UsageError("to_x_basis: state is not in the L_z basis");
    return {psi.sector, rotation.transpose().template cast<std::complex<Real>>() * psi.amplitudes, Basis::Lx};
}

template <typename Real>
DickeDensityMatrix<Real> to_x_basis(const DickeDensityMatrix<Real>& rho, const RealMatrix<Real>& rotation) {
    if (rho.basis != Basis::Lz) throw UsageError("to_x_basis: matrix is not in the L_z basis");
    const auto d = rotation.template cast<std::complex<Real>>();
    return {rho.sector, d.transpose() * rho.elements * d, Basis::Lx};
}

template <typename Real>
DickeDensityMatrix<Real> to_x_basis(const DickeDensityMatrix<Real>& rho) {
    return to_x_basis(rho, rotation_to_x<Real>(rho.sector));
}

template <typename Real>
DickeDensityMatrix<Real> projector(const DickeState<Real>& psi) {
    return {psi.sector, psi.amplitudes * psi.amplitudes.adjoint(), psi.basis};
}

template <typename Real>
DickeDensityMatrix<Real> maximally_mixed(const SectorLabel& sector, Basis basis = Basis::Lz) {
    const auto d = sector.dimension();
    return {sector, ComplexMatrix<Real>::Identity(d, d) / Real(d), basis};
}

// Re⟨ψ|ρ|ψ⟩ clamped to [0, 1].
template <typename Real>
Real fidelity(const DickeDensityMatrix<Real>& rho, const DickeState<Real>& target) {
    if (!(rho.sector == target.sector)) throw UsageError("fidelity: sector mismatch");
    if (rho.basis != target.basis) throw UsageError("fidelity: basis mismatch");
    const Real v = (target.amplitudes.adjoint() * rho.elements * target.amplitudes)(0, 0).real();
    return std::clamp(v, Real(0), Real(1));
}

// tr ρ² for Hermitian ρ is the squared Frobenius norm.
template <typename Real>
Real purity(const DickeDensityMatrix<Real>& rho) {
    return rho.elements.squaredNorm();
}

// |ρ_{+l,−l}| in the L_x basis: the cat-state coherence between the two extreme
// x-polarized components.
template <typename Real>
Real coherence_corner(const DickeDensityMatrix<Real>& rho) {
    if (rho.basis != Basis::Lx) throw UsageError("coherence_corner: requires an L_x-basis matrix");
    return std::abs(rho.elements(0, rho.elements.cols() - 1));
}

struct DensityDiagnostics {
    double hermiticity{0.0};   // max |ρ − ρ†|
    double trace_error{0.0};   // |tr ρ − 1|
    double min_eigenvalue{0.0};

    bool valid(double herm_tol = 1e-12, double trace_tol = 1e-12, double psd_tol = 1e-10) const {
        return hermiticity <= herm_tol && trace_error <= trace_tol && min_eigenvalue >= -psd_tol;
    }
};

template <typename Real>
DensityDiagnostics diagnose(const DickeDensityMatrix<Real>& rho) {
    const auto& e = rho.elements;
    DensityDiagnostics d;
    d.hermiticity = static_cast<double>((e - e.adjoint()).cwiseAbs().maxCoeff());
    d.trace_error = static_cast<double>(std::abs(e.trace() - std::complex<Real>(1)));
    const ComplexMatrix<Real> herm = (e + e.adjoint()) / Real(2);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>> solver(herm, Eigen::EigenvaluesOnly);
    d.min_eigenvalue = static_cast<double>(solver.eigenvalues().minCoeff());
    return d;
}

} // namespace mqsim
