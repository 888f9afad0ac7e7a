// quadrature.cpp — adaptive Gauss–Kronrod, mapped semi-infinite rule, Filon–Legendre panels

#include "mqsim/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>

#include "mqsim/errors.hpp"

namespace mqsim::quad {

void CompensatedSum::add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
        carry_ += (sum_ - t) + x;
    } else {
        carry_ += (x - t) + sum_;
    }
    sum_ = t;
}

namespace {

// QUADPACK qk21 abscissae/weights. Odd indices are the embedded 10-point Gauss nodes.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208067172075, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Interval {
    double a, b, value, error;
};

Interval kronrod21(const RealFunction& f, double a, double b) {
    const double centr = 0.5 * (a + b);
    const double hlgth = 0.5 * (b - a);
    const double dhlgth = std::abs(hlgth);

    std::array<double, 10> fv1{}, fv2{};
    const double fc = f(centr);
    double resg = 0.0;
    double resk = kWgk[10] * fc;
    double resabs = std::abs(resk);
    for (int j = 0; j < 5; ++j) {
        const int jtw = 2 * j + 1;
        const double absc = hlgth * kXgk[jtw];
        const double f1 = f(centr - absc);
        const double f2 = f(centr + absc);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        resg += kWg[j] * (f1 + f2);
        resk += kWgk[jtw] * (f1 + f2);
        resabs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
    }
    for (int j = 0; j < 5; ++j) {
        const int jtwm1 = 2 * j;
        const double absc = hlgth * kXgk[jtwm1];
        const double f1 = f(centr - absc);
        const double f2 = f(centr + absc);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        resk += kWgk[jtwm1] * (f1 + f2);
        resabs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
    }
    const double reskh = resk * 0.5;
    double resasc = kWgk[10] * std::abs(fc - reskh);
    for (int j = 0; j < 10; ++j) {
        resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
    }
    const double result = resk * hlgth;
    resabs *= dhlgth;
    resasc *= dhlgth;
    double abserr = std::abs((resk - resg) * hlgth);
    if (resasc != 0.0 && abserr != 0.0) {
        abserr = resasc * std::min(1.0, std::pow(200.0 * abserr / resasc, 1.5));
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
        abserr = std::max(eps * 50.0 * resabs, abserr);
    }
    return {a, b, result, abserr};
}

std::vector<double> segment_points(double a, double b, std::span<const double> breakpoints) {
    std::vector<double> pts{a};
    std::vector<double> inner;
    for (double x : breakpoints) {
        if (x > a && x < b) inner.push_back(x);
    }
    std::sort(inner.begin(), inner.end());
    inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
    pts.insert(pts.end(), inner.begin(), inner.end());
    pts.push_back(b);
    return pts;
}

} // namespace

Estimate integrate(const RealFunction& f, double a, double b, const Tolerance& tol,
                   std::span<const double> breakpoints) {
    if (!(b > a)) return {};

    auto worse = [](const Interval& x, const Interval& y) {
        if (x.error != y.error) return x.error < y.error;
        return x.a > y.a;
    };
    std::priority_queue<Interval, std::vector<Interval>, decltype(worse)> heap(worse);

    const auto pts = segment_points(a, b, breakpoints);
    double total = 0.0;
    double total_err = 0.0;
    std::size_t evaluations = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        auto iv = kronrod21(f, pts[i], pts[i + 1]);
        evaluations += 21;
        total += iv.value;
        total_err += iv.error;
        heap.push(iv);
    }

    int intervals = static_cast<int>(heap.size());
    while (total_err > std::max(tol.absolute, tol.relative * std::abs(total))) {
        if (intervals >= tol.max_intervals) {
            std::ostringstream msg;
            msg << "adaptive Gauss-Kronrod on [" << a << ", " << b << "] did not converge: estimate "
                << total << " +/- " << total_err;
            throw NumericError(msg.str(), total, total_err);
        }
        const Interval worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw NumericError("adaptive Gauss-Kronrod: interval collapsed below resolution",
                               total, total_err);
        }
        heap.pop();
        auto left = kronrod21(f, worst.a, mid);
        auto right = kronrod21(f, mid, worst.b);
        evaluations += 42;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++intervals;
    }

    // Re-sum in positional order so the value does not depend on the refinement history.
    std::vector<Interval> all;
    all.reserve(heap.size());
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    std::sort(all.begin(), all.end(), [](const Interval& x, const Interval& y) { return x.a < y.a; });
    CompensatedSum value, error;
    for (const auto& iv : all) {
        value.add(iv.value);
        error.add(iv.error);
    }
    return {value.value(), error.value(), evaluations};
}

Estimate integrate_to_infinity(const RealFunction& f, double a, const Tolerance& tol) {
    if (!(a > 0.0)) throw DomainError("integrate_to_infinity: lower limit must be positive");
    auto mapped = [&](double u) {
        const double w = a / u;
        if (!std::isfinite(w)) return 0.0;
        return f(w) * a / (u * u);
    };
    return integrate(mapped, 0.0, 1.0, tol);
}

GaussLegendreRule gauss_legendre(int n) {
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[n - 1 - i] = x;
        rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

std::vector<double> spherical_bessel_sequence(int count, double x) {
    std::vector<double> j(static_cast<std::size_t>(std::max(count, 0)), 0.0);
    if (count <= 0) return j;
    if (x == 0.0) {
        j[0] = 1.0;
        return j;
    }
    const double j0 = std::sin(x) / x;
    if (x > count) {
        // Upward recurrence is stable while the order stays below the argument.
        j[0] = j0;
        if (count > 1) j[1] = std::sin(x) / (x * x) - std::cos(x) / x;
        for (int k = 1; k + 1 < count; ++k) {
            j[k + 1] = (2.0 * k + 1.0) / x * j[k] - j[k - 1];
        }
        return j;
    }
    // Miller's downward recurrence, normalized against j0 or j1.
    const int start = count + 50 + static_cast<int>(x);
    std::vector<double> f(static_cast<std::size_t>(start) + 2, 0.0);
    f[start] = 1e-300;
    for (int k = start; k >= 1; --k) {
        f[k - 1] = (2.0 * k + 1.0) / x * f[k] - f[k + 1];
        if (std::abs(f[k - 1]) > 1e200) {
            for (int i = k - 1; i <= start; ++i) f[i] *= 1e-200;
        }
    }
    double scale;
    const double j1 = x < 1.0 ? 0.0 : std::sin(x) / (x * x) - std::cos(x) / x;
    if (std::abs(j0) >= std::abs(j1)) {
        scale = j0 / f[0];
    } else {
        scale = j1 / f[1];
    }
    for (int k = 0; k < count; ++k) j[k] = f[k] * scale;
    return j;
}

namespace {

constexpr int kFilonOrder = 24;

struct FilonTables {
    GaussLegendreRule rule;
    // projection[k][j] = (2k+1)/2 · w_j · P_k(x_j)
    std::array<std::array<double, kFilonOrder>, kFilonOrder> projection{};

    FilonTables() : rule(gauss_legendre(kFilonOrder)) {
        for (int j = 0; j < kFilonOrder; ++j) {
            const double x = rule.nodes[j];
            double p0 = 1.0, p1 = x;
            projection[0][j] = 0.5 * rule.weights[j];
            projection[1][j] = 1.5 * rule.weights[j] * x;
            for (int k = 2; k < kFilonOrder; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
                projection[k][j] = (2.0 * k + 1.0) / 2.0 * rule.weights[j] * p2;
            }
        }
    }
};

const FilonTables& filon_tables() {
    static const FilonTables tables;
    return tables;
}

struct Panel {
    double a, b;
    int depth;
};

} // namespace

FourierPair integrate_fourier(const RealFunction& p, const RealFunction& q, double t, double a,
                              double b, const Tolerance& tol, std::span<const double> breakpoints) {
    FourierPair out;
    if (!(b > a)) return out;
    const auto& tab = filon_tables();
    constexpr int n = kFilonOrder;
    constexpr int max_depth = 60;

    CompensatedSum plain, re, im, err;
    std::array<double, n> pv{}, qv{}, cp{}, cq{};

    const auto pts = segment_points(a, b, breakpoints);
    std::vector<Panel> stack;
    for (std::size_t s = pts.size() - 1; s-- > 0;) stack.push_back({pts[s], pts[s + 1], 0});

    std::size_t panels = 0;
    while (!stack.empty()) {
        const Panel panel = stack.back();
        stack.pop_back();
        const double c = 0.5 * (panel.a + panel.b);
        const double r = 0.5 * (panel.b - panel.a);
        for (int j = 0; j < n; ++j) {
            const double w = c + r * tab.rule.nodes[j];
            pv[j] = p(w);
            qv[j] = q(w);
        }
        double pmax = 0.0, qmax = 0.0;
        for (int k = 0; k < n; ++k) {
            double sp = 0.0, sq = 0.0;
            for (int j = 0; j < n; ++j) {
                sp += tab.projection[k][j] * pv[j];
                sq += tab.projection[k][j] * qv[j];
            }
            cp[k] = sp;
            cq[k] = sq;
            pmax = std::max(pmax, std::abs(sp));
            qmax = std::max(qmax, std::abs(sq));
        }
        const double ptail = std::abs(cp[n - 1]) + std::abs(cp[n - 2]);
        const double qtail = std::abs(cq[n - 1]) + std::abs(cq[n - 2]);
        const bool p_ok = ptail <= tol.relative * pmax || 2.0 * r * ptail <= tol.absolute;
        const bool q_ok = qtail <= tol.relative * qmax || 2.0 * r * qtail <= tol.absolute;
        const double mid = c;
        const bool can_split = panel.depth < max_depth && mid > panel.a && mid < panel.b;
        if (!(p_ok && q_ok) && can_split) {
            if (static_cast<int>(panels + stack.size()) > tol.max_intervals) {
                throw NumericError("Filon quadrature: panel budget exhausted",
                                   plain.value(), err.value());
            }
            stack.push_back({mid, panel.b, panel.depth + 1});
            stack.push_back({panel.a, mid, panel.depth + 1});
            continue;
        }
        ++panels;
        plain.add(2.0 * r * cp[0]);
        const auto jk = spherical_bessel_sequence(n, r * t);
        // Σ c_k 2 i^k j_k(κ), with i^k cycling through 1, i, -1, -i.
        double sre = 0.0, sim = 0.0;
        for (int k = 0; k < n; ++k) {
            const double term = 2.0 * cq[k] * jk[k];
            switch (k % 4) {
                case 0: sre += term; break;
                case 1: sim += term; break;
                case 2: sre -= term; break;
                default: sim -= term; break;
            }
        }
        const std::complex<double> phase = std::polar(1.0, c * t);
        const std::complex<double> contrib = r * phase * std::complex<double>(sre, sim);
        re.add(contrib.real());
        im.add(contrib.imag());
        err.add(2.0 * r * (ptail + qtail));
    }
    out.plain = plain.value();
    out.fourier = {re.value(), im.value()};
    out.error = err.value();
    out.panels = panels;
    return out;
}

} // namespace mqsim::quad
