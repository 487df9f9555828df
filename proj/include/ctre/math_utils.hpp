#pragma once

// Shared numeric helpers: accurate sin(pi*x) and reciprocal gamma on the
// whole real line, an adaptive Gauss-Kronrod integrator, a barycentric
// Chebyshev interpolant, and a few small statistics utilities.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ctre {

inline constexpr double euler_gamma = 0.57721566490153286061;
inline constexpr double zeta3 = 1.2020569031595942854;

namespace detail {

// sin(pi*x) with exact zeros at integers; reduces |r| <= 0.5 before calling sin.
inline double sinpi(double x) {
    const double n = std::round(x);
    const double r = x - n;
    if (r == 0.0) return 0.0;
    const double s = std::sin(3.14159265358979323846 * r);
    return (std::fmod(std::fabs(n), 2.0) == 0.0) ? s : -s;
}

// 1/Gamma(x); returns 0 at the poles x = 0, -1, -2, ...
inline double rgamma(double x) {
    if (x > 0.5) {
        if (x > 178.0) return 0.0;  // 1/Gamma underflows
        return 1.0 / std::tgamma(x);
    }
    // reflection: 1/Gamma(x) = Gamma(1-x) * sin(pi x) / pi
    const double s = sinpi(x);
    if (s == 0.0) return 0.0;
    const double lg = std::lgamma(1.0 - x);
    return std::copysign(std::exp(lg + std::log(std::fabs(s) / 3.14159265358979323846)), s);
}

// log|1/Gamma(x)| and its sign; sign = 0 marks a pole.
inline double lrgamma(double x, int& sign) {
    if (x > 0.5) {
        sign = 1;
        return -std::lgamma(x);
    }
    const double s = sinpi(x);
    if (s == 0.0) {
        sign = 0;
        return -std::numeric_limits<double>::infinity();
    }
    sign = s > 0.0 ? 1 : -1;
    return std::lgamma(1.0 - x) + std::log(std::fabs(s) / 3.14159265358979323846);
}

// ---------------------------------------------------------------------------
// Adaptive Gauss-Kronrod 15(7) quadrature (QUADPACK dqk15 nodes).

template <class F>
inline void gk15(F&& f, double a, double b, double& integral, double& err) {
    static constexpr double xgk[8] = {
        0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
        0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
        0.2077849550078985, 0.0};
    static constexpr double wgk[8] = {
        0.0229353220105292, 0.0630920926299785, 0.1047900103222502,
        0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
        0.2044329400752989, 0.2094821410847278};
    static constexpr double wg[4] = {
        0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
        0.4179591836734694};

    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    const double fc = f(mid);
    double resk = wgk[7] * fc;
    double resg = wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = half * xgk[j];
        const double f1 = f(mid - dx);
        const double f2 = f(mid + dx);
        resk += wgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += wg[(j - 1) / 2] * (f1 + f2);
    }
    integral = resk * half;
    err = std::fabs((resk - resg) * half);
}

// Integrates f over [pts[0], pts.back()] with mandatory breakpoints, refining
// the worst interval until the summed error estimate meets the tolerance.
template <class F>
inline double integrate_adaptive(F&& f, std::vector<double> pts, double rel_tol,
                                 double abs_tol, int max_intervals = 4000) {
    struct Seg {
        double a, b, val, err;
    };
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 2) return 0.0;

    std::vector<Seg> segs;
    segs.reserve(64);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        Seg s{pts[i], pts[i + 1], 0.0, 0.0};
        gk15(f, s.a, s.b, s.val, s.err);
        segs.push_back(s);
    }
    for (;;) {
        double total = 0.0, toterr = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            total += segs[i].val;
            toterr += segs[i].err;
            if (segs[i].err > segs[worst].err) worst = i;
        }
        if (toterr <= std::max(abs_tol, rel_tol * std::fabs(total)) ||
            (int)segs.size() >= max_intervals || segs[worst].err == 0.0)
            return total;
        const Seg s = segs[worst];
        const double m = 0.5 * (s.a + s.b);
        if (m <= s.a || m >= s.b) return total;  // interval at rounding limit
        Seg l{s.a, m, 0.0, 0.0}, r{m, s.b, 0.0, 0.0};
        gk15(f, l.a, l.b, l.val, l.err);
        gk15(f, r.a, r.b, r.val, r.err);
        segs[worst] = l;
        segs.push_back(r);
    }
}

// ---------------------------------------------------------------------------
// Barycentric interpolation at Chebyshev-Lobatto nodes.

struct ChebInterp {
    double lo = 0.0, hi = 1.0;
    std::vector<double> nodes;   // in [lo, hi], descending from hi to lo
    std::vector<double> values;

    double operator()(double x) const {
        // Lobatto barycentric weights are (-1)^j, halved at the endpoints.
        const std::size_t n = nodes.size();
        double num = 0.0, den = 0.0;
        double sgn = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double d = x - nodes[j];
            if (std::fabs(d) < 1e-300) return values[j];
            double w = sgn;
            if (j == 0 || j == n - 1) w *= 0.5;
            const double q = w / d;
            num += q * values[j];
            den += q;
            sgn = -sgn;
        }
        return num / den;
    }

    template <class F>
    static ChebInterp fit(F&& f, double lo, double hi, double tol, int max_pts = 2049) {
        ChebInterp c;
        c.lo = lo;
        c.hi = hi;
        int n = 65;
        for (;;) {
            c.nodes.resize(n);
            c.values.resize(n);
            for (int j = 0; j < n; ++j) {
                const double t = std::cos(3.14159265358979323846 * j / (n - 1));
                double x = 0.5 * (lo + hi) + 0.5 * (hi - lo) * t;
                c.nodes[j] = x;
                c.values[j] = f(x);
            }
            // probe halfway between nodes, where the error peaks; a spread of
            // probes suffices for smooth integrands
            double maxerr = 0.0;
            const int stride = std::max(1, (n - 1) / 32);
            for (int j = 0; j + 1 < n; j += 2 * stride) {
                const double x = 0.5 * (c.nodes[j] + c.nodes[j + 1]);
                const double approx = c(x);
                const double exact = f(x);
                maxerr = std::max(maxerr,
                                  std::fabs(approx - exact) / (std::fabs(exact) + 1e-300));
            }
            if (maxerr <= tol || n >= max_pts) return c;
            n = 2 * (n - 1) + 1;
        }
    }
};

// ---------------------------------------------------------------------------
// Small statistics utilities.

inline double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Unbiased sample variance (n-1 denominator).
inline double variance(const std::vector<double>& v) {
    if (v.size() < 2) throw std::invalid_argument("variance: need at least 2 values");
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

inline double median(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median: empty sample");
    const std::size_t h = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + h, v.end());
    double m = v[h];
    if (v.size() % 2 == 0) {
        std::nth_element(v.begin(), v.begin() + h - 1, v.end());
        m = 0.5 * (m + v[h - 1]);
    }
    return m;
}

// p-quantile with linear interpolation, v sorted ascending.
inline double quantile_sorted(const std::vector<double>& v, double p) {
    if (v.empty()) throw std::invalid_argument("quantile: empty sample");
    const double pos = p * static_cast<double>(v.size() - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    if (i + 1 >= v.size()) return v.back();
    const double w = pos - static_cast<double>(i);
    return (1.0 - w) * v[i] + w * v[i + 1];
}

// Least-squares line y = a + b*x; returns {intercept, slope}.
inline std::pair<double, double> ls_fit(const std::vector<double>& x,
                                        const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("ls_fit: need two equal-length samples, size >= 2");
    const double mx = mean(x), my = mean(y);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("ls_fit: degenerate abscissae");
    const double b = sxy / sxx;
    return {my - b * mx, b};
}

}  // namespace detail
}  // namespace ctre
