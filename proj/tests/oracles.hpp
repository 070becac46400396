#pragma once

// Test-only oracles, independent of the library's integration paths:
// an adaptive embedded Runge-Kutta pair and an adaptive Simpson rule.

#include <cmath>
#include <cstdlib>
#include <functional>

namespace oracles {

// Cash-Karp 4(5) with step-doubling control.
inline double rk45_flow(const std::function<double(double)>& f, double y0, double t,
                        double tol) {
    if (t == 0.0) return y0;
    double dir = (t > 0.0) ? 1.0 : -1.0;
    double remaining = std::abs(t);
    double h = std::min(remaining, 1e-2);
    double y = y0;
    int guard = 0;
    while (remaining > 0.0 && guard++ < 2000000) {
        h = std::min(h, remaining);
        double k1 = f(y);
        double k2 = f(y + dir * h * (k1 / 5.0));
        double k3 = f(y + dir * h * (3.0 * k1 + 9.0 * k2) / 40.0);
        double k4 = f(y + dir * h * (3.0 * k1 - 9.0 * k2 + 12.0 * k3) / 10.0);
        double k5 = f(y + dir * h * (-11.0 * k1 / 54.0 + 5.0 * k2 / 2.0 - 70.0 * k3 / 27.0 +
                                     35.0 * k4 / 27.0));
        double k6 = f(y + dir * h * (1631.0 * k1 / 55296.0 + 175.0 * k2 / 512.0 +
                                     575.0 * k3 / 13824.0 + 44275.0 * k4 / 110592.0 +
                                     253.0 * k5 / 4096.0));
        double y5 = y + dir * h * (37.0 * k1 / 378.0 + 250.0 * k3 / 621.0 + 125.0 * k4 / 594.0 +
                                   512.0 * k6 / 1771.0);
        double y4 = y + dir * h * (2825.0 * k1 / 27648.0 + 18575.0 * k3 / 48384.0 +
                                   13525.0 * k4 / 55296.0 + 277.0 * k5 / 14336.0 + k6 / 4.0);
        double err = std::abs(y5 - y4);
        double scale = tol * std::max(1.0, std::abs(y));
        if (err <= scale || h <= 1e-14) {
            y = y5;
            remaining -= h;
            if (err > 0.0) h *= std::min(5.0, 0.9 * std::pow(scale / err, 0.2));
        } else {
            h *= std::max(0.1, 0.9 * std::pow(scale / err, 0.25));
        }
    }
    return y;
}

inline double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                          double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double flm = f(0.5 * (a + m));
    double frm = f(0.5 * (m + b));
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double err = left + right - whole;
    if (depth <= 0 || std::abs(err) <= 15.0 * tol) return left + right + err / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 40);
}

// Small deterministic xorshift for property sampling.
struct Rng {
    std::uint64_t s;
    explicit Rng(std::uint64_t seed) : s(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
    std::uint64_t next() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s;
    }
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * (double(next() >> 11) * 0x1.0p-53);
    }
};

}  // namespace oracles
