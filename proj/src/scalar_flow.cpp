#include "anosov/scalar_flow.hpp"

#include <algorithm>
#include <cmath>

namespace anosov {

namespace {

constexpr double kQuarter = 0.25;
constexpr double kHalf = 0.5;

// Adaptive Simpson on a smooth integrand.
template <typename F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = f(lm);
    double frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double err = left + right - whole;
    if (depth <= 0 || std::abs(err) <= 15.0 * tol) {
        return left + right + err / 15.0;
    }
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    double fa = f(a);
    double fb = f(b);
    double m = 0.5 * (a + b);
    double fm = f(m);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

void FlowParams::validate() const {
    if (!(lambda > 0.0)) throw std::domain_error("flow: lambda must be positive");
    if (!(delta > 0.0 && delta < 1.0 / 16.0))
        throw std::domain_error("flow: delta must lie in (0, 1/16)");
    if (!(linear_zone_margin >= std::exp(lambda) * delta))
        throw std::domain_error("flow: linear_zone_margin must be >= e^lambda * delta");
    if (!(linear_zone_margin < kQuarter))
        throw std::domain_error("flow: linear_zone_margin must be < 1/4");
    if (!(ode_step > 0.0 && ode_tol > 0.0))
        throw std::domain_error("flow: ode_step and ode_tol must be positive");
}

ScalarFlow::ScalarFlow(FlowParams params) : params_(params) {
    params_.validate();
    exp_lambda_ = std::exp(params_.lambda);
    exp_neg_lambda_ = std::exp(-params_.lambda);
}

double ScalarFlow::vector_field(double y) const {
    if (y < 0.0 || y > 1.0) throw std::domain_error("vector_field: y outside [0,1]");
    if (y >= kHalf) return 0.0;
    if (y > kQuarter) return -vector_field(kHalf - y);
    if (y == kQuarter || y == 0.0) return 0.0;
    double a = blend_edge();
    double psi = (y >= a) ? 1.0 : smoothstep(y / a);
    return params_.lambda * (y - kQuarter) * psi;
}

double ScalarFlow::vector_field_deriv(double y) const {
    if (y < 0.0 || y > 1.0) throw std::domain_error("vector_field_deriv: y outside [0,1]");
    if (y >= kHalf) return 0.0;
    if (y > kQuarter) return vector_field_deriv(kHalf - y);
    double a = blend_edge();
    if (y >= a) return params_.lambda;
    double u = y / a;
    return params_.lambda * (smoothstep(u) + (y - kQuarter) * smoothstep_deriv(u) / a);
}

bool ScalarFlow::step_in_linear_zone(double y, double t) const {
    double dev = std::abs(y - kQuarter);
    double dev_end = dev * std::exp(params_.lambda * t);
    return std::max(dev, dev_end) <= params_.linear_zone_margin;
}

double ScalarFlow::rk4_value_step(double y, double h) const {
    double k1 = vector_field(y);
    double k2 = vector_field(y + 0.5 * h * k1);
    double k3 = vector_field(y + 0.5 * h * k2);
    double k4 = vector_field(y + h * k3);
    return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void ScalarFlow::rk4_var_step(double& y, double& j, double h) const {
    // Augmented system: y' = v(y), j' = v'(y) j.
    double k1 = vector_field(y);
    double l1 = vector_field_deriv(y) * j;
    double y2 = y + 0.5 * h * k1;
    double k2 = vector_field(y2);
    double l2 = vector_field_deriv(y2) * (j + 0.5 * h * l1);
    double y3 = y + 0.5 * h * k2;
    double k3 = vector_field(y3);
    double l3 = vector_field_deriv(y3) * (j + 0.5 * h * l2);
    double y4 = y + h * k3;
    double k4 = vector_field(y4);
    double l4 = vector_field_deriv(y4) * (j + h * l3);
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    j += h / 6.0 * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
}

double ScalarFlow::flow_with_derivative(double y, double t, double* deriv) const {
    if (y < -1e-12 || y > 1.0 + 1e-12) throw std::domain_error("flow: y outside [0,1]");
    y = std::clamp(y, 0.0, 1.0);
    double j = 1.0;
    if (t == 0.0 || y >= kHalf || y == kQuarter || y == 0.0) {
        // Stationary orbit; derivative is exp(t v'(y)).
        if (deriv) *deriv = std::exp(t * vector_field_deriv(y));
        return y;
    }

    double cur = y;
    double remaining = t;
    double sgn = (t > 0.0) ? 1.0 : -1.0;
    bool estimated = false;
    long n_steps = static_cast<long>(std::ceil(std::abs(t) / params_.ode_step));

    while (remaining != 0.0) {
        if (step_in_linear_zone(cur, remaining)) {
            double f = std::exp(params_.lambda * remaining);
            cur = kQuarter + f * (cur - kQuarter);
            j *= f;
            break;
        }
        double h = sgn * std::min(params_.ode_step, std::abs(remaining));
        if (step_in_linear_zone(cur, h)) {
            double f = std::exp(params_.lambda * h);
            cur = kQuarter + f * (cur - kQuarter);
            j *= f;
        } else {
            if (!estimated) {
                // One step-halving Richardson comparison as the error estimate.
                double full = rk4_value_step(cur, h);
                double half = rk4_value_step(rk4_value_step(cur, 0.5 * h), 0.5 * h);
                double per_step = std::abs(full - half) * (16.0 / 15.0);
                if (per_step * static_cast<double>(n_steps) > params_.ode_tol) {
                    throw numeric_error("flow: integration accuracy estimate exceeds ode_tol",
                                        {y, t});
                }
                estimated = true;
            }
            if (deriv) {
                rk4_var_step(cur, j, h);
            } else {
                cur = rk4_value_step(cur, h);
            }
        }
        remaining -= h;
    }
    cur = std::clamp(cur, 0.0, 1.0);
    if (deriv) *deriv = j;
    return cur;
}

double ScalarFlow::flow(double y, double t) const { return flow_with_derivative(y, t, nullptr); }

double ScalarFlow::g(double y) const {
    std::uint64_t key = bit_key(y);
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = g_cache_.find(key);
        if (it != g_cache_.end()) return it->second;
    }
    double v = flow(y, 1.0);
    std::lock_guard<std::mutex> lock(mu_);
    g_cache_.emplace(key, v);
    return v;
}

double ScalarFlow::g_inv(double y) const {
    std::uint64_t key = bit_key(y);
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = g_inv_cache_.find(key);
        if (it != g_inv_cache_.end()) return it->second;
    }
    double v = flow(y, -1.0);
    std::lock_guard<std::mutex> lock(mu_);
    g_inv_cache_.emplace(key, v);
    return v;
}

double ScalarFlow::g_prime(double y) const {
    std::uint64_t key = bit_key(y);
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = g_prime_cache_.find(key);
        if (it != g_prime_cache_.end()) return it->second;
    }
    double j = 1.0;
    flow_with_derivative(y, 1.0, &j);
    std::lock_guard<std::mutex> lock(mu_);
    g_prime_cache_.emplace(key, j);
    return j;
}

double ScalarFlow::blend_travel_time(double y0, double y1) const {
    // Time to flow from y0 to y1 inside the blend piece (0, a].
    // Substituting u = 1/y removes the second-order endpoint singularity:
    //   dt/du = a^2 / (lambda (1/u - 1/4) (3 - 2/(a u))).
    double a = blend_edge();
    double lam = params_.lambda;
    auto integrand = [a, lam](double u) {
        return a * a / (lam * (1.0 / u - kQuarter) * (3.0 - 2.0 / (a * u)));
    };
    double u0 = 1.0 / y0;
    double u1 = 1.0 / y1;
    double tol = 1e-13 * std::max(1.0, std::abs(u1 - u0) * 0.05);
    // dt = integrand(u) * (-du) along y; integrating over u from u0 to u1 picks
    // up the sign automatically.
    return -adaptive_simpson(integrand, u0, u1, tol);
}

double ScalarFlow::travel_time(double y0, double y1) const {
    double a = blend_edge();
    double t = 0.0;
    // Split the path [y0 -> y1] at the blend edge a.
    double lo = std::min(y0, y1);
    double hi = std::max(y0, y1);
    double sign = (y1 >= y0) ? 1.0 : -1.0;
    // Linear piece [max(lo,a), hi].
    if (hi > a) {
        double pl = std::max(lo, a);
        // dt = (1/lambda) ln((1/4-y_end)/(1/4-y_start)) for y_end>y_start.
        t += sign * std::log((kQuarter - hi) / (kQuarter - pl)) / params_.lambda;
    }
    // Blend piece [lo, min(hi,a)].
    if (lo < a) {
        double ph = std::min(hi, a);
        t += sign * blend_travel_time(lo, ph);
    }
    return t;
}

double ScalarFlow::t_of_y(double y) const {
    if (!(y > 0.0 && y < kQuarter)) throw std::domain_error("t_of_y: y outside (0,1/4)");
    return travel_time(0.125, y);
}

double ScalarFlow::y_of_t(double t) const {
    if (t == 0.0) return 0.125;
    std::uint64_t key = bit_key(t);
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = y_of_t_cache_.find(key);
        if (it != y_of_t_cache_.end()) return it->second;
    }
    double a = blend_edge();
    double ta = travel_time(0.125, a);  // time at which the orbit reaches the blend edge
    double result;
    if (t <= ta) {
        // Orbit still in the linear zone; exact.
        result = kQuarter - (kQuarter - a) * std::exp(params_.lambda * (t - ta));
    } else {
        // Monotone solve on the blend piece in u = 1/y, where the time
        // function is asymptotically affine.
        auto time_at_u = [&](double u) { return ta + blend_travel_time(a, 1.0 / u); };
        double ulo = 1.0 / a;
        double uhi = 2.0 / a;
        while (time_at_u(uhi) < t) {
            ulo = uhi;
            uhi *= 2.0;
            if (uhi > 1e300) throw numeric_error("y_of_t: bracket overflow", {t, 0.0});
        }
        // Bisection with a Newton polish.
        for (int i = 0; i < 200 && (uhi - ulo) > 1e-15 * uhi; ++i) {
            double um = 0.5 * (ulo + uhi);
            if (time_at_u(um) < t)
                ulo = um;
            else
                uhi = um;
        }
        double u = 0.5 * (ulo + uhi);
        for (int i = 0; i < 4; ++i) {
            double yy = 1.0 / u;
            double vf = -vector_field(yy);
            if (!(vf > 0.0)) break;
            double un = u - (time_at_u(u) - t) * vf / (yy * yy);
            if (un > ulo && un < uhi) u = un;
        }
        result = 1.0 / u;
    }
    std::lock_guard<std::mutex> lock(mu_);
    y_of_t_cache_.emplace(key, result);
    return result;
}

}  // namespace anosov
