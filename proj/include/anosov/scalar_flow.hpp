#pragma once

#include <mutex>
#include <unordered_map>

#include "anosov/types.hpp"

namespace anosov {

// Parameters of the interval flow whose time-one map is g.
//
// The velocity field on [0,1] is
//   v(y) = lambda*(y-1/4)*psi(y)        on [0,1/4],
//   v(y) = -v(1/2-y)                    on (1/4,1/2),
//   v(y) = 0                            on [1/2,1],
// with psi == 1 on [1/4-linear_zone_margin, 1/4] and a cubic smoothstep
// blend psi(y) = S(y/a), a = 1/4-linear_zone_margin, below it.  Inside the
// linear zone the time-t map is exactly y -> 1/4 + e^{lambda t}(y-1/4).
struct FlowParams {
    double lambda = std::log(2.0);
    double delta = 1.0 / 32.0;
    double linear_zone_margin = 4.0 / 32.0;  // 4*delta by default
    double ode_step = 1e-3;
    double ode_tol = 1e-9;

    void validate() const;
};

class ScalarFlow {
  public:
    explicit ScalarFlow(FlowParams params);

    const FlowParams& params() const { return params_; }
    double lambda() const { return params_.lambda; }
    double delta() const { return params_.delta; }
    double exp_lambda() const { return exp_lambda_; }
    double exp_neg_lambda() const { return exp_neg_lambda_; }

    // Flow velocity; zero exactly on {0,1/4} u [1/2,1].
    double vector_field(double y) const;
    double vector_field_deriv(double y) const;

    // g^t(y).  Closed form while the orbit stays in the linear zone,
    // otherwise fixed-step RK4 with a step-halving accuracy estimate.
    double flow(double y, double t) const;

    // Time-one map, its inverse and derivative (memoized per input).
    double g(double y) const;
    double g_inv(double y) const;
    double g_prime(double y) const;

    // y(t) = g^t(1/8) and its inverse on (0,1/4).
    double y_of_t(double t) const;
    double t_of_y(double y) const;

  private:
    double blend_edge() const { return 0.25 - params_.linear_zone_margin; }
    bool step_in_linear_zone(double y, double t) const;
    double rk4_value_step(double y, double h) const;
    void rk4_var_step(double& y, double& j, double h) const;
    double flow_with_derivative(double y, double t, double* deriv) const;

    // Signed time to flow from y0 to y1, both in (0,1/4).
    double travel_time(double y0, double y1) const;
    double blend_travel_time(double y0, double y1) const;

    FlowParams params_;
    double exp_lambda_;
    double exp_neg_lambda_;

    mutable std::mutex mu_;
    mutable std::unordered_map<std::uint64_t, double> g_cache_;
    mutable std::unordered_map<std::uint64_t, double> g_inv_cache_;
    mutable std::unordered_map<std::uint64_t, double> g_prime_cache_;
    mutable std::unordered_map<std::uint64_t, double> y_of_t_cache_;
};

}  // namespace anosov
