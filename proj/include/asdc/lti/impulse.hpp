#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "asdc/lti/state_space.hpp"
#include "asdc/lti/transfer_function.hpp"
#include "asdc/sim/rk4.hpp"

namespace asdc::lti {

/// Sampled impulse response g(k*dt) plus the weight of the Dirac component
/// carried by biproper functions.
struct ImpulseTrace {
    double dt = 1e-3;
    double direct_delta_weight = 0.0;
    std::vector<double> samples;
};

namespace detail {

/// Decay rate of the slowest pole (positive number), infinity for constants.
inline double slowest_decay_rate(const TransferFunction& tf) {
    double rate = std::numeric_limits<double>::infinity();
    for (const auto& p : tf.poles()) rate = std::min(rate, -p.real());
    return rate;
}

}  // namespace detail

/// 14 time constants of the slowest pole (comfortably inside the default tail
/// tolerance); short fallback for pole-free functions, whose response is
/// purely impulsive.
inline double default_l1_horizon(const TransferFunction& tf) {
    const double rate = detail::slowest_decay_rate(tf);
    if (!std::isfinite(rate) || rate <= 0.0) return 1e-2;
    return 14.0 / rate;
}

/// Zero-state response of realize(tf) to a unit impulse, integrated with the
/// engine's RK4 (the strictly proper part starts from x(0) = b; the direct
/// term is reported as a Dirac weight). Rejects unstable and improper input.
inline ImpulseTrace impulse_response(const TransferFunction& tf, double dt, double horizon) {
    if (!(dt > 0.0) || !(horizon > 0.0))
        throw std::invalid_argument("impulse_response: dt and horizon must be positive");
    if (!tf.is_proper()) throw std::invalid_argument("impulse_response: improper transfer function");
    if (!stability_check(tf))
        throw std::invalid_argument("impulse_response: unstable transfer function");

    const StateSpaceModel ss = realize(tf);
    const auto n_steps = static_cast<std::size_t>(std::llround(horizon / dt));

    ImpulseTrace trace;
    trace.dt = dt;
    trace.direct_delta_weight = ss.d_thru;
    trace.samples.reserve(n_steps + 1);

    Eigen::VectorXd x = ss.b_in;
    sim::Rk4Workspace ws;
    const auto deriv = [&ss](double, const Eigen::VectorXd& xs, Eigen::VectorXd& dx) {
        dx = ss.A * xs;
    };
    trace.samples.push_back(ss.order() > 0 ? ss.c_out.dot(x) : 0.0);
    for (std::size_t k = 0; k < n_steps; ++k) {
        if (ss.order() > 0) {
            sim::rk4_step_inplace(deriv, static_cast<double>(k) * dt, dt, x, ws);
            trace.samples.push_back(ss.c_out.dot(x));
        } else {
            trace.samples.push_back(0.0);
        }
    }
    return trace;
}

namespace detail {

inline double trapezoid_abs(const std::vector<double>& g, double dt) {
    if (g.size() < 2) return 0.0;
    double acc = 0.5 * (std::abs(g.front()) + std::abs(g.back()));
    for (std::size_t i = 1; i + 1 < g.size(); ++i) acc += std::abs(g[i]);
    return acc * dt;
}

/// Dominant-pole envelope bound on the truncated tail of the |g| integral.
inline double tail_bound(const TransferFunction& tf, double last_sample) {
    const double rate = slowest_decay_rate(tf);
    if (!std::isfinite(rate) || rate <= 0.0) return 0.0;
    return std::abs(last_sample) / rate;
}

}  // namespace detail

/// L1 gain per the integral-of-|impulse-response| definition: |delta weight|
/// plus composite trapezoidal quadrature of |g| over [0, horizon]. Throws if
/// the truncated-tail bound exceeds tail_tol, suggesting a longer horizon.
inline double l1_gain(const TransferFunction& tf, double dt, double horizon,
                      double tail_tol = 1e-4) {
    if (!tf.is_proper()) throw std::invalid_argument("l1_gain: improper transfer function");
    if (!stability_check(tf))
        throw std::invalid_argument("l1_gain: unstable transfer function, L1 gain undefined");
    if (tf.is_zero()) return 0.0;

    const ImpulseTrace trace = impulse_response(tf, dt, horizon);
    const double tail = detail::tail_bound(tf, trace.samples.back());
    if (tail > tail_tol) {
        const double rate = detail::slowest_decay_rate(tf);
        const double suggested = horizon + std::log(tail / tail_tol) / rate;
        throw std::invalid_argument("l1_gain: horizon " + std::to_string(horizon) +
                                    " too short for tail tolerance, try >= " +
                                    std::to_string(suggested));
    }
    return std::abs(trace.direct_delta_weight) + detail::trapezoid_abs(trace.samples, dt);
}

inline double l1_gain(const TransferFunction& tf, double dt = 1e-3) {
    return l1_gain(tf, dt, default_l1_horizon(tf));
}

/// || C(s) (H(s) e^{-tau s} - 1) ||_L1 computed directly from the combined
/// impulse response g(t) = g_CH(t - tau) - g_C(t). tau must sit on the dt
/// grid so the shift is exact.
inline double channel_l1_gain(const TransferFunction& C, const TransferFunction& H, double tau,
                              double dt = 1e-3, double horizon = 0.0) {
    if (tau < 0.0) throw std::invalid_argument("channel_l1_gain: negative delay");
    const TransferFunction CH = series(C, H);
    if (!stability_check(CH) || !stability_check(C))
        throw std::invalid_argument("channel_l1_gain: unstable factor");

    const auto shift = static_cast<std::size_t>(std::llround(tau / dt));
    if (std::abs(static_cast<double>(shift) * dt - tau) > 1e-9 * std::max(1.0, tau))
        throw std::invalid_argument("channel_l1_gain: tau must be a multiple of dt");

    if (horizon <= 0.0) horizon = std::max(default_l1_horizon(CH), default_l1_horizon(C)) + tau;
    const ImpulseTrace gch = impulse_response(CH, dt, horizon);
    const ImpulseTrace gc = impulse_response(C, dt, horizon);

    std::vector<double> g(gc.samples.size(), 0.0);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double a = (k >= shift) ? gch.samples[k - shift] : 0.0;
        g[k] = a - gc.samples[k];
    }
    double deltas = (shift == 0)
                        ? std::abs(gch.direct_delta_weight - gc.direct_delta_weight)
                        : std::abs(gch.direct_delta_weight) + std::abs(gc.direct_delta_weight);
    return deltas + detail::trapezoid_abs(g, dt);
}

}  // namespace asdc::lti
