#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <utility>

#include "asdc/core/plant.hpp"
#include "asdc/sim/error.hpp"
#include "asdc/sim/rk4.hpp"
#include "asdc/sim/signal.hpp"

namespace asdc::core {

/// Uniformly sampled vector-state trace; column k is the state at time k*dt.
struct StateTrace {
    double dt = 1e-3;
    Eigen::MatrixXd x;

    std::size_t samples() const { return static_cast<std::size_t>(x.cols()); }
};

namespace detail {

inline void check_streams(const sim::Signal& a, const sim::Signal& b, const char* who) {
    if (a.size() != b.size() || a.dt != b.dt)
        throw std::invalid_argument(std::string(who) + ": streams must share the clock");
    if (a.size() < 2) throw std::invalid_argument(std::string(who) + ": empty streams");
}

}  // namespace detail

struct NewObservation {
    StateTrace x_hat;
    sim::Signal d_new_hat;
};

/// Theorem-2 observer: integrate dx_hat = f(t, x_hat, theta_hat) + b u from 0
/// on the stream clock; d_new_hat is the algebraic residual y - c'x_hat.
inline NewObservation observe_new(const TransformedSystem& sys, const sim::Signal& u,
                                  const sim::Signal& y) {
    detail::check_streams(u, y, "observe_new");
    const auto n = static_cast<Eigen::Index>(sys.n);
    const std::size_t samples = u.size();

    NewObservation obs;
    obs.x_hat.dt = u.dt;
    obs.x_hat.x.resize(n, static_cast<Eigen::Index>(samples));
    obs.d_new_hat = sim::Signal{u.dt, u.start, {}};
    obs.d_new_hat.values.reserve(samples);

    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    sim::Rk4Workspace ws;
    for (std::size_t k = 0; k < samples; ++k) {
        obs.x_hat.x.col(static_cast<Eigen::Index>(k)) = x;
        obs.d_new_hat.values.push_back(y[k] - sys.c_out.dot(x));
        if (x.lpNorm<Eigen::Infinity>() > 1e6)
            throw sim::SimulationError("observer divergence", u.time(k), "observe_new");
        if (k + 1 == samples) break;
        sim::rk4_step_inplace(
            [&](double ts, const Eigen::VectorXd& xs, Eigen::VectorXd& dx) {
                sys.drift_hat(ts, xs, dx);
                dx += sys.b_in * u.at(ts);
            },
            u.time(k), u.dt, x, ws);
    }
    return obs;
}

struct PrimaryObservation {
    StateTrace x_p_hat;
    StateTrace x_s_hat;
};

/// Theorem-3 observer: integrate the primary state from u_p and recover the
/// secondary one algebraically as x_s_hat = x_new - x_p_hat.
inline PrimaryObservation observe_primary(const TransformedSystem& sys, const StateTrace& x_new,
                                          const sim::Signal& u_p) {
    if (x_new.samples() != u_p.size())
        throw std::invalid_argument("observe_primary: streams must share the clock");
    const auto n = static_cast<Eigen::Index>(sys.n);
    const std::size_t samples = u_p.size();

    PrimaryObservation obs;
    obs.x_p_hat.dt = u_p.dt;
    obs.x_p_hat.x.resize(n, static_cast<Eigen::Index>(samples));
    obs.x_s_hat.dt = u_p.dt;
    obs.x_s_hat.x.resize(n, static_cast<Eigen::Index>(samples));

    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    sim::Rk4Workspace ws;
    for (std::size_t k = 0; k < samples; ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        obs.x_p_hat.x.col(kk) = x;
        obs.x_s_hat.x.col(kk) = x_new.x.col(kk) - x;
        if (x.lpNorm<Eigen::Infinity>() > 1e6)
            throw sim::SimulationError("observer divergence", u_p.time(k), "observe_primary");
        if (k + 1 == samples) break;
        sim::rk4_step_inplace(
            [&](double ts, const Eigen::VectorXd& xs, Eigen::VectorXd& dx) {
                sys.drift_hat(ts, xs, dx);
                dx += sys.b_in * u_p.at(ts);
            },
            u_p.time(k), u_p.dt, x, ws);
    }
    return obs;
}

/// Which primary system the transformed model splits into: the matched-drift
/// form, or the linearized alternative with an arbitrary constant matrix.
enum class DecompositionMode { primary_drift, linearized };

struct DecompositionTraces {
    StateTrace x_new;
    StateTrace x_p;
    StateTrace x_s;
    sim::Signal y_p;
    sim::Signal y_s;
    double max_sum_residual_x = 0.0;  // max_t |x_p + x_s - x_new| (inf-norm)
    double max_sum_residual_y = 0.0;
    double max_state_norm = 0.0;  // max_t |x_new|, denominator for relative checks
    bool sum_property_ok = true;
};

/// Split the transformed system along the given input split, co-integrating
/// x_new, x_p and x_s on one clock so the additive identity is checked against
/// the same stage inputs.
inline DecompositionTraces decompose(const TransformedSystem& sys, const sim::Signal& u,
                                     const sim::Signal& u_p, const sim::Signal& d_new,
                                     DecompositionMode mode = DecompositionMode::primary_drift,
                                     const Eigen::MatrixXd* linearized_A = nullptr) {
    detail::check_streams(u, u_p, "decompose");
    detail::check_streams(u, d_new, "decompose");
    if (mode == DecompositionMode::linearized &&
        (linearized_A == nullptr || linearized_A->rows() != static_cast<Eigen::Index>(sys.n)))
        throw std::invalid_argument("decompose: linearized mode needs a square matrix A");

    const auto n = static_cast<Eigen::Index>(sys.n);
    const std::size_t samples = u.size();

    DecompositionTraces out;
    for (StateTrace* tr : {&out.x_new, &out.x_p, &out.x_s}) {
        tr->dt = u.dt;
        tr->x.resize(n, static_cast<Eigen::Index>(samples));
    }
    out.y_p = sim::Signal{u.dt, u.start, {}};
    out.y_s = sim::Signal{u.dt, u.start, {}};

    Eigen::VectorXd X = Eigen::VectorXd::Zero(3 * n);
    sim::Rk4Workspace ws;
    Eigen::VectorXd fp(n), fps(n);

    for (std::size_t k = 0; k < samples; ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        out.x_new.x.col(kk) = X.segment(0, n);
        out.x_p.x.col(kk) = X.segment(n, n);
        out.x_s.x.col(kk) = X.segment(2 * n, n);
        out.y_p.values.push_back(sys.c_out.dot(X.segment(n, n)) + d_new[k]);
        out.y_s.values.push_back(sys.c_out.dot(X.segment(2 * n, n)));

        const double res_x =
            (X.segment(n, n) + X.segment(2 * n, n) - X.segment(0, n)).lpNorm<Eigen::Infinity>();
        out.max_sum_residual_x = std::max(out.max_sum_residual_x, res_x);
        out.max_sum_residual_y = std::max(
            out.max_sum_residual_y,
            std::abs(sys.c_out.dot(X.segment(n, n) + X.segment(2 * n, n) - X.segment(0, n))));
        out.max_state_norm =
            std::max(out.max_state_norm, X.segment(0, n).lpNorm<Eigen::Infinity>());

        if (k + 1 == samples) break;
        sim::rk4_step_inplace(
            [&](double ts, const Eigen::VectorXd& Xs, Eigen::VectorXd& dX) {
                const double ut = u.at(ts);
                const double upt = u_p.at(ts);
                sys.drift_hat(ts, Xs.segment(0, n), fp);
                dX.segment(0, n) = fp + sys.b_in * ut;
                if (mode == DecompositionMode::primary_drift) {
                    sys.drift_hat(ts, Xs.segment(n, n), fp);
                    sys.drift_hat(ts, Xs.segment(n, n) + Xs.segment(2 * n, n), fps);
                    dX.segment(n, n) = fp + sys.b_in * upt;
                    dX.segment(2 * n, n) = fps - fp + sys.b_in * (ut - upt);
                } else {
                    sys.drift_hat(ts, Xs.segment(n, n) + Xs.segment(2 * n, n), fps);
                    dX.segment(n, n) = (*linearized_A) * Xs.segment(n, n) + sys.b_in * upt;
                    dX.segment(2 * n, n) = fps - (*linearized_A) * Xs.segment(n, n) +
                                           sys.b_in * (ut - upt);
                }
            },
            u.time(k), u.dt, X, ws);
    }

    out.sum_property_ok =
        out.max_sum_residual_x <= 1e-8 * (1.0 + out.max_state_norm) &&
        out.max_sum_residual_y <= 1e-8 * (1.0 + out.max_state_norm);
    return out;
}

}  // namespace asdc::core
