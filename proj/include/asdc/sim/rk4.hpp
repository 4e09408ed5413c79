#pragma once

#include <Eigen/Dense>
#include <functional>

#include "asdc/sim/block.hpp"
#include "asdc/sim/error.hpp"

namespace asdc::sim {

/// Scratch space for one RK4 state vector, reusable across steps.
struct Rk4Workspace {
    Eigen::VectorXd k1, k2, k3, k4, tmp;

    void resize(Eigen::Index n) {
        k1.resize(n);
        k2.resize(n);
        k3.resize(n);
        k4.resize(n);
        tmp.resize(n);
    }
};

/// One classical 4th-order Runge-Kutta step of x' = f(t, x), in place.
/// f(t, x, dx) fills dx.
template <typename Deriv>
void rk4_step_inplace(Deriv&& f, double t, double dt, Eigen::VectorXd& x, Rk4Workspace& ws) {
    ws.resize(x.size());
    f(t, x, ws.k1);
    ws.tmp = x + (0.5 * dt) * ws.k1;
    f(t + 0.5 * dt, ws.tmp, ws.k2);
    ws.tmp = x + (0.5 * dt) * ws.k2;
    f(t + 0.5 * dt, ws.tmp, ws.k3);
    ws.tmp = x + dt * ws.k3;
    f(t + dt, ws.tmp, ws.k4);
    x += (dt / 6.0) * (ws.k1 + 2.0 * ws.k2 + 2.0 * ws.k3 + ws.k4);
}

/// Samples a block's inputs at a stage time.
using InputSampler = std::function<void(double t, Eigen::VectorXd& u)>;

/// Advance one block by a single RK4 step. The sampler must provide inputs at
/// t, t + dt/2 and t + dt. Aborts on a non-finite state component.
inline Eigen::VectorXd rk4_step(const DynamicBlock& block, const Eigen::VectorXd& state, double t,
                                double dt, const InputSampler& inputs) {
    Eigen::VectorXd x = state;
    Eigen::VectorXd u(block.n_inputs);
    Rk4Workspace ws;
    rk4_step_inplace(
        [&](double ts, const Eigen::VectorXd& xs, Eigen::VectorXd& dx) {
            if (block.n_inputs > 0) inputs(ts, u);
            block.derivative(ts, xs, u, dx);
        },
        t, dt, x, ws);
    if (!x.allFinite())
        throw SimulationError("non-finite state component", t + dt, block.name);
    return x;
}

}  // namespace asdc::sim
