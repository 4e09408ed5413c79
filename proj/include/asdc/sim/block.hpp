#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

#include "asdc/lti/state_space.hpp"

namespace asdc::sim {

/// A continuous-time block with a derivative map and a scalar output map.
/// `feedthrough` declares that the output map reads the instantaneous wired
/// inputs; the network rejects algebraic loops through such blocks.
struct DynamicBlock {
    std::string name;
    Eigen::VectorXd x0;
    std::size_t n_inputs = 0;
    bool feedthrough = false;

    std::function<void(double t, const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                       Eigen::VectorXd& dx)>
        derivative;
    std::function<double(double t, const Eigen::VectorXd& x, const Eigen::VectorXd& u)> output;

    std::size_t state_dim() const { return static_cast<std::size_t>(x0.size()); }
};

/// Block realizing a state-space filter driven by input port 0.
inline DynamicBlock lti_block(std::string name, const lti::StateSpaceModel& ss) {
    DynamicBlock blk;
    blk.name = std::move(name);
    blk.x0 = Eigen::VectorXd::Zero(ss.order());
    blk.n_inputs = 1;
    blk.feedthrough = ss.d_thru != 0.0;
    blk.derivative = [ss](double, const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                          Eigen::VectorXd& dx) { dx = ss.A * x + ss.b_in * u(0); };
    blk.output = [ss](double, const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
        double y = ss.order() > 0 ? ss.c_out.dot(x) : 0.0;
        return y + ss.d_thru * u(0);
    };
    return blk;
}

/// Stateless block: output = f(t, inputs).
inline DynamicBlock memoryless_block(std::string name, std::size_t n_inputs,
                                     std::function<double(double, const Eigen::VectorXd&)> f) {
    DynamicBlock blk;
    blk.name = std::move(name);
    blk.x0 = Eigen::VectorXd(0);
    blk.n_inputs = n_inputs;
    blk.feedthrough = true;
    blk.output = [f = std::move(f)](double t, const Eigen::VectorXd&, const Eigen::VectorXd& u) {
        return f(t, u);
    };
    return blk;
}

}  // namespace asdc::sim
