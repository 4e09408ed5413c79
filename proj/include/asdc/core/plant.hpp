#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "asdc/lti/transfer_function.hpp"

namespace asdc::core {

using DriftFn = std::function<void(double t, const Eigen::VectorXd& x, const Eigen::VectorXd& theta,
                                   Eigen::VectorXd& dx)>;

/// The true system dx = f(t, x, theta(t)) + b u_xi + d(t), y = c'x, where the
/// control reaches the plant through the unknown channel H(s) e^{-tau s}. The
/// disturbance splits into a deterministic part and a colored-noise injection.
struct UncertainPlant {
    std::size_t n = 0;
    DriftFn drift;
    Eigen::VectorXd b_in;
    Eigen::VectorXd c_out;
    Eigen::VectorXd x0;
    std::function<Eigen::VectorXd(double)> theta_true;
    std::function<Eigen::VectorXd(double)> disturbance;
    Eigen::VectorXd noise_gain;
    lti::TransferFunction channel_H = lti::TransferFunction::constant(1.0);
    double delay = 0.0;

    void validate() const {
        if (n == 0 || !drift || !theta_true)
            throw std::invalid_argument("UncertainPlant: incomplete definition");
        const auto ni = static_cast<Eigen::Index>(n);
        if (b_in.size() != ni || c_out.size() != ni || x0.size() != ni)
            throw std::invalid_argument("UncertainPlant: inconsistent dimensions");
        if (noise_gain.size() != 0 && noise_gain.size() != ni)
            throw std::invalid_argument("UncertainPlant: noise gain dimension");
        if (delay < 0.0) throw std::invalid_argument("UncertainPlant: negative delay");
        if (!channel_H.is_proper() || !lti::stability_check(channel_H))
            throw std::invalid_argument("UncertainPlant: H(s) must be stable and proper");
        if (std::abs(channel_H.dc_gain() - 1.0) > 1e-9)
            throw std::invalid_argument("UncertainPlant: H(0) must be 1");
        // f(t, 0, theta) must vanish identically
        Eigen::VectorXd dx(ni);
        for (double t : {0.0, 1.0, 7.3}) {
            drift(t, Eigen::VectorXd::Zero(ni), theta_true(t), dx);
            if (dx.lpNorm<Eigen::Infinity>() > 1e-12)
                throw std::invalid_argument("UncertainPlant: f(t, 0, theta) != 0");
        }
    }
};

/// Theorem-1 uncertainty-free model: dx_new = f(t, x_new, theta_hat) + b u,
/// y = c'x_new + d_new, with x_new(0) = 0 and d_new the output residual.
struct TransformedSystem {
    std::size_t n = 0;
    std::function<void(double t, const Eigen::VectorXd& x, Eigen::VectorXd& dx)> drift_hat;
    Eigen::VectorXd b_in;
    Eigen::VectorXd c_out;
    Eigen::VectorXd theta_hat;
};

inline TransformedSystem transform(const UncertainPlant& plant, const Eigen::VectorXd& theta_hat) {
    plant.validate();
    TransformedSystem sys;
    sys.n = plant.n;
    sys.b_in = plant.b_in;
    sys.c_out = plant.c_out;
    sys.theta_hat = theta_hat;
    sys.drift_hat = [drift = plant.drift, theta_hat](double t, const Eigen::VectorXd& x,
                                                     Eigen::VectorXd& dx) {
        drift(t, x, theta_hat, dx);
    };
    return sys;
}

}  // namespace asdc::core
