#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "asdc/lti/state_space.hpp"
#include "asdc/lti/transfer_function.hpp"

namespace asdc::control {

/// Feedforward inversion pair for the two-cart benchmark, both driven by
/// w = r - d_new_hat:
///   u_p from Q(s) G_yu(s)^-1, v from Q(s) C(s)^-1 G_yu(s)^-1.
struct TwoCartCompensator {
    lti::TransferFunction G_yu;
    lti::TransferFunction comp_u;
    lti::TransferFunction comp_v;
    lti::StateSpaceModel comp_u_ss;
    lti::StateSpaceModel comp_v_ss;
};

inline TwoCartCompensator make_twocart_compensator(const Eigen::MatrixXd& A_hat,
                                                   const Eigen::VectorXd& b,
                                                   const Eigen::VectorXd& c,
                                                   const lti::TransferFunction& C,
                                                   const lti::TransferFunction& Q) {
    TwoCartCompensator comp;
    comp.G_yu = lti::ss_to_tf(lti::StateSpaceModel{A_hat, b, c, 0.0});
    if (!lti::is_minimum_phase(comp.G_yu))
        throw std::invalid_argument(
            "two-cart compensator: G_yu of the model is not minimum phase");
    comp.comp_u = lti::proper_inverse(comp.G_yu, Q);
    comp.comp_v = lti::proper_inverse(lti::series(C, comp.G_yu), Q);
    comp.comp_u_ss = lti::realize(comp.comp_u);
    comp.comp_v_ss = lti::realize(comp.comp_v);
    return comp;
}

}  // namespace asdc::control
