#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "asdc/lti/impulse.hpp"
#include "asdc/lti/state_space.hpp"
#include "asdc/lti/transfer_function.hpp"
#include "asdc/sim/block.hpp"
#include "asdc/sim/rk4.hpp"
#include "asdc/sim/saturation.hpp"
#include "asdc/sim/signal.hpp"

namespace asdc::core {

/// Bound on the channel discrepancy: sup|xi| <= (eps_H + tau * eps_tau) * a.
inline double xi_bound(double eps_H, double eps_tau, double tau, double a) {
    if (eps_H < 0.0 || eps_tau < 0.0 || tau < 0.0 || a < 0.0)
        throw std::invalid_argument("xi_bound: arguments must be nonnegative");
    return (eps_H + tau * eps_tau) * a;
}

/// Saturation level plus the realized shaping filter C(s).
struct InputChain {
    lti::TransferFunction C;
    double a = 1.0;
    lti::StateSpaceModel css;
};

inline InputChain make_input_chain(const lti::TransferFunction& C, double a) {
    if (!(a > 0.0)) throw std::invalid_argument("input chain: saturation level must be positive");
    if (!C.is_proper())
        throw std::invalid_argument("input chain: C(s) must be proper");
    if (!lti::stability_check(C))
        throw std::invalid_argument("input chain: C(s) must be stable");
    if (std::abs(C.dc_gain() - 1.0) > 1e-9)
        throw std::invalid_argument("input chain: C(s) must have C(0) = 1");
    if (!lti::is_minimum_phase(C))
        throw std::invalid_argument("input chain: C(s) must be minimum phase");
    return {C, a, lti::realize(C)};
}

/// Block mapping v to u through the saturation and C(s):
/// dz = A_z z + b_z sat_a(v), u = c_z'z + d_z sat_a(v).
inline sim::DynamicBlock build_input_chain(const lti::TransferFunction& C, double a) {
    const InputChain chain = make_input_chain(C, a);
    sim::DynamicBlock blk;
    blk.name = "input_chain";
    blk.x0 = Eigen::VectorXd::Zero(chain.css.order());
    blk.n_inputs = 1;
    blk.feedthrough = true;  // saturation acts on the instantaneous input
    blk.derivative = [ss = chain.css, a](double, const Eigen::VectorXd& x,
                                         const Eigen::VectorXd& in, Eigen::VectorXd& dx) {
        dx = ss.A * x + ss.b_in * sim::saturate(in(0), a);
    };
    blk.output = [ss = chain.css, a](double, const Eigen::VectorXd& x, const Eigen::VectorXd& in) {
        const double s = sim::saturate(in(0), a);
        return (ss.order() > 0 ? ss.c_out.dot(x) : 0.0) + ss.d_thru * s;
    };
    return blk;
}

/// Pass u through H(s) e^{-tau s} offline: returns (u_xi, xi = u_xi - u).
/// The delayed input uses zero pre-history before the signal starts.
inline std::pair<sim::Signal, sim::Signal> apply_channel(const sim::Signal& u,
                                                         const lti::TransferFunction& H,
                                                         double tau) {
    if (tau < 0.0) throw std::invalid_argument("apply_channel: negative delay");
    if (!H.is_proper() || !lti::stability_check(H))
        throw std::invalid_argument("apply_channel: H(s) must be stable and proper");

    const lti::StateSpaceModel hss = lti::realize(H);
    const auto u_del = [&u, tau](double t) {
        const double tq = t - tau;
        return tq < u.start ? 0.0 : u.at(tq);
    };

    sim::Signal u_xi{u.dt, u.start, {}};
    u_xi.values.reserve(u.size());
    Eigen::VectorXd x = Eigen::VectorXd::Zero(hss.order());
    sim::Rk4Workspace ws;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double t = u.time(k);
        u_xi.values.push_back((hss.order() > 0 ? hss.c_out.dot(x) : 0.0) +
                              hss.d_thru * u_del(t));
        if (k + 1 < u.size() && hss.order() > 0) {
            sim::rk4_step_inplace(
                [&](double ts, const Eigen::VectorXd& xs, Eigen::VectorXd& dx) {
                    dx = hss.A * xs + hss.b_in * u_del(ts);
                },
                t, u.dt, x, ws);
        }
    }

    sim::Signal xi = u_xi;
    for (std::size_t k = 0; k < xi.size(); ++k) xi.values[k] -= u.values[k];
    return {std::move(u_xi), std::move(xi)};
}

}  // namespace asdc::core
