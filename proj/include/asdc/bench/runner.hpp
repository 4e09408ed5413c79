#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "asdc/bench/metrics.hpp"
#include "asdc/bench/scenario.hpp"
#include "asdc/control/reference.hpp"
#include "asdc/control/stack.hpp"
#include "asdc/sim/network.hpp"
#include "asdc/sim/noise.hpp"

namespace asdc::bench {

struct ScenarioResult {
    std::string scenario;
    std::string reference;
    int case_tag = 0;
    sim::SimConfig config;
    std::map<std::string, sim::Signal> traces;
    Metrics metrics;
    std::vector<std::string> invariant_violations;
    bool invariants_ok = true;
};

namespace detail {

inline Eigen::MatrixXd drift_jacobian_at_zero(const core::TransformedSystem& sys) {
    const auto n = static_cast<Eigen::Index>(sys.n);
    Eigen::MatrixXd J(n, n);
    Eigen::VectorXd fp(n), fm(n);
    const double h = 1e-6;
    for (Eigen::Index j = 0; j < n; ++j) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
        e(j) = h;
        sys.drift_hat(0.0, e, fp);
        sys.drift_hat(0.0, -e, fm);
        J.col(j) = (fp - fm) / (2.0 * h);
    }
    return J;
}

}  // namespace detail

/// Full closed-loop co-simulation: true plant + channel + integrated
/// controller, with the shadow ground-truth systems riding inside the
/// controller's clock for the invariant checks.
inline ScenarioResult run_scenario(const Scenario& sc, const control::ReferenceSignal& ref) {
    const core::TransformedSystem model = core::transform(sc.plant, sc.theta_hat);

    control::StackConfig stack_cfg;
    stack_cfg.model = model;
    stack_cfg.C = sc.C;
    stack_cfg.a = sc.a;
    stack_cfg.law = sc.law;
    stack_cfg.diff_time_constant = 0.1;
    stack_cfg.with_shadows = true;
    stack_cfg.decomposition = sc.decomposition;
    if (sc.decomposition == core::DecompositionMode::linearized)
        stack_cfg.linearized_A = sc.A_hat ? *sc.A_hat : detail::drift_jacobian_at_zero(model);
    if (sc.law == control::LawKind::twocart) {
        if (!sc.A_hat) throw std::invalid_argument("run_scenario: two-cart needs the model matrix");
        stack_cfg.comp =
            control::make_twocart_compensator(*sc.A_hat, model.b_in, model.c_out, sc.C, sc.Q);
    }
    auto stack = std::make_shared<control::ControllerStack>(stack_cfg);

    sim::Network net;
    const bool with_noise = sc.noise_on && sc.plant.noise_gain.size() > 0 &&
                            sc.plant.noise_gain.lpNorm<Eigen::Infinity>() > 0.0;

    // true plant, inputs [u_xi, zeta]
    sim::DynamicBlock plant_blk;
    plant_blk.name = "plant";
    plant_blk.x0 = sc.plant.x0;
    plant_blk.n_inputs = 2;
    plant_blk.derivative = [p = sc.plant](double t, const Eigen::VectorXd& x,
                                          const Eigen::VectorXd& in, Eigen::VectorXd& dx) {
        p.drift(t, x, p.theta_true(t), dx);
        dx += p.b_in * in(0) + p.disturbance(t);
        if (p.noise_gain.size() > 0) dx += p.noise_gain * in(1);
    };
    plant_blk.output = [c = sc.plant.c_out](double, const Eigen::VectorXd& x,
                                            const Eigen::VectorXd&) { return c.dot(x); };
    const sim::BlockId plant = net.add_block(std::move(plant_blk));

    // unmodeled channel H(s), fed by the (delayed) applied input
    sim::BlockId chan;
    if (sc.plant.channel_H.is_constant()) {
        const double k = sc.plant.channel_H.dc_gain();
        chan = net.add_block(sim::memoryless_block(
            "channel", 1, [k](double, const Eigen::VectorXd& in) { return k * in(0); }));
    } else {
        chan = net.add_block(sim::lti_block("channel", lti::realize(sc.plant.channel_H)));
    }

    const sim::BufferId u_buf = net.add_buffer("u", sc.plant.delay, 0.0);
    net.wire_buffer(chan, 0, u_buf);
    net.wire_output(plant, 0, chan);

    const sim::HeldId h_eps = net.add_held("eps", 0.0);
    if (with_noise) {
        sim::DynamicBlock noise_blk;
        noise_blk.name = "noise";
        noise_blk.x0 = Eigen::VectorXd::Zero(1);
        noise_blk.n_inputs = 1;
        noise_blk.derivative = [](double, const Eigen::VectorXd& x, const Eigen::VectorXd& in,
                                  Eigen::VectorXd& dx) { dx(0) = 0.1 * (in(0) - x(0)); };
        noise_blk.output = [](double, const Eigen::VectorXd& x, const Eigen::VectorXd&) {
            return x(0);
        };
        const sim::BlockId noise = net.add_block(std::move(noise_blk));
        net.wire_held(noise, 0, h_eps);
        net.wire_output(plant, 1, noise);
        net.probe_output("zeta", noise);
    } else {
        net.wire_signal(plant, 1, [](double) { return 0.0; });
        net.add_probe("zeta", [](const sim::NetworkView&) { return 0.0; });
    }

    // controller pass: discrete values at the grid time, then the held update
    auto stash = std::make_shared<control::ControllerStack::Output>();
    auto y_now = std::make_shared<double>(0.0);
    auto rng = std::make_shared<sim::GaussianSampler>(sc.config.rng_seed);
    const std::size_t n_steps = sc.config.step_count();
    const double dt = sc.config.dt;
    const double eps_scale = std::sqrt(1.0 / dt);

    net.set_prestep([=, c = sc.plant.c_out](sim::NetworkView& view, double t, std::size_t k) {
        if (with_noise) view.set_held(h_eps, rng->next() * eps_scale);
        *y_now = c.dot(view.state(plant));
        *stash = stack->step_begin(*y_now, ref.r(t), ref.r_dot(t), t, dt);
        if (k == 0) view.push_buffer(u_buf, 0.0, stash->u);
        if (k < n_steps) {
            const double u_next = stack->advance(*stash, t, dt);
            view.push_buffer(u_buf, t + dt, u_next);
        }
    });

    net.add_probe("y", [y_now](const sim::NetworkView&) { return *y_now; });
    net.add_probe("r", [ref](const sim::NetworkView& v) { return ref.r(v.t()); });
    net.add_probe("u", [stash](const sim::NetworkView&) { return stash->u; });
    net.add_probe("u_p", [stash](const sim::NetworkView&) { return stash->u_p; });
    net.add_probe("v", [stash](const sim::NetworkView&) { return stash->v; });
    net.add_probe("d_new_hat", [stash](const sim::NetworkView&) { return stash->d_new_hat; });
    net.add_probe("u_xi", [chan](const sim::NetworkView& v) { return v.output(chan); });
    net.add_probe("xi",
                  [chan, stash](const sim::NetworkView& v) { return v.output(chan) - stash->u; });
    net.add_probe("y_s", [stash](const sim::NetworkView&) { return stash->y_s; });
    net.add_probe("sat_active", [stash, a = sc.a](const sim::NetworkView&) {
        return std::abs(stash->v) > a ? 1.0 : 0.0;
    });
    for (auto [name, field] : std::initializer_list<
             std::pair<const char*, double control::ControllerStack::Output::*>>{
             {"e_obs_new", &control::ControllerStack::Output::e_obs_new},
             {"e_obs_p", &control::ControllerStack::Output::e_obs_p},
             {"e_sum_x", &control::ControllerStack::Output::e_sum_x},
             {"e_sum_y", &control::ControllerStack::Output::e_sum_y},
             {"x_new_norm", &control::ControllerStack::Output::x_new_norm},
             {"e_split_z", &control::ControllerStack::Output::e_split_z},
             {"e_split_u", &control::ControllerStack::Output::e_split_u},
             {"z_norm", &control::ControllerStack::Output::z_norm}}) {
        net.add_probe(name, [stash, field](const sim::NetworkView&) { return (*stash).*field; });
    }

    ScenarioResult result;
    result.scenario = sc.name;
    result.reference = ref.name;
    result.case_tag = sc.case_tag;
    result.config = sc.config;
    result.traces = net.run(sc.config);
    result.metrics = compute_metrics(result.traces, sc.settle_fraction);

    const Metrics& m = result.metrics;
    const auto flag = [&result](bool ok, const std::string& what) {
        if (!ok) {
            result.invariant_violations.push_back(what);
            result.invariants_ok = false;
        }
    };
    flag(m.max_obs_residual_new <= 1e-6, "observer exactness (x_new)");
    flag(m.max_obs_residual_p <= 1e-6, "observer exactness (x_p)");
    flag(m.sum_residual_x_rel <= 1e-8, "additive sum property (state)");
    flag(m.sum_residual_y_rel <= 1e-8, "additive sum property (output)");
    flag(m.split_residual_z_rel <= 1e-10, "saturation split (state)");
    flag(m.split_residual_u_rel <= 1e-10, "saturation split (output)");
    flag(m.sup_xi <= sc.xi_bound() * 1.02, "xi bound");
    return result;
}

}  // namespace asdc::bench
