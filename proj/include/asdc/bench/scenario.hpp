#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "asdc/control/compensator.hpp"
#include "asdc/control/stack.hpp"
#include "asdc/core/input_chain.hpp"
#include "asdc/core/plant.hpp"
#include "asdc/lti/impulse.hpp"
#include "asdc/lti/lyapunov.hpp"
#include "asdc/sim/config.hpp"

namespace asdc::bench {

/// Two-cart drift matrix over theta = [m1 m2 k1 k2 b1 b2]. The (4,3) damping
/// entry is b2/m2 as printed; corrected_coupling substitutes the physical
/// coupling damper b1/m2 instead.
inline Eigen::MatrixXd twocart_A(const Eigen::VectorXd& theta, bool corrected_coupling = false) {
    if (theta.size() != 6) throw std::invalid_argument("twocart_A: theta must have 6 entries");
    const double m1 = theta(0), m2 = theta(1), k1 = theta(2), k2 = theta(3), b1 = theta(4),
                 b2 = theta(5);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(4, 4);
    A(0, 2) = 1.0;
    A(1, 3) = 1.0;
    A(2, 0) = -k1 / m1;
    A(2, 1) = k1 / m1;
    A(2, 2) = -b1 / m1;
    A(2, 3) = b1 / m1;
    A(3, 0) = k1 / m2;
    A(3, 1) = -(k1 + k2) / m2;
    A(3, 2) = (corrected_coupling ? b1 : b2) / m2;
    A(3, 3) = -(b1 + b2) / m2;
    return A;
}

struct Scenario {
    std::string name;
    int case_tag = 0;
    core::UncertainPlant plant;
    Eigen::VectorXd theta_hat;
    lti::TransferFunction C{{1.0}, {2.0, 1.0}};
    double a = 5.0;
    control::LawKind law = control::LawKind::rohrs;
    lti::TransferFunction Q = lti::TransferFunction::constant(1.0);
    bool noise_on = false;
    bool corrected_coupling = false;
    core::DecompositionMode decomposition = core::DecompositionMode::primary_drift;
    sim::SimConfig config;
    double settle_fraction = 2.0 / 3.0;
    double eps_H = 0.0;
    double eps_tau = 0.0;

    // drift matrices of the linear benchmarks, for assumption checks and the
    // ISS gain certificate
    std::optional<Eigen::MatrixXd> A_true;
    std::optional<Eigen::MatrixXd> A_hat;

    double xi_bound() const { return core::xi_bound(eps_H, eps_tau, plant.delay, a); }
};

struct ScenarioOverrides {
    std::optional<double> dt;
    std::optional<double> horizon;
    std::optional<std::uint64_t> seed;
    std::optional<double> a;
    std::optional<Eigen::VectorXd> theta_hat;
    std::optional<bool> noise;
    std::optional<bool> corrected_coupling;
    std::optional<core::DecompositionMode> decomposition;
};

namespace detail {

inline void finalize(Scenario& s) {
    s.plant.validate();
    core::make_input_chain(s.C, s.a);  // Assumption-2 conditions, named errors
    s.eps_H = lti::l1_gain(
        lti::series(s.C, lti::parallel(s.plant.channel_H, lti::TransferFunction::constant(-1.0))));
    s.eps_tau = lti::l1_gain(lti::series(lti::TransferFunction({1.0, 0.0}, {1.0}), s.C));
    // Assumption-1 certificates for the linear benchmarks
    if (s.A_true) lti::lyapunov_gamma(*s.A_true);
    if (s.A_hat) lti::lyapunov_gamma(*s.A_hat);
}

}  // namespace detail

/// Benchmark scenarios by name: "rohrs", "nonlinear", "twocart" (case 1|2|3).
inline Scenario build_scenario(const std::string& name, int case_tag = 0,
                               const ScenarioOverrides& ov = {}) {
    Scenario s;
    s.name = name;
    s.case_tag = case_tag;

    if (name == "rohrs") {
        s.plant.n = 1;
        s.plant.drift = [](double, const Eigen::VectorXd& x, const Eigen::VectorXd& th,
                           Eigen::VectorXd& dx) { dx(0) = -(3.0 + th(0)) * x(0); };
        s.plant.b_in = Eigen::VectorXd::Constant(1, 2.0);
        s.plant.c_out = Eigen::VectorXd::Constant(1, 1.0);
        s.plant.x0 = Eigen::VectorXd::Constant(1, 1.0);
        s.plant.theta_true = [](double) { return Eigen::VectorXd::Constant(1, -2.0); };
        s.plant.disturbance = [](double) { return Eigen::VectorXd::Zero(1); };
        s.plant.channel_H = lti::TransferFunction({229.0}, {1.0, 30.0, 229.0});
        s.plant.delay = 0.0;
        s.theta_hat = Eigen::VectorXd::Zero(1);
        s.a = 5.0;
        s.law = control::LawKind::rohrs;
        s.config = sim::SimConfig{1e-3, 60.0, 42};
        s.settle_fraction = 2.0 / 3.0;
        s.A_true = Eigen::MatrixXd::Constant(1, 1, -1.0);
        s.A_hat = Eigen::MatrixXd::Constant(1, 1, -3.0);
    } else if (name == "nonlinear") {
        s.plant.n = 1;
        s.plant.drift = [](double, const Eigen::VectorXd& x, const Eigen::VectorXd& th,
                           Eigen::VectorXd& dx) {
            dx(0) = -x(0) - (1.0 + th(0)) * x(0) * x(0) * x(0);
        };
        s.plant.b_in = Eigen::VectorXd::Constant(1, 1.0);
        s.plant.c_out = Eigen::VectorXd::Constant(1, 1.0);
        s.plant.x0 = Eigen::VectorXd::Constant(1, 1.0);
        s.plant.theta_true = [](double t) {
            return Eigen::VectorXd::Constant(1, 0.2 * std::sin(0.1 * t + 1.0));
        };
        s.plant.disturbance = [](double t) {
            return Eigen::VectorXd::Constant(1, 0.5 * std::sin(0.2 * t));
        };
        s.plant.channel_H = lti::TransferFunction::constant(1.0);
        s.plant.delay = 0.1;
        s.theta_hat = Eigen::VectorXd::Zero(1);
        s.a = 5.0;
        s.law = control::LawKind::nonlinear;
        s.config = sim::SimConfig{1e-3, 60.0, 42};
        s.settle_fraction = 2.0 / 3.0;
    } else if (name == "twocart") {
        if (case_tag < 1 || case_tag > 3)
            throw std::invalid_argument("build_scenario: twocart case must be 1, 2 or 3");
        Eigen::VectorXd theta_real(6), theta_spec(6);
        theta_real << 1.0, 2.0, 0.8, 0.5, 1.3, 0.9;
        theta_spec << 1.0, 1.0, 1.0, 0.9, 1.5, 1.0;
        const Eigen::VectorXd theta = (case_tag == 3) ? theta_spec : theta_real;
        s.theta_hat = (case_tag == 1) ? theta_real : theta_spec;
        if (ov.theta_hat) s.theta_hat = *ov.theta_hat;
        s.corrected_coupling = ov.corrected_coupling.value_or(false);

        s.plant.n = 4;
        const Eigen::MatrixXd A = twocart_A(theta, s.corrected_coupling);
        s.plant.drift = [cc = s.corrected_coupling](double, const Eigen::VectorXd& x,
                                                    const Eigen::VectorXd& th,
                                                    Eigen::VectorXd& dx) {
            dx = twocart_A(th, cc) * x;
        };
        s.plant.b_in = Eigen::VectorXd::Zero(4);
        s.plant.b_in(2) = 1.0 / theta(0);  // m1 is known
        s.plant.c_out = Eigen::VectorXd::Zero(4);
        s.plant.c_out(1) = 1.0;
        s.plant.x0 = Eigen::VectorXd::Zero(4);
        s.plant.theta_true = [theta](double) { return theta; };
        s.plant.disturbance = [](double) { return Eigen::VectorXd::Zero(4); };
        s.plant.noise_gain = Eigen::VectorXd::Zero(4);
        s.plant.noise_gain(3) = 1.0 / theta(1);
        s.plant.channel_H = lti::TransferFunction({229.0}, {1.0, 30.0, 229.0});
        s.plant.delay = 0.1;
        s.a = 1.0;
        s.law = control::LawKind::twocart;
        s.Q = lti::lowpass_chain({10.0, 20.0, 30.0, 40.0, 50.0});
        s.noise_on = true;
        s.config = sim::SimConfig{1e-3, 100.0, 42};
        s.settle_fraction = 0.5;
        s.A_true = A;
        s.A_hat = twocart_A(s.theta_hat, s.corrected_coupling);
    } else {
        throw std::invalid_argument("build_scenario: unknown scenario '" + name + "'");
    }

    if (ov.theta_hat && name != "twocart") s.theta_hat = *ov.theta_hat;
    if (ov.dt) s.config.dt = *ov.dt;
    if (ov.horizon) s.config.horizon = *ov.horizon;
    if (ov.seed) s.config.rng_seed = *ov.seed;
    if (ov.a) s.a = *ov.a;
    if (ov.noise) s.noise_on = *ov.noise;
    if (ov.decomposition) s.decomposition = *ov.decomposition;
    s.config.validate();

    detail::finalize(s);

    // scalar nonlinear certificate: df/dx = -1 - 3(1+theta)x^2 <= -1 needs
    // 1 + theta(t) >= 0 along the horizon
    if (name == "nonlinear") {
        for (double t = 0.0; t <= s.config.horizon; t += 0.25)
            if (1.0 + s.plant.theta_true(t)(0) < 0.0)
                throw std::invalid_argument("build_scenario: nonlinear drift certificate violated");
    }
    return s;
}

}  // namespace asdc::bench
