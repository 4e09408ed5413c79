#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "asdc/sim/delay_line.hpp"
#include "asdc/sim/network.hpp"
#include "asdc/sim/noise.hpp"
#include "asdc/sim/rk4.hpp"
#include "asdc/sim/saturation.hpp"

using namespace asdc::sim;

namespace {

DynamicBlock scalar_ode(std::string name, std::function<double(double, double, double)> f,
                        double x0, std::size_t n_inputs = 0) {
    DynamicBlock blk;
    blk.name = std::move(name);
    blk.x0 = Eigen::VectorXd::Constant(1, x0);
    blk.n_inputs = n_inputs;
    blk.derivative = [f = std::move(f)](double t, const Eigen::VectorXd& x,
                                        const Eigen::VectorXd& u, Eigen::VectorXd& dx) {
        dx(0) = f(t, x(0), u.size() > 0 ? u(0) : 0.0);
    };
    blk.output = [](double, const Eigen::VectorXd& x, const Eigen::VectorXd&) { return x(0); };
    return blk;
}

}  // namespace

TEST(Rk4Step, LinearDecayMatchesExponential) {
    const DynamicBlock blk = scalar_ode("decay", [](double, double x, double) { return -x; }, 1.0);
    Eigen::VectorXd x = blk.x0;
    const double dt = 1e-3;
    for (int k = 0; k < 1000; ++k)
        x = rk4_step(blk, x, k * dt, dt, [](double, Eigen::VectorXd&) {});
    EXPECT_NEAR(x(0), std::exp(-1.0), 1e-9);
}

TEST(Rk4Step, ZeroDerivativeLeavesStateUnchanged) {
    const DynamicBlock blk = scalar_ode("hold", [](double, double, double) { return 0.0; }, 3.25);
    Eigen::VectorXd x = blk.x0;
    x = rk4_step(blk, x, 0.0, 0.5, [](double, Eigen::VectorXd&) {});
    EXPECT_DOUBLE_EQ(x(0), 3.25);
}

TEST(Rk4Step, FourthOrderConvergenceOnForcedCubicPlant) {
    // nonlinear benchmark plant driven by smooth analytic inputs
    const auto run = [](double dt) {
        const DynamicBlock blk = scalar_ode(
            "cubic",
            [](double t, double x, double) {
                const double theta = 0.2 * std::sin(0.1 * t + 1.0);
                const double u = 4.0 * std::sin(3.0 * (t - 0.1));
                const double d = 0.5 * std::sin(0.2 * t);
                return -x - (1.0 + theta) * x * x * x + u + d;
            },
            1.0);
        Eigen::VectorXd x = blk.x0;
        const auto n = static_cast<long>(std::llround(10.0 / dt));
        for (long k = 0; k < n; ++k)
            x = rk4_step(blk, x, static_cast<double>(k) * dt, dt, [](double, Eigen::VectorXd&) {});
        return x(0);
    };
    const double ref = run(2.5e-5);
    const double ratio = std::abs(run(4e-3) - ref) / std::abs(run(2e-3) - ref);
    EXPECT_GT(ratio, 12.8);
    EXPECT_LT(ratio, 19.2);
}

TEST(Rk4Step, NonFiniteStateAborts) {
    const DynamicBlock blk =
        scalar_ode("blowup", [](double, double x, double) { return x * x; }, 2.0);
    Eigen::VectorXd x = blk.x0;
    EXPECT_THROW(
        {
            for (int k = 0; k < 5000; ++k)
                x = rk4_step(blk, x, k * 1e-3, 1e-3, [](double, Eigen::VectorXd&) {});
        },
        SimulationError);
}

TEST(DelayLine, ZeroDelayIsIdentity) {
    DelayLine line(0.0);
    line.push(0.0, 1.5);
    line.push(0.1, 2.5);
    EXPECT_DOUBLE_EQ(line.sample(0.1), 2.5);
    EXPECT_DOUBLE_EQ(line.sample(0.05), 2.0);
}

TEST(DelayLine, ShiftsSineWithinInterpolationError) {
    const double dt = 1e-3, tau = 0.1;
    DelayLine line(tau);
    for (int k = 0; k <= 2000; ++k) line.push(k * dt, std::sin(k * dt));
    for (double t : {0.5, 1.0, 1.5, 1.9}) {
        EXPECT_NEAR(line.sample(t + 0.5 * dt), std::sin(t + 0.5 * dt - tau), 1e-6);
    }
}

TEST(DelayLine, PrehistoryBeforeDelayElapses) {
    DelayLine line(0.1);
    line.push(0.0, 7.0);
    line.push(0.05, 8.0);
    EXPECT_DOUBLE_EQ(line.sample(0.05), 0.0);
}

TEST(DelayLine, ReadBeyondLastWriteIsCausalityViolation) {
    DelayLine line(0.1);
    line.push(0.0, 1.0);
    EXPECT_THROW(line.sample(0.2), SimulationError);
}

TEST(DelayLine, ExactOnGridAlignedPiecewiseLinearInput) {
    const double dt = 0.01, tau = 3 * dt;
    DelayLine line(tau);
    const auto f = [](double t) { return 2.0 * t + 1.0; };
    for (int k = 0; k <= 100; ++k) line.push(k * dt, f(k * dt));
    for (double t : {0.05, 0.123, 0.5, 1.0})
        EXPECT_NEAR(line.sample(t), f(t - tau), 1e-14);
}

TEST(Saturate, Examples) {
    EXPECT_DOUBLE_EQ(saturate(0.5, 1.0), 0.5);
    EXPECT_DOUBLE_EQ(saturate(3.0, 1.0), 1.0);
    EXPECT_DOUBLE_EQ(saturate(-3.0, 1.0), -1.0);
    EXPECT_THROW(saturate(1.0, 0.0), std::invalid_argument);
}

TEST(Saturate, IdempotentAndOdd) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> v(-10.0, 10.0);
    std::uniform_real_distribution<double> a(0.1, 5.0);
    for (int i = 0; i < 200; ++i) {
        const double x = v(rng), lvl = a(rng);
        EXPECT_DOUBLE_EQ(saturate(saturate(x, lvl), lvl), saturate(x, lvl));
        EXPECT_DOUBLE_EQ(saturate(-x, lvl), -saturate(x, lvl));
    }
}

TEST(ColoredNoise, DeterministicForFixedSeed) {
    GaussianSampler a(99), b(99);
    double xa = 0.0, xb = 0.0;
    for (int k = 0; k < 1000; ++k) {
        auto [na, za] = colored_noise_step(xa, 1e-3, a);
        auto [nb, zb] = colored_noise_step(xb, 1e-3, b);
        EXPECT_EQ(za, zb);
        xa = na;
        xb = nb;
    }
}

TEST(ColoredNoise, StationaryStatistics) {
    // filter 0.1/(s+0.1), unit intensity: stationary variance 0.05
    GaussianSampler rng(42);
    const double dt = 1e-2;
    const auto n = static_cast<std::size_t>(1e4 / dt);
    double x = 0.0, sum = 0.0, sumsq = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 0; k < n; ++k) {
        auto [next, z] = colored_noise_step(x, dt, rng);
        x = next;
        if (k * dt > 50.0) {  // burn-in past 5 time constants
            sum += z;
            sumsq += z * z;
            ++count;
        }
    }
    const double mean = sum / static_cast<double>(count);
    const double var = sumsq / static_cast<double>(count) - mean * mean;
    // window holds ~T/(2 tc) = 475 effective samples
    const double std_of_mean = std::sqrt(0.05) / std::sqrt(9950.0 / 20.0);
    EXPECT_NEAR(mean, 0.0, 3.0 * std_of_mean);
    EXPECT_NEAR(var, 0.05, 0.1 * 0.05);
}

TEST(Network, SingleBlockMatchesRk4Loop) {
    Network net;
    const BlockId decay =
        net.add_block(scalar_ode("decay", [](double, double x, double) { return -x; }, 1.0));
    net.probe_output("x", decay);
    const auto traces = run_network(net, SimConfig{1e-3, 1.0, 0});

    const DynamicBlock blk = scalar_ode("decay", [](double, double x, double) { return -x; }, 1.0);
    Eigen::VectorXd x = blk.x0;
    for (int k = 0; k < 1000; ++k)
        x = rk4_step(blk, x, k * 1e-3, 1e-3, [](double, Eigen::VectorXd&) {});
    EXPECT_DOUBLE_EQ(traces.at("x").values.back(), x(0));
}

TEST(Network, CascadedIntegratorsOfUnitInput) {
    Network net;
    const BlockId i1 =
        net.add_block(scalar_ode("int1", [](double, double, double u) { return u; }, 0.0, 1));
    const BlockId i2 =
        net.add_block(scalar_ode("int2", [](double, double, double u) { return u; }, 0.0, 1));
    net.wire_signal(i1, 0, [](double) { return 1.0; });
    net.wire_output(i2, 0, i1);
    net.probe_output("x2", i2);
    const auto traces = run_network(net, SimConfig{1e-3, 2.0, 0});
    const Signal& x2 = traces.at("x2");
    for (std::size_t k = 0; k < x2.size(); k += 400) {
        const double t = x2.time(k);
        EXPECT_NEAR(x2[k], t * t / 2.0, 1e-10);
    }
}

TEST(Network, RohrsPlantUnforcedIsExponentialDecay) {
    // theta = -2 puts the pole at -1: x' = -x, y = e^{-t}
    Network net;
    const BlockId plant = net.add_block(
        scalar_ode("plant", [](double, double x, double u) { return -(3.0 - 2.0) * x + 2.0 * u; },
                   1.0, 1));
    net.wire_signal(plant, 0, [](double) { return 0.0; });
    net.probe_output("y", plant);
    const auto traces = run_network(net, SimConfig{1e-3, 5.0, 0});
    const Signal& y = traces.at("y");
    for (std::size_t k = 0; k < y.size(); k += 1000)
        EXPECT_NEAR(y[k], std::exp(-y.time(k)), 1e-6);
}

TEST(Network, AlgebraicLoopRejectedAtBuild) {
    Network net;
    const BlockId a = net.add_block(
        memoryless_block("a", 1, [](double, const Eigen::VectorXd& u) { return u(0) + 1.0; }));
    const BlockId b = net.add_block(
        memoryless_block("b", 1, [](double, const Eigen::VectorXd& u) { return 0.5 * u(0); }));
    net.wire_output(a, 0, b);
    net.wire_output(b, 0, a);
    net.probe_output("a", a);
    SimConfig cfg{1e-3, 0.01, 0};
    EXPECT_THROW(run_network(net, cfg), std::invalid_argument);
}

TEST(Network, UnwiredInputRejected) {
    Network net;
    net.add_block(scalar_ode("int", [](double, double, double u) { return u; }, 0.0, 1));
    SimConfig cfg{1e-3, 0.01, 0};
    EXPECT_THROW(run_network(net, cfg), std::invalid_argument);
}

TEST(Network, NonFiniteAbortNamesBlockAndTime) {
    Network net;
    net.add_block(scalar_ode("blowup", [](double, double x, double) { return x * x; }, 2.0));
    SimConfig cfg{1e-3, 5.0, 0};
    try {
        run_network(net, cfg);
        FAIL() << "expected abort";
    } catch (const SimulationError& e) {
        EXPECT_EQ(e.stage(), "blowup");
        EXPECT_GT(e.time(), 0.0);
        EXPECT_LT(e.time(), 1.0);
    }
}

TEST(Network, DelayedTapShiftsBlockOutput) {
    Network net;
    const BlockId src =
        net.add_block(scalar_ode("ramp", [](double, double, double) { return 1.0; }, 0.0));
    const BlockId follower =
        net.add_block(scalar_ode("lag", [](double, double x, double u) { return u - 0.0 * x; },
                                 0.0, 1));
    net.wire_delayed(follower, 0, src, 0.25);
    net.probe_output("y", follower);
    const auto traces = run_network(net, SimConfig{1e-3, 2.0, 0});
    // follower integrates ramp(t - 0.25) clipped at 0: y(t) = (t-0.25)^2/2
    const Signal& y = traces.at("y");
    const double t = y.end_time();
    EXPECT_NEAR(y.values.back(), 0.5 * (t - 0.25) * (t - 0.25), 1e-6);
}
