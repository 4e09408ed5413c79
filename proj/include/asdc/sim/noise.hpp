#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>

namespace asdc::sim {

/// Deterministic standard-normal sampler (Box-Muller over mt19937_64), so
/// traces do not depend on the standard library's distribution internals.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        spare_ = mag * std::sin(2.0 * std::numbers::pi * u2);
        has_spare_ = true;
        return mag * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    double uniform() {
        return (static_cast<double>(rng_() >> 11)) * 0x1.0p-53;  // [0, 1)
    }

    std::mt19937_64 rng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// One step of the colored-noise filter pole/(s + pole) driven by white noise
/// of intensity xi: a Gaussian increment of variance xi/dt held over the step,
/// integrated with RK4. Returns (next_state, output sample).
inline std::pair<double, double> colored_noise_step(double state, double dt, GaussianSampler& rng,
                                                    double pole = 0.1, double intensity = 1.0) {
    const double eps = rng.next() * std::sqrt(intensity / dt);
    const auto f = [&](double x) { return pole * (eps - x); };
    const double k1 = f(state);
    const double k2 = f(state + 0.5 * dt * k1);
    const double k3 = f(state + 0.5 * dt * k2);
    const double k4 = f(state + dt * k3);
    const double next = state + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    return {next, next};
}

}  // namespace asdc::sim
