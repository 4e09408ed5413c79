#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace asdc::sim {

struct SimConfig {
    double dt = 1e-3;
    double horizon = 60.0;
    std::uint64_t rng_seed = 42;

    std::size_t step_count() const {
        validate();
        return static_cast<std::size_t>(std::llround(horizon / dt));
    }

    void validate() const {
        if (!(dt > 0.0)) throw std::invalid_argument("SimConfig: dt must be positive");
        if (!(horizon >= dt)) throw std::invalid_argument("SimConfig: horizon must be >= dt");
    }
};

}  // namespace asdc::sim
