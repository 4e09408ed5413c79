#pragma once

#include <stdexcept>
#include <string>

namespace asdc::sim {

/// Raised when a simulation cannot continue (non-finite state, causality
/// violation). Carries the simulation time and the offending stage/block.
class SimulationError : public std::runtime_error {
public:
    SimulationError(const std::string& what, double time, std::string stage)
        : std::runtime_error(what + " (stage '" + stage + "', t = " + std::to_string(time) + ")"),
          time_(time),
          stage_(std::move(stage)) {}

    double time() const { return time_; }
    const std::string& stage() const { return stage_; }

private:
    double time_;
    std::string stage_;
};

}  // namespace asdc::sim
