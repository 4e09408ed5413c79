#pragma once

#include <cmath>
#include <functional>
#include <string>

namespace asdc::control {

/// Desired trajectory with its analytic derivative.
struct ReferenceSignal {
    std::string name;
    std::function<double(double)> r;
    std::function<double(double)> r_dot;
};

inline ReferenceSignal step_reference(double amplitude = 0.5) {
    return {"step", [amplitude](double) { return amplitude; }, [](double) { return 0.0; }};
}

inline ReferenceSignal sine_reference(double amplitude = 0.5, double omega = 0.2) {
    return {"sine",
            [amplitude, omega](double t) { return amplitude * std::sin(omega * t); },
            [amplitude, omega](double t) { return amplitude * omega * std::cos(omega * t); }};
}

}  // namespace asdc::control
