#pragma once

#include <stdexcept>

namespace asdc::control {

/// First-order approximate differentiator s/(Tf s + 1), realized as
/// dw = (in - w)/Tf with output (in - w)/Tf. State starts at 0. Between
/// received samples the input is treated as linear (first-order hold), which
/// keeps the sampled gain within O(dt^2) of the continuous filter.
class DiffFilter {
public:
    explicit DiffFilter(double time_constant = 0.1) : tf_(time_constant) {
        if (!(tf_ > 0.0)) throw std::invalid_argument("DiffFilter: time constant must be positive");
    }

    double output(double input) const { return (input - w_) / tf_; }
    double state() const { return w_; }

    /// Bring the state up to the new sample, interpolating the input linearly
    /// from the previous one over dt. The first sample only primes the filter.
    void advance(double input, double dt) {
        if (!primed_) {
            primed_ = true;
            last_in_ = input;
            return;
        }
        const auto in_at = [&](double frac) { return last_in_ + frac * (input - last_in_); };
        const auto f = [&](double w, double frac) { return (in_at(frac) - w) / tf_; };
        const double k1 = f(w_, 0.0);
        const double k2 = f(w_ + 0.5 * dt * k1, 0.5);
        const double k3 = f(w_ + 0.5 * dt * k2, 0.5);
        const double k4 = f(w_ + dt * k3, 1.0);
        w_ += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        last_in_ = input;
    }

private:
    double tf_;
    double w_ = 0.0;
    double last_in_ = 0.0;
    bool primed_ = false;
};

/// Feed one sample and return the current derivative estimate.
inline double approx_derivative(DiffFilter& filter, double input, double dt) {
    filter.advance(input, dt);
    return filter.output(input);
}

}  // namespace asdc::control
