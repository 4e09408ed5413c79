#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace asdc::sim {

/// Uniformly sampled real-valued trace.
struct Signal {
    double dt = 1e-3;
    double start = 0.0;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double time(std::size_t i) const { return start + static_cast<double>(i) * dt; }
    double end_time() const { return values.empty() ? start : time(values.size() - 1); }

    double operator[](std::size_t i) const { return values[i]; }

    /// Linear interpolation, clamped to the first/last sample and snapped to
    /// grid points so on-grid reads are exact.
    double at(double t) const {
        if (values.empty()) throw std::out_of_range("Signal::at: empty signal");
        const double s = (t - start) / dt;
        const double k = std::round(s);
        if (std::abs(s - k) < 1e-9 && k >= 0.0 && k < static_cast<double>(values.size()))
            return values[static_cast<std::size_t>(k)];
        if (s <= 0.0) return values.front();
        const auto last = static_cast<double>(values.size() - 1);
        if (s >= last) return values.back();
        const auto i = static_cast<std::size_t>(s);
        const double frac = s - static_cast<double>(i);
        return values[i] + frac * (values[i + 1] - values[i]);
    }
};

}  // namespace asdc::sim
