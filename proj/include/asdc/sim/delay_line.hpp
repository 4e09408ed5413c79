#pragma once

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <utility>

#include "asdc/sim/error.hpp"

namespace asdc::sim {

/// Transport delay over recorded (time, value) samples. Reads interpolate
/// linearly; reads before the first recorded sample return the pre-history
/// value; reads past the last recorded sample are a causality violation.
class DelayLine {
public:
    explicit DelayLine(double delay, double prehistory = 0.0)
        : delay_(delay), prehistory_(prehistory) {
        if (delay < 0.0) throw std::invalid_argument("DelayLine: negative delay");
    }

    double delay() const { return delay_; }

    void push(double t, double value) {
        if (!buf_.empty() && t <= buf_.back().first)
            throw std::invalid_argument("DelayLine::push: non-increasing time");
        buf_.emplace_back(t, value);
    }

    /// Drop history no longer needed once reads stay at or after `t`.
    void trim_before(double t) {
        const double oldest = t - delay_;
        while (buf_.size() >= 2 && buf_[1].first <= oldest) buf_.pop_front();
    }

    /// Value at t - delay.
    double sample(double t) const {
        const double tq = t - delay_;
        if (buf_.empty() || tq < buf_.front().first) return prehistory_;
        const double t_last = buf_.back().first;
        if (tq > t_last + 1e-12 * std::max(1.0, std::abs(t_last)))
            throw SimulationError("delay line read beyond last written sample", t, "delay");
        if (tq >= t_last) return buf_.back().second;

        const auto it = std::lower_bound(
            buf_.begin(), buf_.end(), tq,
            [](const std::pair<double, double>& s, double tv) { return s.first < tv; });
        if (it == buf_.begin()) return it->second;
        const auto prev = std::prev(it);
        const double span = it->first - prev->first;
        const double frac = (tq - prev->first) / span;
        return prev->second + frac * (it->second - prev->second);
    }

private:
    double delay_;
    double prehistory_;
    std::deque<std::pair<double, double>> buf_;
};

/// Free-function form of DelayLine::sample.
inline double delayed_sample(const DelayLine& line, double t) { return line.sample(t); }

}  // namespace asdc::sim
