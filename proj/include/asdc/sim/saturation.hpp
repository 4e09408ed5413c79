#pragma once

#include <cmath>
#include <stdexcept>

namespace asdc::sim {

/// sign(v) * min(|v|, a) for a > 0.
inline double saturate(double v, double a) {
    if (!(a > 0.0)) throw std::invalid_argument("saturate: level must be positive");
    return std::copysign(std::min(std::abs(v), a), v);
}

}  // namespace asdc::sim
