#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "asdc/sim/signal.hpp"

namespace asdc::bench {

struct Metrics {
    double window_start = 0.0;
    double window_end = 0.0;
    double settled_sup_err = 0.0;
    double settled_rms_err = 0.0;
    double sup_xi = 0.0;
    double max_obs_residual_new = 0.0;
    double max_obs_residual_p = 0.0;
    double sum_residual_x_rel = 0.0;
    double sum_residual_y_rel = 0.0;
    double split_residual_z_rel = 0.0;
    double split_residual_u_rel = 0.0;
    double sat_active_fraction = 0.0;
};

/// Tracking metrics over the trailing settle window plus the run-wide
/// residual maxima; everything derives from the recorded traces.
inline Metrics compute_metrics(const std::map<std::string, sim::Signal>& traces,
                               double settle_fraction = 0.5) {
    if (!(settle_fraction > 0.0) || settle_fraction > 1.0)
        throw std::invalid_argument("compute_metrics: settle fraction must be in (0, 1]");
    const sim::Signal& y = traces.at("y");
    const sim::Signal& r = traces.at("r");
    if (y.size() != r.size() || y.size() < 2)
        throw std::invalid_argument("compute_metrics: traces must be nonempty and aligned");

    Metrics m;
    m.window_end = y.end_time();
    m.window_start = m.window_end * (1.0 - settle_fraction);

    double sq = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 0; k < y.size(); ++k) {
        if (y.time(k) < m.window_start) continue;
        const double e = y[k] - r[k];
        m.settled_sup_err = std::max(m.settled_sup_err, std::abs(e));
        sq += e * e;
        ++count;
    }
    m.settled_rms_err = count > 0 ? std::sqrt(sq / static_cast<double>(count)) : 0.0;

    const auto sup_of = [&traces](const char* name) {
        const auto it = traces.find(name);
        if (it == traces.end()) return 0.0;
        double sup = 0.0;
        for (double v : it->second.values) sup = std::max(sup, std::abs(v));
        return sup;
    };
    m.sup_xi = sup_of("xi");
    m.max_obs_residual_new = sup_of("e_obs_new");
    m.max_obs_residual_p = sup_of("e_obs_p");

    const double xn = 1.0 + sup_of("x_new_norm");
    m.sum_residual_x_rel = sup_of("e_sum_x") / xn;
    m.sum_residual_y_rel = sup_of("e_sum_y") / xn;
    const double zn = 1.0 + sup_of("z_norm");
    m.split_residual_z_rel = sup_of("e_split_z") / zn;
    m.split_residual_u_rel = sup_of("e_split_u") / zn;

    if (const auto it = traces.find("sat_active"); it != traces.end()) {
        double active = 0.0;
        for (double v : it->second.values) active += v;
        m.sat_active_fraction = active / static_cast<double>(it->second.size());
    }
    return m;
}

}  // namespace asdc::bench
