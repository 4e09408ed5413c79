#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "asdc/control/compensator.hpp"
#include "asdc/control/diff_filter.hpp"
#include "asdc/control/laws.hpp"
#include "asdc/core/input_chain.hpp"
#include "asdc/core/observers.hpp"
#include "asdc/core/plant.hpp"
#include "asdc/sim/error.hpp"
#include "asdc/sim/rk4.hpp"
#include "asdc/sim/saturation.hpp"

namespace asdc::control {

enum class LawKind { rohrs, nonlinear, twocart };

struct StackConfig {
    core::TransformedSystem model;
    lti::TransferFunction C{{1.0}, {2.0, 1.0}};
    double a = 1.0;
    LawKind law = LawKind::rohrs;
    std::optional<TwoCartCompensator> comp;  // required for the two-cart law
    double diff_time_constant = 0.1;
    bool with_shadows = true;
    core::DecompositionMode decomposition = core::DecompositionMode::primary_drift;
    Eigen::MatrixXd linearized_A;  // used when decomposition == linearized
};

/// All controller-side state of the integrated controller: the exact
/// observers, the approximate differentiators, the feedforward compensators,
/// and the shaping chain together with its saturation split (z = z_p + z_s).
/// Optionally co-integrates the shadow ground-truth systems (x_new, x_p, x_s)
/// on the same stage inputs, so observer exactness and the additive sum
/// property can be checked sample by sample.
///
/// One step is step_begin() (observer residual, law, realization from the
/// current y sample) followed by advance() (integrate the continuous states
/// over [t, t+dt] with those values held). The chain output u evolves
/// continuously through z.
class ControllerStack {
public:
    struct Output {
        double u = 0.0;
        double u_p = 0.0;
        double v = 0.0;
        double sat_v = 0.0;
        double d_new_hat = 0.0;
        double d_new_dot_hat = 0.0;
        double w = 0.0;  // r - d_new_hat, compensator drive (two-cart)
        double u_zp = 0.0;
        double u_zs = 0.0;
        double y_s = 0.0;
        // instrumentation (0 unless shadows are on)
        double e_obs_new = 0.0;
        double e_obs_p = 0.0;
        double e_sum_x = 0.0;
        double e_sum_y = 0.0;
        double x_new_norm = 0.0;
        double e_split_z = 0.0;
        double e_split_u = 0.0;
        double z_norm = 0.0;
    };

    explicit ControllerStack(StackConfig cfg)
        : cfg_(std::move(cfg)),
          diff_d_(cfg_.diff_time_constant),
          diff_up_(cfg_.diff_time_constant) {
        chain_ = core::make_input_chain(cfg_.C, cfg_.a);
        if (cfg_.law != LawKind::twocart) inv_ = realize_input_coeffs(cfg_.C);
        if (cfg_.law == LawKind::twocart && !cfg_.comp)
            throw std::invalid_argument("ControllerStack: two-cart law needs a compensator");
        if (cfg_.decomposition == core::DecompositionMode::linearized &&
            cfg_.linearized_A.rows() != static_cast<Eigen::Index>(cfg_.model.n))
            throw std::invalid_argument("ControllerStack: linearized decomposition needs A");

        const auto n = static_cast<Eigen::Index>(cfg_.model.n);
        const Eigen::Index m = chain_.css.order();
        off_xhat_new_ = 0;
        off_xhat_p_ = n;
        Eigen::Index at = 2 * n;
        if (cfg_.with_shadows) {
            off_x_new_ = at;
            off_x_p_ = at + n;
            off_x_s_ = at + 2 * n;
            at += 3 * n;
        }
        if (cfg_.law == LawKind::twocart) {
            mu_ = cfg_.comp->comp_u_ss.order();
            mv_ = cfg_.comp->comp_v_ss.order();
            off_comp_u_ = at;
            at += mu_;
            off_comp_v_ = at;
            at += mv_;
        }
        off_z_ = at;
        off_zp_ = at + m;
        off_zs_ = at + 2 * m;
        at += 3 * m;
        X_ = Eigen::VectorXd::Zero(at);
        fa_.resize(n);
        fb_.resize(n);
    }

    /// Sample-time pass: observer residual, derivative estimates, tracking
    /// law, input realization. Advances the differentiator states to t.
    Output step_begin(double y, double r, double r_dot, double t, double dt) {
        const auto n = static_cast<Eigen::Index>(cfg_.model.n);
        Output out;
        out.d_new_hat = y - cfg_.model.c_out.dot(X_.segment(off_xhat_new_, n));
        out.d_new_dot_hat = approx_derivative(diff_d_, out.d_new_hat, dt);

        const double theta_hat =
            cfg_.model.theta_hat.size() > 0 ? cfg_.model.theta_hat(0) : 0.0;
        switch (cfg_.law) {
            case LawKind::rohrs:
                out.u_p = rohrs_law(X_(off_xhat_p_), r, r_dot, out.d_new_hat, out.d_new_dot_hat,
                                    theta_hat);
                break;
            case LawKind::nonlinear:
                out.u_p = nonlinear_law(X_(off_xhat_p_), r, r_dot, out.d_new_hat,
                                        out.d_new_dot_hat, theta_hat);
                break;
            case LawKind::twocart: {
                out.w = r - out.d_new_hat;
                const auto& ss = cfg_.comp->comp_u_ss;
                out.u_p = ss.c_out.dot(X_.segment(off_comp_u_, mu_)) + ss.d_thru * out.w;
                break;
            }
        }

        if (cfg_.law == LawKind::twocart) {
            const auto& ss = cfg_.comp->comp_v_ss;
            out.v = ss.c_out.dot(X_.segment(off_comp_v_, mv_)) + ss.d_thru * out.w;
        } else {
            const double u_p_dot = approx_derivative(diff_up_, out.u_p, dt);
            out.v = realize_input(out.u_p, u_p_dot, inv_);
        }
        if (!std::isfinite(out.u_p) || !std::isfinite(out.v))
            throw sim::SimulationError("non-finite controller command", t, "law");
        out.sat_v = sim::saturate(out.v, cfg_.a);

        const Eigen::Index m = chain_.css.order();
        const auto chain_out = [&](Eigen::Index off, double drive) {
            return (m > 0 ? chain_.css.c_out.dot(X_.segment(off, m)) : 0.0) +
                   chain_.css.d_thru * drive;
        };
        out.u = chain_out(off_z_, out.sat_v);
        out.u_zp = chain_out(off_zp_, out.v);
        out.u_zs = chain_out(off_zs_, out.sat_v - out.v);
        out.e_split_u = std::abs(out.u_zp + out.u_zs - out.u);
        out.e_split_z = (X_.segment(off_zp_, m) + X_.segment(off_zs_, m) - X_.segment(off_z_, m))
                            .lpNorm<Eigen::Infinity>();
        out.z_norm = X_.segment(off_z_, m).lpNorm<Eigen::Infinity>();

        if (cfg_.with_shadows) {
            const auto xnew = X_.segment(off_x_new_, n);
            const auto xp = X_.segment(off_x_p_, n);
            const auto xs = X_.segment(off_x_s_, n);
            out.y_s = cfg_.model.c_out.dot(xs);
            out.e_obs_new = (X_.segment(off_xhat_new_, n) - xnew).lpNorm<Eigen::Infinity>();
            out.e_obs_p = (X_.segment(off_xhat_p_, n) - xp).lpNorm<Eigen::Infinity>();
            out.e_sum_x = (xp + xs - xnew).lpNorm<Eigen::Infinity>();
            out.e_sum_y = std::abs(cfg_.model.c_out.dot(xp + xs - xnew));
            out.x_new_norm = xnew.lpNorm<Eigen::Infinity>();
        }
        return out;
    }

    /// Integrate all continuous states over [t, t+dt] with the sample's values
    /// held; returns the chain output u(t+dt).
    double advance(const Output& out, double t, double dt) {
        sim::rk4_step_inplace(
            [&](double ts, const Eigen::VectorXd& Xs, Eigen::VectorXd& dX) {
                derivative(ts, Xs, out, dX);
            },
            t, dt, X_, ws_);
        if (!X_.allFinite()) abort_nonfinite(t + dt);
        const Eigen::Index m = chain_.css.order();
        return (m > 0 ? chain_.css.c_out.dot(X_.segment(off_z_, m)) : 0.0) +
               chain_.css.d_thru * out.sat_v;
    }

    const Eigen::VectorXd& state() const { return X_; }
    Eigen::VectorXd x_hat_new() const { return seg(off_xhat_new_); }
    Eigen::VectorXd x_hat_p() const { return seg(off_xhat_p_); }
    Eigen::VectorXd x_new() const { return seg(off_x_new_); }
    Eigen::VectorXd x_p() const { return seg(off_x_p_); }
    Eigen::VectorXd x_s() const { return seg(off_x_s_); }

private:
    Eigen::VectorXd seg(Eigen::Index off) const {
        return X_.segment(off, static_cast<Eigen::Index>(cfg_.model.n));
    }

    void derivative(double t, const Eigen::VectorXd& Xs, const Output& held,
                    Eigen::VectorXd& dX) const {
        const auto n = static_cast<Eigen::Index>(cfg_.model.n);
        const Eigen::Index m = chain_.css.order();

        // chain output at the stage state: the input the observers see
        const double u_stage =
            (m > 0 ? chain_.css.c_out.dot(Xs.segment(off_z_, m)) : 0.0) +
            chain_.css.d_thru * held.sat_v;

        const bool matched = cfg_.decomposition == core::DecompositionMode::primary_drift;
        const auto primary_deriv = [&](Eigen::Index off, Eigen::Index dst) {
            if (matched) {
                cfg_.model.drift_hat(t, Xs.segment(off, n), fa_);
                dX.segment(dst, n) = fa_ + cfg_.model.b_in * held.u_p;
            } else {
                dX.segment(dst, n) =
                    cfg_.linearized_A * Xs.segment(off, n) + cfg_.model.b_in * held.u_p;
            }
        };

        cfg_.model.drift_hat(t, Xs.segment(off_xhat_new_, n), fa_);
        dX.segment(off_xhat_new_, n) = fa_ + cfg_.model.b_in * u_stage;
        primary_deriv(off_xhat_p_, off_xhat_p_);

        if (cfg_.with_shadows) {
            cfg_.model.drift_hat(t, Xs.segment(off_x_new_, n), fa_);
            dX.segment(off_x_new_, n) = fa_ + cfg_.model.b_in * u_stage;
            primary_deriv(off_x_p_, off_x_p_);
            cfg_.model.drift_hat(t, Xs.segment(off_x_p_, n) + Xs.segment(off_x_s_, n), fb_);
            if (matched) {
                cfg_.model.drift_hat(t, Xs.segment(off_x_p_, n), fa_);
                dX.segment(off_x_s_, n) =
                    fb_ - fa_ + cfg_.model.b_in * (u_stage - held.u_p);
            } else {
                dX.segment(off_x_s_, n) = fb_ - cfg_.linearized_A * Xs.segment(off_x_p_, n) +
                                          cfg_.model.b_in * (u_stage - held.u_p);
            }
        }

        if (cfg_.law == LawKind::twocart) {
            const auto& su = cfg_.comp->comp_u_ss;
            const auto& sv = cfg_.comp->comp_v_ss;
            dX.segment(off_comp_u_, mu_) =
                su.A * Xs.segment(off_comp_u_, mu_) + su.b_in * held.w;
            dX.segment(off_comp_v_, mv_) =
                sv.A * Xs.segment(off_comp_v_, mv_) + sv.b_in * held.w;
        }

        if (m > 0) {
            const auto& cz = chain_.css;
            dX.segment(off_z_, m) = cz.A * Xs.segment(off_z_, m) + cz.b_in * held.sat_v;
            dX.segment(off_zp_, m) = cz.A * Xs.segment(off_zp_, m) + cz.b_in * held.v;
            dX.segment(off_zs_, m) =
                cz.A * Xs.segment(off_zs_, m) + cz.b_in * (held.sat_v - held.v);
        }
    }

    [[noreturn]] void abort_nonfinite(double t) const {
        const auto n = static_cast<Eigen::Index>(cfg_.model.n);
        const auto bad = [&](Eigen::Index off, Eigen::Index len) {
            return len > 0 && !X_.segment(off, len).allFinite();
        };
        std::string stage = "controller";
        if (bad(off_xhat_new_, n) || bad(off_xhat_p_, n)) stage = "observer";
        else if (cfg_.with_shadows && (bad(off_x_new_, n) || bad(off_x_p_, n) || bad(off_x_s_, n)))
            stage = "shadow";
        else if (cfg_.law == LawKind::twocart && (bad(off_comp_u_, mu_) || bad(off_comp_v_, mv_)))
            stage = "compensator";
        else if (bad(off_z_, 3 * chain_.css.order())) stage = "chain";
        throw sim::SimulationError("non-finite controller state", t, stage);
    }

    StackConfig cfg_;
    core::InputChain chain_;
    InverseRealization inv_;
    DiffFilter diff_d_;
    DiffFilter diff_up_;
    Eigen::Index off_xhat_new_ = 0, off_xhat_p_ = 0;
    Eigen::Index off_x_new_ = 0, off_x_p_ = 0, off_x_s_ = 0;
    Eigen::Index off_comp_u_ = 0, off_comp_v_ = 0, mu_ = 0, mv_ = 0;
    Eigen::Index off_z_ = 0, off_zp_ = 0, off_zs_ = 0;
    Eigen::VectorXd X_;
    mutable Eigen::VectorXd fa_, fb_;
    sim::Rk4Workspace ws_;
};

/// Theorem-4 execution order for one sample: observer/law/realization values
/// from the current y, then the continuous update with those values held.
inline ControllerStack::Output controller_step(ControllerStack& stack, double y, double r,
                                               double r_dot, double t, double dt) {
    ControllerStack::Output out = stack.step_begin(y, r, r_dot, t, dt);
    stack.advance(out, t, dt);
    return out;
}

}  // namespace asdc::control
