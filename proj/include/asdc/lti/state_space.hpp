#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

#include "asdc/lti/transfer_function.hpp"

namespace asdc::lti {

/// SISO state-space model dx = A x + b u, y = c'x + d u.
struct StateSpaceModel {
    Eigen::MatrixXd A;
    Eigen::VectorXd b_in;
    Eigen::VectorXd c_out;
    double d_thru = 0.0;

    int order() const { return static_cast<int>(A.rows()); }

    std::complex<double> eval(std::complex<double> s) const {
        if (order() == 0) return d_thru;
        const Eigen::MatrixXcd M =
            s * Eigen::MatrixXcd::Identity(order(), order()) - A.cast<std::complex<double>>();
        const Eigen::VectorXcd x = M.partialPivLu().solve(b_in.cast<std::complex<double>>());
        return c_out.cast<std::complex<double>>().dot(x) + d_thru;
    }

    double dc_gain() const { return eval(0.0).real(); }
};

/// Observable-canonical realization of a proper transfer function. The direct
/// term is nonzero iff the function is biproper; first-order k/(a1 s + a0)
/// comes out as dz = -(a0/a1) z + (k/a1) u, y = z.
inline StateSpaceModel realize(const TransferFunction& tf) {
    if (!tf.is_proper())
        throw std::invalid_argument("realize: improper transfer function (num degree " +
                                    std::to_string(tf.num_degree()) + " > den degree " +
                                    std::to_string(tf.den_degree()) + ")");
    const int n = tf.den_degree();
    StateSpaceModel ss;

    // denominator is monic after canonicalization: s^n + a1 s^(n-1) + ... + an
    const Poly& den = tf.den();

    // pad numerator to b0 s^n + ... + bn, then peel the direct term
    Poly num(static_cast<std::size_t>(n) + 1, 0.0);
    std::copy(tf.num().begin(), tf.num().end(),
              num.begin() + static_cast<std::ptrdiff_t>(num.size() - tf.num().size()));
    ss.d_thru = num[0];
    for (int i = 1; i <= n; ++i)
        num[static_cast<std::size_t>(i)] -= ss.d_thru * den[static_cast<std::size_t>(i)];

    ss.A = Eigen::MatrixXd::Zero(n, n);
    ss.b_in = Eigen::VectorXd::Zero(n);
    ss.c_out = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
        ss.A(i, 0) = -den[static_cast<std::size_t>(i) + 1];
        if (i + 1 < n) ss.A(i, i + 1) = 1.0;
        ss.b_in(i) = num[static_cast<std::size_t>(i) + 1];
    }
    if (n > 0) ss.c_out(0) = 1.0;
    return ss;
}

/// Transfer function of a state-space model via the Faddeev-LeVerrier
/// recursion. Spurious leading numerator coefficients from round-off are
/// trimmed at trim_tol relative to the largest coefficient.
inline TransferFunction ss_to_tf(const StateSpaceModel& ss, double trim_tol = 1e-9) {
    const int n = ss.order();
    if (n == 0) return TransferFunction::constant(ss.d_thru);

    Poly den(static_cast<std::size_t>(n) + 1, 0.0);
    Poly num_sp(static_cast<std::size_t>(n), 0.0);
    den[0] = 1.0;

    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n);
    for (int k = 1; k <= n; ++k) {
        num_sp[static_cast<std::size_t>(k) - 1] = ss.c_out.dot(M * ss.b_in);
        const double dk = -(ss.A * M).trace() / k;
        den[static_cast<std::size_t>(k)] = dk;
        M = ss.A * M + dk * Eigen::MatrixXd::Identity(n, n);
    }

    Poly num = poly_add(poly_scale(den, ss.d_thru), num_sp);
    num = poly_trim_leading(std::move(num), trim_tol * std::max(poly_max_abs(num), 1e-300));
    return {std::move(num), std::move(den)};
}

}  // namespace asdc::lti
