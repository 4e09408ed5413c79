#pragma once

#include <stdexcept>

#include "asdc/lti/transfer_function.hpp"

namespace asdc::control {

/// Primary tracking law for the first-order linear benchmark; closes the
/// primary loop to de_p = -e_p.
inline double rohrs_law(double x_p, double r, double r_dot, double d_new, double d_new_dot,
                        double theta_hat) {
    return 0.5 * ((2.0 + theta_hat) * x_p + r + r_dot - d_new - d_new_dot);
}

/// Primary tracking law for the scalar cubic benchmark; same closed loop.
inline double nonlinear_law(double x_p, double r, double r_dot, double d_new, double d_new_dot,
                            double theta_hat) {
    return (1.0 + theta_hat) * x_p * x_p * x_p + r_dot + r - d_new_dot - d_new;
}

/// Coefficients of the exact first-order inverse v = c1 * du_p + c0 * u_p,
/// i.e. C(s)^-1 realized through a derivative estimate.
struct InverseRealization {
    double c1 = 0.0;
    double c0 = 1.0;
};

inline InverseRealization realize_input_coeffs(const lti::TransferFunction& C) {
    if (C.den_degree() != 1 || C.num_degree() != 0)
        throw std::invalid_argument(
            "realize_input: closed-form inversion needs a first-order C with constant numerator");
    // canonical C = b0 / (s + a0): v = (du_p + a0 u_p) / b0
    const double b0 = C.num()[0];
    const double a0 = C.den()[1];
    if (b0 == 0.0) throw std::invalid_argument("realize_input: zero gain C");
    return {1.0 / b0, a0 / b0};
}

inline double realize_input(double u_p, double u_p_dot, const InverseRealization& inv) {
    return inv.c1 * u_p_dot + inv.c0 * u_p;
}

}  // namespace asdc::control
