#pragma once

#include <Eigen/Dense>
#include <sstream>
#include <stdexcept>
#include <string>

namespace asdc::lti {

/// Certificate that A'P + PA = -Q holds with P, Q positive definite, together
/// with the ISS gain gamma = 2 lambda_max(P)^2 / (lambda_min(P) lambda_min(Q)).
struct GainCertificate {
    Eigen::MatrixXd P;
    Eigen::MatrixXd Q;
    double gamma = 0.0;

    double residual(const Eigen::MatrixXd& A) const {
        return (A.transpose() * P + P * A + Q).norm();
    }

    std::string to_text() const {
        std::ostringstream os;
        os.precision(12);
        os << "gamma: " << gamma << "\nP:\n" << P << "\nQ:\n" << Q << "\n";
        return os.str();
    }
};

/// Solve A'P + PA = -I for Hurwitz A (dense Kronecker solve, fine at the
/// small orders used here) and evaluate the ISS gain formula.
inline GainCertificate lyapunov_gamma(const Eigen::MatrixXd& A) {
    const auto n = A.rows();
    if (n == 0 || A.cols() != n) throw std::invalid_argument("lyapunov_gamma: A must be square");

    const Eigen::VectorXcd eigs = A.eigenvalues();
    for (Eigen::Index i = 0; i < n; ++i)
        if (eigs(i).real() >= -1e-9)
            throw std::invalid_argument(
                "lyapunov_gamma: A is not Hurwitz, no positive definite solution exists");

    // vec(A'P + PA) = (I (x) A' + A' (x) I) vec(P)
    const Eigen::MatrixXd At = A.transpose();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n * n, n * n);
    for (Eigen::Index j = 0; j < n; ++j)
        M.block(j * n, j * n, n, n) += At;
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index k = 0; k < n; ++k)
                M(j * n + i, k * n + i) += At(j, k);

    const Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd rhs(n * n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) rhs(j * n + i) = -Q(i, j);

    const Eigen::VectorXd p = M.partialPivLu().solve(rhs);
    Eigen::MatrixXd P(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) P(i, j) = p(j * n + i);
    P = 0.5 * (P + P.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P);
    const double pmin = es.eigenvalues().minCoeff();
    const double pmax = es.eigenvalues().maxCoeff();
    if (pmin <= 1e-12)
        throw std::invalid_argument("lyapunov_gamma: Lyapunov solution is not positive definite");

    const double qmin = 1.0;  // Q = I
    GainCertificate cert;
    cert.P = std::move(P);
    cert.Q = Q;
    cert.gamma = 2.0 * pmax * pmax / (pmin * qmin);
    return cert;
}

}  // namespace asdc::lti
