#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace asdc::lti {

// Polynomials are real coefficient sequences in descending powers of s:
// p = {c0, c1, ..., cn} represents c0*s^n + c1*s^(n-1) + ... + cn.
using Poly = std::vector<double>;

inline int poly_degree(const Poly& p) { return static_cast<int>(p.size()) - 1; }

inline double poly_max_abs(const Poly& p) {
    double m = 0.0;
    for (double c : p) m = std::max(m, std::abs(c));
    return m;
}

// Drop leading coefficients below tol (absolute). Always keeps at least one entry.
inline Poly poly_trim_leading(Poly p, double tol = 0.0) {
    std::size_t i = 0;
    while (i + 1 < p.size() && std::abs(p[i]) <= tol) ++i;
    p.erase(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(i));
    return p;
}

inline Poly poly_scale(Poly p, double k) {
    for (double& c : p) c *= k;
    return p;
}

// Product of two polynomials (coefficient convolution).
inline Poly poly_mul(const Poly& a, const Poly& b) {
    Poly r(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] += a[i] * b[j];
    return r;
}

inline Poly poly_add(const Poly& a, const Poly& b) {
    const std::size_t n = std::max(a.size(), b.size());
    Poly r(n, 0.0);
    std::copy(a.begin(), a.end(), r.begin() + static_cast<std::ptrdiff_t>(n - a.size()));
    for (std::size_t j = 0; j < b.size(); ++j) r[n - b.size() + j] += b[j];
    return r;
}

inline std::complex<double> poly_eval(const Poly& p, std::complex<double> s) {
    std::complex<double> v = 0.0;
    for (double c : p) v = v * s + c;
    return v;
}

// Roots via companion-matrix eigenvalues. Requires a nonzero leading coefficient.
inline std::vector<std::complex<double>> poly_roots(const Poly& p_in) {
    Poly p = poly_trim_leading(p_in, 0.0);
    const int n = poly_degree(p);
    if (n <= 0) return {};
    if (p[0] == 0.0) throw std::invalid_argument("poly_roots: zero leading coefficient");

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) companion(0, i) = -p[static_cast<std::size_t>(i) + 1] / p[0];
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;

    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    const auto& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

}  // namespace asdc::lti
