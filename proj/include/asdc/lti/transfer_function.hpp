#pragma once

#include <complex>
#include <initializer_list>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "asdc/lti/polynomial.hpp"

namespace asdc::lti {

/// Rational SISO transfer function with real coefficients in descending powers
/// of s. Canonical form: denominator leading coefficient 1, no leading zeros,
/// exactly matching common s^k factors cancelled.
class TransferFunction {
public:
    // Cancellations (proportional num/den, common s^k factor) use this relative
    // coefficient tolerance; nothing else is ever cancelled.
    static constexpr double kCancelTol = 1e-9;

    TransferFunction() : num_{0.0}, den_{1.0} {}

    TransferFunction(Poly num, Poly den) {
        den = poly_trim_leading(std::move(den), 0.0);
        if (den.size() == 1 && den[0] == 0.0)
            throw std::invalid_argument("TransferFunction: zero denominator");
        num = poly_trim_leading(std::move(num), 0.0);

        // normalize denominator leading coefficient to 1
        const double lead = den[0];
        for (double& c : den) c /= lead;
        for (double& c : num) c /= lead;

        num_ = std::move(num);
        den_ = std::move(den);
        cancel_common_s_factor();
        cancel_proportional();
    }

    TransferFunction(std::initializer_list<double> num, std::initializer_list<double> den)
        : TransferFunction(Poly(num), Poly(den)) {}

    static TransferFunction constant(double k) { return TransferFunction({k}, {1.0}); }
    static TransferFunction zero() { return {}; }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }

    int num_degree() const { return poly_degree(num_); }
    int den_degree() const { return poly_degree(den_); }
    int relative_degree() const { return den_degree() - num_degree(); }

    bool is_zero() const { return num_.size() == 1 && num_[0] == 0.0; }
    bool is_proper() const { return num_degree() <= den_degree(); }
    bool is_strictly_proper() const { return num_degree() < den_degree(); }
    bool is_constant() const { return num_degree() == 0 && den_degree() == 0; }

    std::complex<double> eval(std::complex<double> s) const {
        return poly_eval(num_, s) / poly_eval(den_, s);
    }

    /// Gain at s = 0.
    double dc_gain() const {
        const double d0 = den_.back();
        if (d0 == 0.0) throw std::domain_error("dc_gain: pole at s = 0");
        return num_.back() / d0;
    }

    std::vector<std::complex<double>> poles() const { return poly_roots(den_); }
    std::vector<std::complex<double>> zeros() const {
        if (is_zero()) return {};
        return poly_roots(num_);
    }

    bool operator==(const TransferFunction& other) const {
        return num_ == other.num_ && den_ == other.den_;
    }

private:
    void cancel_common_s_factor() {
        const double tn = kCancelTol * poly_max_abs(num_);
        const double td = kCancelTol * poly_max_abs(den_);
        std::size_t k = 0;
        while (k + 1 < num_.size() && k + 1 < den_.size() &&
               std::abs(num_[num_.size() - 1 - k]) <= tn &&
               std::abs(den_[den_.size() - 1 - k]) <= td)
            ++k;
        if (k > 0) {
            num_.resize(num_.size() - k);
            den_.resize(den_.size() - k);
        }
    }

    void cancel_proportional() {
        if (num_.size() != den_.size() || num_.size() == 1) return;
        const double ratio = num_[0];
        if (ratio == 0.0) return;
        const double tol = kCancelTol * std::max(1.0, std::abs(ratio));
        for (std::size_t i = 0; i < num_.size(); ++i)
            if (std::abs(num_[i] - ratio * den_[i]) > tol) return;
        num_ = {ratio};
        den_ = {1.0};
    }

    Poly num_;
    Poly den_;
};

inline TransferFunction series(const TransferFunction& a, const TransferFunction& b) {
    return {poly_mul(a.num(), b.num()), poly_mul(a.den(), b.den())};
}

inline TransferFunction parallel(const TransferFunction& a, const TransferFunction& b) {
    return {poly_add(poly_mul(a.num(), b.den()), poly_mul(b.num(), a.den())),
            poly_mul(a.den(), b.den())};
}

enum class ComposeMode { series, parallel };

inline TransferFunction compose(std::span<const TransferFunction> tfs, ComposeMode mode) {
    if (tfs.empty()) throw std::invalid_argument("compose: empty sequence");
    TransferFunction acc = tfs[0];
    for (std::size_t i = 1; i < tfs.size(); ++i)
        acc = (mode == ComposeMode::series) ? series(acc, tfs[i]) : parallel(acc, tfs[i]);
    return acc;
}

inline TransferFunction compose(std::initializer_list<TransferFunction> tfs, ComposeMode mode) {
    return compose(std::span<const TransferFunction>(tfs.begin(), tfs.size()), mode);
}

/// True iff every pole has real part below the stability margin. Constants
/// (no poles) count as stable.
inline bool stability_check(const TransferFunction& tf) {
    constexpr double kMargin = -1e-9;
    for (const auto& p : tf.poles())
        if (p.real() >= kMargin) return false;
    return true;
}

inline bool is_minimum_phase(const TransferFunction& tf) {
    if (tf.is_zero()) return false;
    for (const auto& z : tf.zeros())
        if (z.real() >= -1e-9) return false;
    return true;
}

/// q(s) * g(s)^-1, proper by the order precondition on q. Rejects
/// non-minimum-phase g (the inverse would be unstable) and low-order q.
inline TransferFunction proper_inverse(const TransferFunction& g, const TransferFunction& q) {
    if (g.is_zero()) throw std::invalid_argument("proper_inverse: zero plant");
    if (!is_minimum_phase(g))
        throw std::invalid_argument("proper_inverse: non-minimum-phase plant, inverse unstable");
    const int needed = g.relative_degree();
    const int have = q.relative_degree();
    if (have < needed)
        throw std::invalid_argument("proper_inverse: filter relative degree " + std::to_string(have) +
                                    " too small, need >= " + std::to_string(needed));
    return {poly_mul(q.num(), g.den()), poly_mul(q.den(), g.num())};
}

/// Product of first-order low-pass sections 1/(s/w + 1), one per cutoff.
inline TransferFunction lowpass_chain(std::span<const double> cutoffs) {
    Poly den{1.0};
    for (double w : cutoffs) {
        if (w <= 0.0) throw std::invalid_argument("lowpass_chain: cutoff must be positive");
        den = poly_mul(den, Poly{1.0 / w, 1.0});
    }
    return {{1.0}, den};
}

inline TransferFunction lowpass_chain(std::initializer_list<double> cutoffs) {
    return lowpass_chain(std::span<const double>(cutoffs.begin(), cutoffs.size()));
}

}  // namespace asdc::lti
