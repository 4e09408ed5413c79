#include "asdc/lti/transfer_function.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

using asdc::lti::ComposeMode;
using asdc::lti::compose;
using asdc::lti::is_minimum_phase;
using asdc::lti::parallel;
using asdc::lti::proper_inverse;
using asdc::lti::series;
using asdc::lti::stability_check;
using asdc::lti::TransferFunction;

namespace {

void expect_same_response(const TransferFunction& a, const TransferFunction& b, double tol = 1e-9) {
    for (double w : {1e-3, 1e-2, 0.1, 0.5, 1.0, 5.0, 20.0, 100.0}) {
        const std::complex<double> s(0.0, w);
        EXPECT_NEAR(std::abs(a.eval(s) - b.eval(s)), 0.0, tol) << "at w = " << w;
    }
}

}  // namespace

TEST(TransferFunction, CanonicalizesDenominatorLeadingCoefficient) {
    const TransferFunction c({1.0}, {2.0, 1.0});
    EXPECT_DOUBLE_EQ(c.den()[0], 1.0);
    EXPECT_DOUBLE_EQ(c.den()[1], 0.5);
    EXPECT_DOUBLE_EQ(c.num()[0], 0.5);
    EXPECT_TRUE(c.is_strictly_proper());
    EXPECT_DOUBLE_EQ(c.dc_gain(), 1.0);
}

TEST(TransferFunction, ZeroDenominatorRejected) {
    EXPECT_THROW(TransferFunction({1.0}, {0.0}), std::invalid_argument);
}

TEST(TransferFunction, PropernessFlags) {
    const TransferFunction biproper({1.0, 0.0}, {2.0, 1.0});  // s/(2s+1)
    EXPECT_TRUE(biproper.is_proper());
    EXPECT_FALSE(biproper.is_strictly_proper());
    const TransferFunction improper({1.0, 0.0, 0.0}, {2.0, 1.0});
    EXPECT_FALSE(improper.is_proper());
}

TEST(Compose, SeriesOfInversePairIsOne) {
    const TransferFunction c({1.0}, {2.0, 1.0});
    const TransferFunction cinv({2.0, 1.0}, {1.0});
    const TransferFunction unit = series(c, cinv);
    EXPECT_TRUE(unit.is_constant());
    EXPECT_NEAR(unit.num()[0], 1.0, 1e-12);
}

TEST(Compose, ParallelHMinusOne) {
    const TransferFunction h({229.0}, {1.0, 30.0, 229.0});
    const TransferFunction diff = parallel(h, TransferFunction::constant(-1.0));
    // (229 - (s^2 + 30 s + 229)) / (s^2 + 30 s + 229) = (-s^2 - 30 s) / (...)
    ASSERT_EQ(diff.num_degree(), 2);
    EXPECT_NEAR(diff.num()[0], -1.0, 1e-12);
    EXPECT_NEAR(diff.num()[1], -30.0, 1e-12);
    EXPECT_NEAR(diff.num()[2], 0.0, 1e-12);
    EXPECT_EQ(diff.den(), h.den());
}

TEST(Compose, SeriesSquaresFirstOrder) {
    const TransferFunction c({1.0}, {2.0, 1.0});
    const TransferFunction c2 = compose({c, c}, ComposeMode::series);
    expect_same_response(c2, TransferFunction({1.0}, {4.0, 4.0, 1.0}));
}

TEST(Compose, EmptySequenceRejected) {
    EXPECT_THROW(compose(std::span<const TransferFunction>{}, ComposeMode::series),
                 std::invalid_argument);
}

TEST(ProperInverse, FirstOrder) {
    const TransferFunction g({1.0}, {2.0, 1.0});
    const TransferFunction q({1.0}, {0.1, 1.0});
    const TransferFunction inv = proper_inverse(g, q);
    expect_same_response(inv, TransferFunction({2.0, 1.0}, {0.1, 1.0}));
    EXPECT_TRUE(inv.is_proper());
}

TEST(ProperInverse, NonMinimumPhaseRejected) {
    const TransferFunction g({1.0, -1.0}, {1.0, 3.0, 2.0});  // zero at s = +1
    const TransferFunction q({1.0}, {0.1, 1.0});
    EXPECT_THROW(proper_inverse(g, q), std::invalid_argument);
}

TEST(ProperInverse, InsufficientFilterOrderRejected) {
    const TransferFunction g({1.0}, {1.0, 3.0, 2.0});  // relative degree 2
    const TransferFunction q({1.0}, {0.1, 1.0});       // relative degree 1
    EXPECT_THROW(proper_inverse(g, q), std::invalid_argument);
}

TEST(ProperInverse, RoundTripMatchesFilter) {
    const TransferFunction g({0.9, 0.8}, {1.0, 3.1, 3.3, 1.5, 0.4});
    const TransferFunction q = asdc::lti::lowpass_chain({10.0, 20.0, 30.0, 40.0, 50.0});
    const TransferFunction inv = proper_inverse(g, q);
    for (int i = 0; i < 50; ++i) {
        const double w = std::pow(10.0, -3.0 + 5.0 * i / 49.0);
        const std::complex<double> s(0.0, w);
        EXPECT_NEAR(std::abs(g.eval(s) * inv.eval(s) - q.eval(s)), 0.0, 1e-6) << "w = " << w;
    }
}

TEST(StabilityCheck, Examples) {
    EXPECT_TRUE(stability_check(TransferFunction({1.0}, {2.0, 1.0})));
    EXPECT_FALSE(stability_check(TransferFunction({1.0}, {1.0, -1.0})));
    EXPECT_TRUE(stability_check(TransferFunction({229.0}, {1.0, 30.0, 229.0})));
    EXPECT_TRUE(stability_check(TransferFunction::constant(2.0)));
    EXPECT_FALSE(stability_check(TransferFunction({1.0}, {1.0, 0.0})));  // pole at origin
}

TEST(MinimumPhase, ConstantNumeratorHasNoZeros) {
    EXPECT_TRUE(is_minimum_phase(TransferFunction({1.0}, {2.0, 1.0})));
    EXPECT_FALSE(is_minimum_phase(TransferFunction::zero()));
}

TEST(TransferFunction, RandomSeriesResponseIsProductOfResponses) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    for (int trial = 0; trial < 25; ++trial) {
        const TransferFunction a({coef(rng), coef(rng)}, {1.0, std::abs(coef(rng)) + 0.5, 1.0});
        const TransferFunction b({coef(rng)}, {1.0, std::abs(coef(rng)) + 0.5});
        const TransferFunction ab = series(a, b);
        for (double w : {0.1, 1.0, 10.0}) {
            const std::complex<double> s(0.0, w);
            EXPECT_NEAR(std::abs(ab.eval(s) - a.eval(s) * b.eval(s)), 0.0, 1e-10);
        }
    }
}
