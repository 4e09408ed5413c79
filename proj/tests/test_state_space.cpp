#include "asdc/lti/state_space.hpp"

#include <gtest/gtest.h>

#include <complex>
#include <random>

using asdc::lti::realize;
using asdc::lti::ss_to_tf;
using asdc::lti::StateSpaceModel;
using asdc::lti::TransferFunction;

TEST(Realize, FirstOrderMatchesCanonicalForm) {
    // 1/(2s+1): dz = -0.5 z + 0.5 u, y = z
    const StateSpaceModel ss = realize(TransferFunction({1.0}, {2.0, 1.0}));
    ASSERT_EQ(ss.order(), 1);
    EXPECT_DOUBLE_EQ(ss.A(0, 0), -0.5);
    EXPECT_DOUBLE_EQ(ss.b_in(0), 0.5);
    EXPECT_DOUBLE_EQ(ss.c_out(0), 1.0);
    EXPECT_DOUBLE_EQ(ss.d_thru, 0.0);
}

TEST(Realize, ConstantGainHasEmptyState) {
    const StateSpaceModel ss = realize(TransferFunction::constant(2.0));
    EXPECT_EQ(ss.order(), 0);
    EXPECT_DOUBLE_EQ(ss.d_thru, 2.0);
}

TEST(Realize, SecondOrderDcGain) {
    const StateSpaceModel ss = realize(TransferFunction({229.0}, {1.0, 30.0, 229.0}));
    ASSERT_EQ(ss.order(), 2);
    EXPECT_NEAR(ss.dc_gain(), 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(ss.d_thru, 0.0);
}

TEST(Realize, BiproperDirectTerm) {
    const StateSpaceModel ss = realize(TransferFunction({1.0, 0.0}, {2.0, 1.0}));  // s/(2s+1)
    ASSERT_EQ(ss.order(), 1);
    EXPECT_DOUBLE_EQ(ss.d_thru, 0.5);
}

TEST(Realize, ImproperRejected) {
    EXPECT_THROW(realize(TransferFunction({1.0, 0.0, 0.0}, {2.0, 1.0})), std::invalid_argument);
}

TEST(Realize, FrequencyResponseMatchesTransferFunction) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coef(0.2, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        const TransferFunction tf({coef(rng), coef(rng), coef(rng)},
                                  {1.0, coef(rng) + 1.0, coef(rng) + 1.0, coef(rng)});
        const StateSpaceModel ss = realize(tf);
        for (double w : {1e-3, 0.1, 1.0, 10.0, 100.0}) {
            const std::complex<double> s(0.0, w);
            EXPECT_NEAR(std::abs(ss.eval(s) - tf.eval(s)), 0.0, 1e-9 * (1.0 + std::abs(tf.eval(s))));
        }
    }
}

TEST(SsToTf, RoundTripsThroughRealization) {
    const TransferFunction tf({3.0, 1.0}, {1.0, 2.5, 1.7, 0.3});
    const TransferFunction back = ss_to_tf(realize(tf));
    for (double w : {0.01, 0.3, 2.0, 30.0}) {
        const std::complex<double> s(0.0, w);
        EXPECT_NEAR(std::abs(back.eval(s) - tf.eval(s)), 0.0, 1e-9);
    }
}

TEST(SsToTf, TrimsSpuriousLeadingCoefficients) {
    // relative degree 3 system: numerator must come out as degree n-3
    Eigen::MatrixXd A(4, 4);
    A << 0, 0, 1, 0, 0, 0, 0, 1, -0.8, 0.8, -1.3, 1.3, 0.4, -0.65, 0.45, -1.1;
    StateSpaceModel ss{A, Eigen::Vector4d(0, 0, 1, 0), Eigen::Vector4d(0, 1, 0, 0), 0.0};
    const TransferFunction tf = ss_to_tf(ss);
    EXPECT_EQ(tf.den_degree(), 4);
    EXPECT_EQ(tf.relative_degree(), 3);
}
