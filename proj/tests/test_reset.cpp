#include <gtest/gtest.h>

#include <cmath>

#include "resetlab/errors.hpp"
#include "resetlab/reset.hpp"

using namespace resetlab;

TEST(TriggerCrossed, SignChangesAndZeros) {
    EXPECT_TRUE(trigger_crossed(1.0, -1.0));
    EXPECT_TRUE(trigger_crossed(-0.5, 0.25));
    EXPECT_TRUE(trigger_crossed(1.0, 0.0));
    EXPECT_FALSE(trigger_crossed(0.0, 1.0));
    EXPECT_FALSE(trigger_crossed(0.0, 0.0));
    EXPECT_FALSE(trigger_crossed(2.0, 3.0));
}

TEST(ResetElement, Validation) {
    EXPECT_THROW((void)make_fore(10.0, 1.5), ConfigError);
    EXPECT_THROW((void)make_fore(-1.0, 0.0), ConfigError);
    EXPECT_THROW((void)make_reset_element(StateSpace(Matrix(0, 0), Matrix(0, 1), Matrix(1, 0), Matrix::Zero(1, 1)), 0.0),
                 ConfigError);
    const auto fore = make_fore(20.0, 0.0);
    EXPECT_NEAR(fore.base.A(0, 0), -20.0, 1e-12);
    EXPECT_NEAR(fore.base.response(Complex{0.0, 0.0}).real(), 1.0, 1e-12);
}

TEST(ResetStepper, CleggResetsAtCrossing) {
    const auto   clegg = make_clegg(0.0);
    const double Ts    = 0.01;
    ResetStepper stepper(clegg, Ts);
    auto         st = ResetSimState::zero(1);
    for (int k = 0; k < 10; ++k) (void)stepper.step(st, 1.0, 1.0);
    EXPECT_NEAR(st.x[0], 10 * Ts, 1e-14);
    const auto out = stepper.step(st, -1.0, -1.0);
    EXPECT_TRUE(out.reset);
    // reset to zero, then one flow step with u = -1
    EXPECT_NEAR(out.y, -Ts, 1e-14);
    EXPECT_EQ(st.last_reset_step, 10);
    EXPECT_EQ(st.step_index, 11);
}

TEST(ResetStepper, PartialResetScalesState) {
    const auto   clegg = make_clegg(0.5);
    ResetStepper stepper(clegg, 0.1);
    auto         st = ResetSimState::zero(1);
    (void)stepper.step(st, 1.0, 1.0);
    (void)stepper.step(st, 1.0, 1.0);
    const double before = st.x[0];
    const auto   out    = stepper.step(st, 0.0, -1.0);
    EXPECT_TRUE(out.reset);
    EXPECT_NEAR(st.x[0], 0.5 * before, 1e-14);
}

TEST(ResetStepper, ConsecutiveCrossingsAreSpacedBySampleGuard) {
    const auto   clegg = make_clegg(0.0);
    ResetStepper stepper(clegg, 1e-3);
    auto         st   = ResetSimState::zero(1);
    std::vector<int> resets;
    // trigger alternates sign every sample: every sample is a crossing
    for (int k = 0; k < 50; ++k) {
        const double trig = (k % 2 == 0) ? 1.0 : -1.0;
        if (stepper.step(st, 1.0, trig).reset) resets.push_back(k);
    }
    ASSERT_GE(resets.size(), 2u);
    for (std::size_t i = 1; i < resets.size(); ++i) EXPECT_GE(resets[i] - resets[i - 1], 2);
}

TEST(ResetStepper, GammaOneIsLinear) {
    const auto   lin = make_fore(30.0, 1.0);
    ResetStepper stepper(lin, 1e-3);
    const auto   dss = discretize(lin.base, 1e-3, Discretization::zoh);
    auto         st  = ResetSimState::zero(1);
    double       x   = 0.0;
    for (int k = 0; k < 400; ++k) {
        const double u   = std::sin(0.05 * k);
        const auto   out = stepper.step(st, u, u);
        x                = dss.Ad(0, 0) * x + dss.Bd(0, 0) * u;
        EXPECT_NEAR(out.y, dss.Cd(0, 0) * x, 1e-15);
    }
}

TEST(ResetStepper, RejectsWrongStateSize) {
    ResetStepper stepper(make_fore(1.0, 0.0), 1e-3);
    auto         st = ResetSimState::zero(2);
    EXPECT_THROW((void)stepper.step(st, 0.0, 0.0), ConfigError);
}

TEST(ResetStepper, FreeStepMatchesStepper) {
    const auto   fore = make_fore(50.0, 0.2);
    ResetStepper stepper(fore, 1e-4);
    auto         a = ResetSimState::zero(1);
    auto         b = ResetSimState::zero(1);
    for (int k = 0; k < 300; ++k) {
        const double u = std::sin(0.07 * k);
        EXPECT_EQ(stepper.step(a, u, u).y, step(fore, b, u, u, 1e-4).y);
    }
}
