#include <gtest/gtest.h>

#include "resetlab/controllers.hpp"
#include "resetlab/errors.hpp"

using namespace resetlab;

TEST(Tuning, TableDefaultsAndDerivedResetCorner) {
    const auto t = TuningParams::table2();
    EXPECT_DOUBLE_EQ(t.omega_c, hz_to_rad(100.0));
    EXPECT_DOUBLE_EQ(t.omega_d, hz_to_rad(25.0));
    EXPECT_DOUBLE_EQ(t.omega_t, hz_to_rad(600.0));
    EXPECT_DOUBLE_EQ(t.omega_i, hz_to_rad(10.0));
    EXPECT_DOUBLE_EQ(t.kp, 3980.0);
    EXPECT_DOUBLE_EQ(t.gamma, 0.0);
    EXPECT_NEAR(rad_to_hz(t.omega_r()), 15.43, 0.01);
    EXPECT_NO_THROW(t.validate());
    auto bad    = t;
    bad.omega_t = hz_to_rad(50.0);
    EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(Shaping, ConstantSolvesPhaseBalance) {
    const double wc = hz_to_rad(100.0);
    const auto   sf = design_shaping_filter(wc, 2.0 * wc);
    EXPECT_NEAR(sf.a, (1.0 + std::sqrt(5.0)) / 2.0, 1e-12);
    EXPECT_LT(std::abs(shaping_residual(sf.a, wc, 2.0 * wc)), 1e-12);
    // zero phase at the bandwidth
    EXPECT_NEAR(phase_at(sf, wc), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(sf.tf.at_frequency(0.0 + 1e-9)), 1.0, 1e-6);
}

TEST(Sequences, ArrangementMatchesTable) {
    const auto parts = make_pi_cglp_parts(TuningParams::table2());
    const double w   = 321.0;
    const Complex lead = parts.lead.at_frequency(w), lag = parts.lag.at_frequency(w);
    auto c1 = arrange_sequence(parts, 1);
    auto c2 = arrange_sequence(parts, 2);
    auto c3 = arrange_sequence(parts, 3);
    auto c4 = arrange_sequence(parts, 4);
    EXPECT_EQ(c1.cl1.at_frequency(w), lead);
    EXPECT_EQ(c1.cl2.at_frequency(w), lag);
    EXPECT_EQ(c2.cl1.at_frequency(w), lag);
    EXPECT_EQ(c2.cl2.at_frequency(w), lead);
    EXPECT_EQ(c3.cl1.at_frequency(w), Complex(1.0, 0.0));
    EXPECT_NEAR(std::abs(c3.cl2.at_frequency(w) - lead * lag), 0.0, 1e-9 * std::abs(lead * lag));
    EXPECT_NEAR(std::abs(c4.cl1.at_frequency(w) - lead * lag), 0.0, 1e-9 * std::abs(lead * lag));
    EXPECT_EQ(c4.cl2.at_frequency(w), Complex(1.0, 0.0));
    EXPECT_THROW((void)arrange_sequence(parts, 5), ConfigError);
    EXPECT_THROW((void)sequence_name(0), ConfigError);
    EXPECT_EQ(sequence_name(1), "Lead-Reset-Lag");
}

TEST(Parts, LeadAndPiShapes) {
    const auto pi = make_pi(2.0, 10.0);
    EXPECT_NEAR(std::abs(pi.at_frequency(10.0) - Complex(2.0, -2.0)), 0.0, 1e-12);
    const auto lead = make_lead(10.0, 1000.0);
    EXPECT_NEAR(lead.dc_gain(), 1.0, 1e-15);
    EXPECT_THROW((void)make_lead(10.0, 5.0), ConfigError);
}
