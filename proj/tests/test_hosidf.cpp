#include <gtest/gtest.h>

#include <cmath>

#include "resetlab/errors.hpp"
#include "resetlab/hosidf.hpp"

using namespace resetlab;

namespace {

// Clegg integrator driven by sin(wt): y = (-cos(wt) + sq(wt)) / w, with sq
// the unit square wave (4/pi) sum sin(n wt)/n over odd n.
Complex clegg_harmonic(double w, int n) {
    if (n % 2 == 0) return {0.0, 0.0};
    if (n == 1) return Complex{4.0 / kPi, -1.0} / w;
    return Complex{4.0 / (kPi * n * w), 0.0};
}

}  // namespace

TEST(Hosidf, CleggMatchesSquareWaveSeries) {
    const auto clegg = make_clegg(0.0);
    for (double w : {0.3, 1.0, 17.0, 600.0})
        for (int n = 1; n <= 7; ++n) {
            const Complex h = hosidf(clegg, w, n);
            EXPECT_NEAR(std::abs(h - clegg_harmonic(w, n)), 0.0, 1e-12 * std::abs(clegg_harmonic(w, 1)))
                << "w=" << w << " n=" << n;
        }
}

TEST(Hosidf, EvenOrdersVanishAndDfIsFirstOrder) {
    const auto fore = make_fore(hz_to_rad(15.43), 0.0);
    for (double w : {1.0, 100.0, 3000.0}) {
        EXPECT_EQ(hosidf(fore, w, 2), Complex(0.0, 0.0));
        EXPECT_EQ(hosidf(fore, w, 4), Complex(0.0, 0.0));
        EXPECT_EQ(df(fore, w), hosidf(fore, w, 1));
    }
    EXPECT_THROW((void)hosidf(fore, 1.0, 0), ConfigError);
    EXPECT_THROW((void)hosidf(fore, -1.0, 1), ConfigError);
}

TEST(Hosidf, NoResetGivesLinearResponse) {
    const auto lin = make_fore(40.0, 1.0);
    for (double w : {1.0, 40.0, 900.0}) {
        EXPECT_NEAR(theta_rho(lin, w).norm(), 0.0, 1e-15);
        EXPECT_NEAR(std::abs(df(lin, w) - lin.base.response(Complex{0.0, w})), 0.0, 1e-14);
        EXPECT_NEAR(std::abs(hosidf(lin, w, 3)), 0.0, 1e-15);
    }
}

TEST(Hosidf, ShapedWithZeroPhaseEqualsPlain) {
    const auto fore = make_fore(97.0, 0.3);
    for (double w : {5.0, 97.0, 2000.0})
        for (int n : {1, 3, 5}) EXPECT_NEAR(std::abs(hosidf_shaped(fore, 0.0, w, n) - hosidf(fore, w, n)), 0.0, 1e-14);
}

TEST(Hosidf, SingularResetMatrixIsReported) {
    const auto clegg = make_clegg(-1.0);
    try {
        (void)theta_rho(clegg, 2.0);
        FAIL() << "expected NumericalError";
    } catch (const NumericalError& e) {
        EXPECT_NE(std::string(e.what()).find("omega"), std::string::npos);
    }
}

TEST(OpenLoop, FirstHarmonicIdenticalAcrossSequences) {
    TuningParams t;
    t.kp             = 43.0;
    const auto parts = make_pi_cglp_parts(t);
    const RationalTF plant({1.0}, {1.077e-4, 0.0049, 4.2218});
    for (double f : log_grid(0.1, 1000.0, 25)) {
        const Complex ref = open_loop_hosidf(arrange_sequence(parts, 1), plant, hz_to_rad(f), 1);
        for (int id : {2, 3, 4}) {
            const Complex v = open_loop_hosidf(arrange_sequence(parts, id), plant, hz_to_rad(f), 1);
            EXPECT_LE(std::abs(v - ref), 1e-12 * std::abs(ref));
        }
    }
}

TEST(OpenLoop, ThirdHarmonicOrderingForSimpleParts) {
    const double wd    = hz_to_rad(25.0);
    const auto   parts = make_simple_parts(wd / 1.62, wd, hz_to_rad(10.0), 0.0);
    for (double f : log_grid(0.1, 1000.0, 41)) {
        const double w = hz_to_rad(f);
        double       m[5];
        for (int id = 1; id <= 4; ++id) m[id] = std::abs(open_loop_hosidf(arrange_sequence(parts, id), RationalTF::gain(1.0), w, 3));
        EXPECT_LE(m[1], std::min({m[2], m[3], m[4]})) << f;
        EXPECT_GE(m[2], std::max({m[1], m[3], m[4]})) << f;
    }
}

TEST(OpenLoop, SensitivityOfLoopGain) {
    EXPECT_NEAR(std::abs(df_sensitivity(Complex{1.0, 0.0}) - 0.5), 0.0, 1e-15);
    EXPECT_THROW((void)df_sensitivity(Complex{-1.0, 0.0}), NumericalError);
}

TEST(HarmonicResponse, LookupRules) {
    HarmonicResponse r{{1.0, 2.0}, {1, 3}, {{1, 0}, {3, 0}, {2, 0}, {6, 0}}};
    EXPECT_EQ(r.at(1, 3), Complex(6.0, 0.0));
    EXPECT_EQ(r.at(0, 2), Complex(0.0, 0.0));
    EXPECT_THROW((void)r.at(0, 5), ConfigError);
    EXPECT_THROW((void)r.at(2, 1), ConfigError);
}

TEST(Grid, LogGridEndpointsAndValidation) {
    const auto g = log_grid(1.0, 1000.0, 4);
    ASSERT_EQ(g.size(), 4u);
    EXPECT_DOUBLE_EQ(g[0], 1.0);
    EXPECT_NEAR(g[1], 10.0, 1e-12);
    EXPECT_DOUBLE_EQ(g[3], 1000.0);
    EXPECT_EQ(log_grid_per_decade(0.1, 1000.0, 200).size(), 801u);
    EXPECT_THROW(validate_grid({1.0, 1.0}), ConfigError);
    EXPECT_THROW(validate_grid({-1.0}), ConfigError);
}

TEST(Margins, TunedKpPlacesCrossover) {
    const RationalTF plant({1.0}, {1.077e-4, 0.0049, 4.2218});
    TuningParams     t;
    t.kp = tune_kp_for_crossover(t, plant);
    EXPECT_NEAR(t.kp, 43.4776, 1e-3);
    const auto m = df_margins(arrange_sequence(make_pi_cglp_parts(t), 1), plant, hz_to_rad(1.0), hz_to_rad(10000.0));
    ASSERT_TRUE(m.found);
    EXPECT_NEAR(rad_to_hz(m.crossover), 100.0, 1e-6);
    EXPECT_GT(m.phase_margin_deg, 25.0);
    EXPECT_LT(m.phase_margin_deg, 35.0);
}
