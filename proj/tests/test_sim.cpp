#include <gtest/gtest.h>

#include <cmath>

#include "resetlab/errors.hpp"
#include "resetlab/hosidf.hpp"
#include "resetlab/sim.hpp"
#include "support/linear_loop.hpp"

using namespace resetlab;

namespace {

const RationalTF kPlant({1.0}, {1.077e-4, 0.0049, 4.2218});

ControllerChain unit_chain(int id, double gamma) {
    TuningParams t;
    t.kp    = 1.0;
    t.gamma = gamma;
    return arrange_sequence(make_pi_cglp_parts(t), id);
}

}  // namespace

TEST(Multisine, DefaultPeriodIsTwoSeconds) {
    Multisine m;
    EXPECT_DOUBLE_EQ(m.fundamental_period(), 2.0);
    m.amplitude = 0.5;
    EXPECT_NEAR(m.value(0.25), 0.5 * (std::sin(kPi / 4) + 1.0 + std::sin(2.5 * kPi) + std::sin(5 * kPi) +
                                       std::sin(10 * kPi) + std::sin(15 * kPi)),
                1e-12);
}

TEST(ClosedLoop, NoResetStepMatchesAssembledLinearLoop) {
    SimConfig cfg;
    cfg.duration_s = 0.5;
    for (int id : {1, 2, 3, 4}) {
        const auto chain = unit_chain(id, 1.0);
        const auto res   = simulate_step(chain, kPlant, cfg);
        const auto L     = test_support::assemble_linear_loop(chain, kPlant, 1.0 / cfg.fs);
        ASSERT_LT(L.spectral_radius(), 1.0);
        const auto ref   = L.step_response(res.sim.y.size());
        double     worst = 0.0;
        for (std::size_t k = 0; k < ref.size(); ++k) worst = std::max(worst, std::abs(res.sim.y[k] - ref[k]));
        EXPECT_LT(worst, 1e-6) << "sequence " << id;
        EXPECT_TRUE(res.sim.reset_indices.empty());
    }
}

TEST(ClosedLoop, NoResetSensitivityMatchesLinearLoop) {
    SimConfig cfg;
    for (double f : {3.0, 40.0}) {
        const auto    chain = unit_chain(1, 1.0);
        const auto    p     = pseudo_sensitivity_point(chain, kPlant, f, 1.0, cfg);
        const Complex L1    = open_loop_hosidf(chain, kPlant, hz_to_rad(f), 1);
        EXPECT_NEAR(p.s_partial / std::abs(df_sensitivity(L1)), 1.0, 0.02) << f;
    }
}

TEST(ClosedLoop, RerunIsBitwiseIdentical) {
    SimConfig cfg;
    cfg.noise_fraction = 0.02;
    cfg.disturbance    = Multisine{};
    cfg.disturbance->amplitude = 0.3;
    cfg.seed           = 99;
    cfg.settle_periods = 1;
    cfg.measure_periods = 1;
    const auto chain = unit_chain(1, 0.0);
    const auto a     = simulate_closed_loop(chain, kPlant, Reference::sine(2.0, 5.0), cfg);
    const auto b     = simulate_closed_loop(chain, kPlant, Reference::sine(2.0, 5.0), cfg);
    EXPECT_EQ(a.e, b.e);
    EXPECT_EQ(a.u, b.u);
    EXPECT_EQ(a.reset_indices, b.reset_indices);
    cfg.seed         = 100;
    const auto c     = simulate_closed_loop(chain, kPlant, Reference::sine(2.0, 5.0), cfg);
    EXPECT_NE(a.e, c.e);
}

TEST(ClosedLoop, NoiseIsBoundedUniform) {
    SimConfig cfg;
    cfg.noise_fraction  = 0.05;
    cfg.settle_periods  = 2;
    cfg.measure_periods = 2;
    const double amp    = 3.0;
    const auto   ref    = Reference::sine(amp, 10.0);
    const auto   res    = simulate_closed_loop(unit_chain(3, 0.0), kPlant, ref, cfg);
    double       peak = 0.0, mean = 0.0;
    for (std::size_t k = 0; k < res.e.size(); ++k) {
        const double n = ref.value(static_cast<double>(k) * res.Ts) - res.y[k] - res.e[k];
        peak           = std::max(peak, std::abs(n));
        mean += n;
    }
    mean /= static_cast<double>(res.e.size());
    const double m = 0.05 * amp;
    EXPECT_LE(peak, m * (1.0 + 1e-9));
    EXPECT_GT(peak, 0.99 * m);
    EXPECT_LT(std::abs(mean), 0.01 * m);
}

TEST(ClosedLoop, ResetsRespectSampleSpacing) {
    SimConfig cfg;
    cfg.noise_fraction = 0.05;
    cfg.settle_periods = 2;
    cfg.measure_periods = 2;
    const auto res = simulate_closed_loop(unit_chain(1, 0.0), kPlant, Reference::sine(1.0, 20.0), cfg);
    ASSERT_GT(res.reset_indices.size(), 4u);
    for (std::size_t i = 1; i < res.reset_indices.size(); ++i)
        EXPECT_GE(res.reset_indices[i] - res.reset_indices[i - 1], 2);
}

TEST(ClosedLoop, ConfigurationErrors) {
    SimConfig cfg;
    EXPECT_THROW((void)simulate_closed_loop(unit_chain(1, 0.0), RationalTF::gain(1.0), Reference::sine(1, 1), cfg),
                 ConfigError);
    cfg.fs = -1.0;
    EXPECT_THROW((void)simulate_closed_loop(unit_chain(1, 0.0), kPlant, Reference::sine(1, 1), cfg), ConfigError);
    cfg.fs = 20000.0;
    EXPECT_THROW((void)simulate_closed_loop(unit_chain(1, 0.0), kPlant, Reference::sine(0.0, 1), cfg), ConfigError);
    cfg.shaping = true;
    EXPECT_THROW((void)simulate_closed_loop(unit_chain(1, 0.0), kPlant, Reference::sine(1, 1), cfg), ConfigError);
}

TEST(ClosedLoop, DivergenceIsReported) {
    const RationalTF unstable({1.0}, {1.0, -10.0});
    SimConfig        cfg;
    cfg.fs = 2000.0;
    EXPECT_THROW((void)simulate_closed_loop(unit_chain(1, 1.0), unstable, Reference::sine(1.0, 1.0), cfg),
                 NumericalError);
}

TEST(SteadyState, DecayingTransientSettles) {
    const std::int64_t  P   = 100;
    const double        tau = 50.0;
    std::vector<double> e(20 * P);
    for (std::size_t k = 0; k < e.size(); ++k)
        e[k] = std::sin(2.0 * kPi * static_cast<double>(k) / P) + 5.0 * std::exp(-static_cast<double>(k) / tau);
    const auto ss = detect_steady_state(e, P, 0);
    EXPECT_TRUE(ss.settled);
    EXPECT_LE(ss.t_ss, 4 * P);  // 7 tau rounded up to a period boundary
    EXPECT_EQ(ss.t_ss % P, 0);
    EXPECT_EQ(detect_steady_state(e, P, 10).t_ss, 10 * P);
}

TEST(SteadyState, GrowingSignalIsFlagged) {
    const std::int64_t  P = 50;
    std::vector<double> e(12 * P);
    for (std::size_t k = 0; k < e.size(); ++k) e[k] = std::exp(0.01 * static_cast<double>(k)) * std::sin(0.3 * k);
    const auto ss = detect_steady_state(e, P, 3);
    EXPECT_FALSE(ss.settled);
    EXPECT_EQ(ss.t_ss, 3 * P);
}

TEST(StepMetrics, FirstOrderResponse) {
    const double        Ts = 1e-4, tau = 0.01;
    std::vector<double> y(20000);
    for (std::size_t k = 0; k < y.size(); ++k) y[k] = 1.0 - std::exp(-static_cast<double>(k) * Ts / tau);
    const auto m = step_metrics(y, Ts);
    EXPECT_NEAR(m.rise_time, tau * std::log(9.0), 2 * Ts);
    EXPECT_EQ(m.overshoot_pct, 0.0);
    EXPECT_NEAR(m.settling_time, tau * std::log(50.0), 2 * Ts);
    EXPECT_LT(m.ss_error, 1e-6);
    EXPECT_TRUE(m.settled);
}

TEST(StepMetrics, OvershootAndUnsettled) {
    std::vector<double> y = {0.0, 0.5, 1.3, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.1};
    const auto          m = step_metrics(y, 1.0);
    EXPECT_NEAR(m.overshoot_pct, 30.0, 1e-9);
    EXPECT_FALSE(m.settled);
    EXPECT_NEAR(m.ss_error, 0.1, 1e-12);
}

TEST(Disturbance, CalibrationHitsTargetPeak) {
    SimConfig  cfg;
    const auto chain = unit_chain(1, 0.0);
    const double amp = calibrate_disturbance(kPlant, chain, 0.1, cfg);
    cfg.disturbance            = Multisine{};
    cfg.disturbance->amplitude = amp;
    const auto r               = simulate_closed_loop(chain, kPlant, Reference::zero(1.0), cfg);
    double     peak            = 0.0;
    for (auto k = static_cast<std::size_t>(r.t_ss); k < r.y.size(); ++k) peak = std::max(peak, std::abs(r.y[k]));
    EXPECT_NEAR(peak, 0.1, 1e-6);
}

TEST(Seeds, DerivedSeedsDiffer) {
    EXPECT_NE(derive_seed(1, 0, 0), derive_seed(1, 0, 1));
    EXPECT_NE(derive_seed(1, 0, 0), derive_seed(1, 1, 0));
    EXPECT_EQ(derive_seed(5, 2, 3), derive_seed(5, 2, 3));
}
