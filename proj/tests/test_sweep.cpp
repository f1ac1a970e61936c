#include <gtest/gtest.h>

#include "resetlab/errors.hpp"
#include "resetlab/sweep.hpp"

using namespace resetlab;

namespace {

const RationalTF kPlant({1.0}, {1.077e-4, 0.0049, 4.2218});

std::vector<ControllerChain> all_chains() {
    TuningParams t;
    t.kp = 40.0;
    std::vector<ControllerChain> out;
    for (int id : kAllSequences) out.push_back(arrange_sequence(make_pi_cglp_parts(t), id));
    return out;
}

}  // namespace

TEST(Sweep, OpenLoopSerialEqualsParallel) {
    const auto w  = log_grid(1.0, 1e4, 300);
    const auto ch = all_chains();
    for (const auto& c : ch) {
        const auto a = open_loop_response(c, kPlant, w, {1, 3, 5}, Execution::serial);
        const auto b = open_loop_response(c, kPlant, w, {1, 3, 5}, Execution::parallel);
        EXPECT_EQ(a.values, b.values);
        EXPECT_EQ(a.at(17, 3), open_loop_hosidf(c, kPlant, w[17], 3));
    }
}

TEST(Sweep, ElementAndOracleSerialEqualsParallel) {
    const auto fore = make_fore(hz_to_rad(15.43), 0.0);
    const auto w    = log_grid(hz_to_rad(1.0), hz_to_rad(300.0), 6);
    const auto sf   = design_shaping_filter(hz_to_rad(100.0), hz_to_rad(200.0));
    EXPECT_EQ(element_response(fore, w, {1, 3}, sf, Execution::serial).values,
              element_response(fore, w, {1, 3}, sf, Execution::parallel).values);
    const auto a = oracle_sweep(fore, w, OracleOptions{}, Execution::serial);
    const auto b = oracle_sweep(fore, w, OracleOptions{}, Execution::parallel);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].gains, b[i].gains);
}

TEST(Sweep, SensitivitySerialEqualsParallelAndAverages) {
    SimConfig cfg;
    cfg.settle_periods  = 2;
    cfg.measure_periods = 2;
    cfg.seed            = 11;
    const std::vector<SweepPoint> pts = {{5.0, 1.0, 0.01}, {30.0, 2.0, 0.02}};
    const auto                    ch  = all_chains();
    const auto a = sensitivity_sweep(ch, kPlant, pts, cfg, 2, Execution::serial);
    const auto b = sensitivity_sweep(ch, kPlant, pts, cfg, 2, Execution::parallel);
    ASSERT_EQ(a.size(), 8u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].s_partial, b[i].s_partial);
        EXPECT_EQ(a[i].max_control, b[i].max_control);
        EXPECT_EQ(a[i].settled, b[i].settled);
    }
    // row 0 is the mean of the two repetitions for (point 0, sequence 1)
    SimConfig c0 = cfg;
    c0.noise_fraction = 0.01;
    c0.seed           = derive_seed(cfg.seed, 0, 0);
    const auto r0     = pseudo_sensitivity_point(ch[0], kPlant, 5.0, 1.0, c0);
    c0.seed           = derive_seed(cfg.seed, 0, 1);
    const auto r1     = pseudo_sensitivity_point(ch[0], kPlant, 5.0, 1.0, c0);
    EXPECT_DOUBLE_EQ(a[0].s_partial, (r0.s_partial + r1.s_partial) / 2.0);
    EXPECT_EQ(a[0].sequence_id, 1);
    EXPECT_EQ(a[5].sequence_id, 2);
    EXPECT_THROW((void)sensitivity_sweep(ch, kPlant, pts, cfg, 0), ConfigError);
}

TEST(Sweep, ErrorsInsideParallelRegionPropagate) {
    const auto fore = make_fore(10.0, 0.0);
    OracleOptions opt;
    opt.fs = 50.0;  // too low for the upper frequencies
    EXPECT_THROW((void)oracle_sweep(fore, {1.0, 100.0, 1000.0}, opt, Execution::parallel), ConfigError);
}
