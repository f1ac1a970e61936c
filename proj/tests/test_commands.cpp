#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "resetlab/commands.hpp"
#include "resetlab/errors.hpp"

using namespace resetlab;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "resetlab_cmd_tests" / name;
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream      in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig quick_config(const std::string& dir) {
    RunConfig c;
    c.out_dir          = dir;
    c.plots            = false;
    c.sequences        = {1, 2};
    c.repetitions      = 1;
    c.settle_periods   = 2;
    c.measure_periods  = 2;
    c.sens_fmin_hz     = 10.0;
    c.sens_fmax_hz     = 40.0;
    c.sens_points      = 2;
    c.compare_freqs_hz = {10.0, 20.0};
    c.compare_amplitudes = {1.0, 2.0};
    c.compare_noise_pct  = {1.0, 0.5};
    c.step_duration_s    = 0.3;
    return c;
}

}  // namespace

TEST(CmdHosidf, DefaultWritesEightTablesWithExpectedStructure) {
    RunConfig c;
    c.out_dir = fresh_dir("hosidf").string();
    c.plots   = false;
    const auto rep = cmd_hosidf(c);
    ASSERT_EQ(rep.files.size(), 8u);

    std::vector<CsvTable> n1, n3;
    for (int id = 1; id <= 4; ++id) {
        n1.push_back(read_csv(fs::path(c.out_dir) / ("hosidf_seq" + std::to_string(id) + "_n1.csv")));
        n3.push_back(read_csv(fs::path(c.out_dir) / ("hosidf_seq" + std::to_string(id) + "_n3.csv")));
    }
    EXPECT_EQ(n1[0].header, (std::vector<std::string>{"freq_hz", "re", "im", "mag_db", "phase_deg"}));
    EXPECT_EQ(n1[0].rows.size(), 801u);
    for (std::size_t r = 0; r < n1[0].rows.size(); ++r) {
        const Complex ref{n1[0].number(r, "re"), n1[0].number(r, "im")};
        for (int s = 1; s < 4; ++s) {
            const Complex v{n1[s].number(r, "re"), n1[s].number(r, "im")};
            EXPECT_LE(std::abs(v - ref), 1e-12 * std::abs(ref));
        }
        const double m1 = n3[0].number(r, "mag_db");
        for (int s = 1; s < 4; ++s) EXPECT_LE(m1, n3[s].number(r, "mag_db"));
    }
}

TEST(CmdHosidf, ShapingAddsElementTablesAndPlots) {
    RunConfig c;
    c.out_dir       = fresh_dir("hosidf_shaping").string();
    c.shaping       = true;
    c.hosidf_points = 20;
    const auto rep  = cmd_hosidf(c);
    EXPECT_TRUE(fs::exists(fs::path(c.out_dir) / "fore_shaped_n3.csv"));
    EXPECT_TRUE(fs::exists(fs::path(c.out_dir) / "fore_shaping.svg"));
    EXPECT_TRUE(fs::exists(fs::path(c.out_dir) / "hosidf_n1.svg"));
    EXPECT_EQ(rep.files.size(), 8u + 4u + 1u + 2u);
}

TEST(CmdSensitivity, ColumnsAndFlagsKept) {
    auto c     = quick_config(fresh_dir("sens").string());
    const auto rep = cmd_sensitivity(c);
    const auto t   = read_csv(fs::path(c.out_dir) / "sensitivity.csv");
    EXPECT_EQ(t.header, (std::vector<std::string>{"freq_hz", "sequence_id", "s_partial_db", "max_control",
                                                   "settled_flag", "df_sensitivity_db"}));
    EXPECT_EQ(t.rows.size(), 4u);
    int unsettled = 0;
    for (std::size_t r = 0; r < t.rows.size(); ++r) unsettled += t.rows[r][4] == "0";
    EXPECT_EQ(unsettled, rep.flagged);
}

TEST(CmdStep, MetricsTableAndSeries) {
    auto c = quick_config(fresh_dir("step").string());
    (void)cmd_step(c);
    const auto m = read_csv(fs::path(c.out_dir) / "step_metrics.csv");
    EXPECT_EQ(m.rows.size(), 2u);
    EXPECT_EQ(m.column("overshoot_pct"), 2u);
    const auto s = read_csv(fs::path(c.out_dir) / "step_seq1.csv");
    EXPECT_EQ(s.rows.size(), 6000u);
}

TEST(CmdCompare, DeterministicAcrossRerunsAndExecutionModes) {
    auto a = quick_config(fresh_dir("cmp_a").string());
    auto b = quick_config(fresh_dir("cmp_b").string());
    (void)cmd_compare(a, Execution::parallel);
    (void)cmd_compare(b, Execution::serial);
    for (const char* f : {"compare.csv", "compare_rank.csv"})
        EXPECT_EQ(slurp(fs::path(a.out_dir) / f), slurp(fs::path(b.out_dir) / f)) << f;
    (void)cmd_compare(a, Execution::parallel);
    EXPECT_EQ(slurp(fs::path(a.out_dir) / "compare.csv"), slurp(fs::path(b.out_dir) / "compare.csv"));

    const auto rank = read_csv(fs::path(a.out_dir) / "compare_rank.csv");
    EXPECT_EQ(rank.header, (std::vector<std::string>{"frequency_hz", "sequence_id", "error_rank", "control_rank"}));
    EXPECT_EQ(rank.rows.size(), 4u);
}

TEST(Commands, UnwritableOutputIsAnIoError) {
    const auto dir = fresh_dir("blocked");
    fs::create_directories(dir.parent_path());
    std::ofstream(dir) << "not a directory";
    RunConfig c;
    c.out_dir = (dir / "sub").string();
    EXPECT_THROW((void)cmd_hosidf(c), IoError);
}
