#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "resetlab/config.hpp"
#include "resetlab/controllers.hpp"
#include "resetlab/csv.hpp"
#include "resetlab/hosidf.hpp"
#include "resetlab/sweep.hpp"

namespace resetlab {

struct CommandReport {
    std::vector<std::filesystem::path> files;
    std::vector<std::string>           notes;    // human-readable diagnostics
    int                                flagged = 0;  // rows carrying a non-settled flag
};

// Controller parts for the closed-loop commands (PI + CgLp with resolved Kp),
// with the shaping filter attached when cfg.shaping is set.
[[nodiscard]] ControllerParts closed_loop_parts(const RunConfig& cfg);
// Parts for the HOSIDF command, according to cfg.hosidf_parts.
[[nodiscard]] ControllerParts hosidf_parts(const RunConfig& cfg);
[[nodiscard]] std::vector<ControllerChain> chains_for(const ControllerParts& parts, const std::vector<int>& ids);

// Disturbance for the closed-loop commands: calibrated on the unshaped
// sequence 1 loop, or nullopt when disabled.
[[nodiscard]] std::optional<Multisine> calibrated_disturbance(const RunConfig& cfg);

[[nodiscard]] std::vector<double> hosidf_grid_hz(const RunConfig& cfg);
[[nodiscard]] std::vector<double> sensitivity_grid_hz(const RunConfig& cfg);

// freq_hz, re, im, mag_db, phase_deg for one stored order.
[[nodiscard]] CsvTable harmonic_table(const HarmonicResponse& resp, int order);

// Rows: freq_hz, sequence_id, s_partial_db, max_control, settled_flag, df_sensitivity_db.
[[nodiscard]] CsvTable sensitivity_table(const std::vector<SensitivityRow>& rows,
                                         const std::vector<ControllerChain>& chains, const RationalTF& plant);

CommandReport cmd_hosidf(const RunConfig& cfg, Execution exec = Execution::parallel);
CommandReport cmd_sensitivity(const RunConfig& cfg, Execution exec = Execution::parallel);
CommandReport cmd_step(const RunConfig& cfg);
CommandReport cmd_compare(const RunConfig& cfg, Execution exec = Execution::parallel);

}  // namespace resetlab
