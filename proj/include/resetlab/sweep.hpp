#pragma once

#include <cstdint>
#include <vector>

#include "resetlab/controllers.hpp"
#include "resetlab/hosidf.hpp"
#include "resetlab/lti.hpp"
#include "resetlab/oracle.hpp"
#include "resetlab/sim.hpp"

namespace resetlab {

// Every sweep has a plain serial loop and an OpenMP loop over the same kernel.
// Results are written by index, so both give bitwise identical output.
enum class Execution { serial, parallel };

// L_n(jw) for each grid point and order.
[[nodiscard]] HarmonicResponse open_loop_response(const ControllerChain& chain, const RationalTF& plant,
                                                  const std::vector<double>& omegas, const std::vector<int>& orders,
                                                  Execution exec = Execution::parallel);

// H_n(jw) of the reset element; with a shaping filter the shaped form is used.
[[nodiscard]] HarmonicResponse element_response(const ResetElement& re, const std::vector<double>& omegas,
                                                const std::vector<int>& orders,
                                                const std::optional<ShapingFilter>& shaping = std::nullopt,
                                                Execution exec = Execution::parallel);

[[nodiscard]] std::vector<HarmonicSlice> oracle_sweep(const ResetElement& re, const std::vector<double>& omegas,
                                                      const OracleOptions& opt,
                                                      Execution exec = Execution::parallel);

struct SweepPoint {
    double freq_hz        = 1.0;
    double amplitude      = 1.0;
    double noise_fraction = 0.0;
};

struct SensitivityRow {
    double freq_hz        = 0.0;
    int    sequence_id    = 0;
    double s_partial      = 0.0;  // mean over repetitions
    double max_control    = 0.0;  // mean over repetitions
    bool   settled        = false;  // every repetition settled
    int    repetitions    = 0;
};

// One row per (point, chain), point-major. Repetition r of point i uses
// derive_seed(base.seed, i, r) for every chain, so sequences are compared on
// identical noise realizations.
[[nodiscard]] std::vector<SensitivityRow> sensitivity_sweep(const std::vector<ControllerChain>& chains,
                                                            const RationalTF& plant,
                                                            const std::vector<SweepPoint>& points,
                                                            const SimConfig& base, int repetitions,
                                                            Execution exec = Execution::parallel);

}  // namespace resetlab
