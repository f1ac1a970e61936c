#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "resetlab/controllers.hpp"
#include "resetlab/lti.hpp"
#include "resetlab/sim.hpp"

namespace resetlab {

enum class KpMode {
    crossover,  // Kp chosen so the DF open loop crosses 0 dB at omega_c
    table,      // Kp taken verbatim from the config
};

enum class HosidfParts {
    fig2,      // FORE with a pure first-order lead and lag
    pi_cglp,   // the PI + CgLp controller used in the closed-loop runs
};

// Everything a command needs. Frequencies are stored in Hz as written in the
// config file; conversion to rad/s happens in the accessors.
struct RunConfig {
    // [plant]
    std::vector<double> plant_num = {1.0};
    std::vector<double> plant_den = {1.077e-4, 0.0049, 4.2218};

    // [controller]
    double omega_c_hz = 100.0;
    double omega_d_hz = 25.0;
    double omega_t_hz = 600.0;
    double omega_i_hz = 10.0;
    double kp         = 3980.0;
    KpMode kp_mode    = KpMode::crossover;
    double gamma      = 0.0;
    double alpha      = 1.62;

    // [shaping]
    bool   shaping       = false;
    double shaping_ratio = 2.0;  // omega_f / omega_c

    // [sweep]
    std::vector<int> sequences           = {1, 2, 3, 4};
    double           hosidf_fmin_hz      = 0.1;
    double           hosidf_fmax_hz      = 1000.0;
    int              hosidf_points       = 0;  // 0: points_per_decade
    int              points_per_decade   = 200;
    double           sens_fmin_hz        = 1.0;
    double           sens_fmax_hz        = 100.0;
    int              sens_points         = 10;

    // [hosidf]
    HosidfParts      hosidf_parts  = HosidfParts::fig2;
    std::vector<int> orders        = {1, 3};
    bool             include_plant = true;

    // [sim]
    double              fs                   = 20000.0;
    int                 settle_periods       = 10;
    int                 measure_periods      = 10;
    double              noise_pct            = 0.1;
    NoiseModel          noise_model          = NoiseModel::uniform;
    std::uint64_t       seed                 = 1;
    int                 repetitions          = 5;
    bool                disturbance          = true;
    double              disturbance_fraction = 0.1;
    std::vector<double> compare_freqs_hz     = {1.0, 5.0, 10.0, 15.0, 20.0};
    std::vector<double> compare_amplitudes   = {100.0, 120.0, 120.0, 150.0, 200.0};
    std::vector<double> compare_noise_pct    = {1.0, 0.83, 0.83, 0.67, 0.5};

    // [step]
    double step_duration_s = 2.0;

    // [output]
    std::string out_dir = "results";
    bool        plots   = true;

    // Throws ConfigError on any value that downstream types would reject.
    void validate() const;

    [[nodiscard]] RationalTF   plant() const;
    // Tuning in rad/s with Kp resolved according to kp_mode.
    [[nodiscard]] TuningParams tuning() const;
    [[nodiscard]] std::optional<ShapingFilter> shaping_filter() const;
    [[nodiscard]] SimConfig    sim_config() const;
};

// Sectioned key = value text. Unknown sections or keys are rejected.
[[nodiscard]] RunConfig parse_config(const std::string& text);
// IoError when the file cannot be read, ConfigError on content.
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);

// Values given on the command line; unset fields leave the config untouched.
struct ConfigOverrides {
    std::optional<std::vector<int>> sequences;
    std::optional<double>           noise_pct;
    std::optional<std::uint64_t>    seed;
    std::optional<bool>             shaping;
    std::optional<std::string>      out_dir;
    std::optional<double>           fmin_hz;
    std::optional<double>           fmax_hz;
    std::optional<int>              points;
};

enum class GridTarget { hosidf, sensitivity };

// --fmin/--fmax/--points apply to the grid of the running command.
void apply_overrides(RunConfig& cfg, const ConfigOverrides& ov, GridTarget grid);

}  // namespace resetlab
