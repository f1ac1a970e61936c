#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "resetlab/lti.hpp"
#include "resetlab/reset.hpp"

namespace resetlab {

// PI + CgLp tuning. All frequencies in rad/s. The reset corner is derived,
// omega_r = omega_d / alpha, so the correction-factor relation always holds.
struct TuningParams {
    double omega_c = hz_to_rad(100.0);  // bandwidth
    double omega_d = hz_to_rad(25.0);   // lead corner
    double omega_t = hz_to_rad(600.0);  // lead taming
    double omega_i = hz_to_rad(10.0);   // integrator corner
    double kp      = 3980.0;
    double gamma   = 0.0;
    double alpha   = 1.62;

    [[nodiscard]] double omega_r() const { return omega_d / alpha; }

    // Throws ConfigError unless 0 < omega_d < omega_c < omega_t, alpha > 0,
    // omega_i > 0 and gamma in [-1, 1].
    void validate() const;

    static TuningParams table2() { return {}; }
};

[[nodiscard]] RationalTF make_pi(double kp, double omega_i);              // kp (1 + omega_i / s)
[[nodiscard]] RationalTF make_lead(double omega_d, double omega_t);       // (s/omega_d + 1) / (s/omega_t + 1)

struct CgLp {
    ResetElement fore;  // FORE at omega_r = omega_d / alpha
    RationalTF   lead;  // D(s)
};
[[nodiscard]] CgLp make_cglp(const TuningParams& params);

// ----------------------------------------------------------------------------
// Shaping filter on the reset-trigger path: LPF times a tamed lead centred on
// the bandwidth, with a chosen so the lead cancels the LPF phase at omega_c.
// ----------------------------------------------------------------------------
struct ShapingFilter {
    double     omega_c = 0.0;
    double     omega_f = 0.0;
    double     a       = 1.0;
    RationalTF tf      = RationalTF::gain(1.0);
};

// a = tan(pi/4 + atan(omega_c / omega_f) / 2), the closed-form root of
// atan(a) - atan(1/a) = atan(omega_c / omega_f).
[[nodiscard]] double shaping_constant(double omega_c, double omega_f);
[[nodiscard]] double shaping_residual(double a, double omega_c, double omega_f);
[[nodiscard]] ShapingFilter design_shaping_filter(double omega_c, double omega_f);
[[nodiscard]] double phase_at(const ShapingFilter& sf, double omega);

// ----------------------------------------------------------------------------
// Sequences
// ----------------------------------------------------------------------------
struct ControllerParts {
    RationalTF                   lead;
    RationalTF                   lag;
    ResetElement                 reset;
    std::optional<ShapingFilter> shaping;
};

// 1: Lead-Reset-Lag, 2: Lag-Reset-Lead, 3: Reset-Lead-Lag, 4: Lead-Lag-Reset.
inline constexpr std::array<int, 4> kAllSequences = {1, 2, 3, 4};

[[nodiscard]] std::string_view sequence_name(int id);

struct ControllerChain {
    ControllerParts parts;
    int             sequence_id = 1;
    RationalTF      cl1         = RationalTF::gain(1.0);  // linear part before the reset element
    RationalTF      cl2         = RationalTF::gain(1.0);  // linear part after the reset element

    [[nodiscard]] const ResetElement& reset() const { return parts.reset; }
    [[nodiscard]] const std::optional<ShapingFilter>& shaping() const { return parts.shaping; }
};

[[nodiscard]] ControllerChain arrange_sequence(const ControllerParts& parts, int id);

// PI (lag) + CgLp lead D (lead) + FORE (reset).
[[nodiscard]] ControllerParts make_pi_cglp_parts(const TuningParams& params,
                                                 std::optional<ShapingFilter> shaping = std::nullopt);

// FORE with pure first-order lead (1 + s/omega_d) and lag (1 + omega_i/s).
// The lead is improper; the parts are only meant for frequency analysis.
[[nodiscard]] ControllerParts make_simple_parts(double omega_r, double omega_d, double omega_i, double gamma);

}  // namespace resetlab
