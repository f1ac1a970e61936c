#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "resetlab/controllers.hpp"
#include "resetlab/lti.hpp"
#include "resetlab/reset.hpp"

namespace resetlab {

// ============================================================================
// Signals
// ============================================================================
enum class NoiseModel { uniform, gaussian };

// Equal-amplitude, zero-phase multisine applied at the plant input. The
// amplitude is per unit reference amplitude: the simulator multiplies it by
// the reference amplitude of the run.
struct Multisine {
    std::vector<double> freqs_hz  = {0.5, 1.0, 5.0, 10.0, 20.0, 30.0};
    double              amplitude = 0.0;

    [[nodiscard]] double value(double t) const;
    // Common period of all components (2 s for the default set).
    [[nodiscard]] double fundamental_period() const;
};

struct Reference {
    enum class Kind { sine, step, zero };

    Kind   kind      = Kind::sine;
    double amplitude = 1.0;  // for Kind::zero this only scales noise and disturbance
    double freq_hz   = 1.0;

    static Reference sine(double amplitude, double freq_hz) { return {Kind::sine, amplitude, freq_hz}; }
    static Reference step(double amplitude = 1.0) { return {Kind::step, amplitude, 0.0}; }
    static Reference zero(double scale = 1.0) { return {Kind::zero, scale, 0.0}; }

    [[nodiscard]] double value(double t) const;
};

struct SimConfig {
    double                   fs                = 20000.0;
    int                      settle_periods    = 10;
    int                      measure_periods   = 10;
    double                   noise_fraction    = 0.0;  // noise magnitude relative to the reference amplitude
    NoiseModel               noise_model       = NoiseModel::uniform;
    std::optional<Multisine> disturbance;
    std::uint64_t            seed              = 1;
    bool                     shaping           = false;
    double                   divergence_factor = 1e6;
    bool                     keep_series       = true;
    double                   duration_s        = 0.0;  // step/zero references; 0 picks a default

    void validate() const;
};

// Independent stream seed for (base seed, a, b), e.g. (seed, frequency index,
// repetition). SplitMix64 finalizer.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b);

// ============================================================================
// Controller chain runner: C_L1 -> reset element -> C_L2, Tustin for the
// linear parts, ZOH for the reset base. With shaping enabled the reset trigger
// is the shaping filter applied to the reset element's input.
// ============================================================================
class ChainRunner {
   public:
    ChainRunner(const ControllerChain& chain, double Ts, bool use_shaping);

    double step(double input);

    [[nodiscard]] bool                 last_step_reset() const { return last_reset_; }
    [[nodiscard]] const ResetSimState& reset_state() const { return reset_state_; }
    [[nodiscard]] double               last_trigger() const { return last_trigger_; }

   private:
    DiscreteFilter                cl1_;
    DiscreteFilter                cl2_;
    std::optional<DiscreteFilter> shaping_;
    ResetStepper                  reset_;
    ResetSimState                 reset_state_;
    bool                          last_reset_   = false;
    double                        last_trigger_ = 0.0;
};

// ============================================================================
// Closed loop: e = r - (y + n), u = C(e), plant input u + d.
// ============================================================================
struct SimResult {
    std::vector<double>       e, u, y;  // empty unless SimConfig::keep_series
    std::vector<std::int64_t> reset_indices;
    std::vector<double>       period_max_error;    // max |e| per analysis period
    std::vector<double>       period_max_control;  // max |u| per analysis period
    std::int64_t              samples        = 0;
    std::int64_t              period_samples = 0;
    std::int64_t              t_ss           = 0;  // sample index
    bool                      settled        = false;
    double                    max_abs_error   = 0.0;  // over t >= t_ss
    double                    max_abs_control = 0.0;  // over t >= t_ss
    double                    reference_amplitude = 0.0;
    double                    Ts = 0.0;
};

// The plant must be strictly proper. Throws NumericalError when |y| exceeds
// divergence_factor times the reference amplitude.
[[nodiscard]] SimResult simulate_closed_loop(const ControllerChain& chain, const RationalTF& plant,
                                             const Reference& reference, const SimConfig& cfg);

struct SteadyState {
    std::int64_t t_ss    = 0;
    bool         settled = false;
};

// Earliest period boundary b >= settle_periods after which consecutive
// per-period maxima of |e| differ by less than 1% relative. Falls back to the
// settle_periods boundary with settled = false.
[[nodiscard]] SteadyState detect_steady_state(std::span<const double> e, std::int64_t period_samples,
                                              int settle_periods);
[[nodiscard]] SteadyState detect_steady_state_from_maxima(std::span<const double> period_maxima,
                                                          std::int64_t period_samples, int settle_periods);

[[nodiscard]] double max_control_input(const SimResult& res);

struct SensitivityPoint {
    double freq_hz     = 0.0;
    double s_partial   = 0.0;  // max |e| / r over t >= t_ss
    double max_control = 0.0;
    bool   settled     = false;
};

[[nodiscard]] SensitivityPoint pseudo_sensitivity_point(const ControllerChain& chain, const RationalTF& plant,
                                                        double freq_hz, double amplitude, const SimConfig& cfg);

[[nodiscard]] std::vector<SensitivityPoint> pseudo_sensitivity(const ControllerChain& chain, const RationalTF& plant,
                                                               const std::vector<double>& freqs_hz, double amplitude,
                                                               const SimConfig& cfg);

// ============================================================================
// Step response
// ============================================================================
struct StepMetrics {
    double rise_time     = 0.0;  // 10% -> 90% of the step, s
    double overshoot_pct = 0.0;
    double settling_time = 0.0;  // last exit from the 2% band, s
    double ss_error      = 0.0;  // max |e| over the final 10% of the record
    bool   settled       = false;
};

[[nodiscard]] StepMetrics step_metrics(std::span<const double> y, double Ts, double target = 1.0);

struct StepResult {
    SimResult   sim;
    StepMetrics metrics;
};

// Unit step, noise and disturbance forced off. Duration from cfg.duration_s
// (default 2 s).
[[nodiscard]] StepResult simulate_step(const ControllerChain& chain, const RationalTF& plant, const SimConfig& cfg);

// Multisine amplitude (per unit reference) giving closed-loop max |y| equal to
// target_fraction of the reference amplitude with r = 0 and no noise.
[[nodiscard]] double calibrate_disturbance(const RationalTF& plant, const ControllerChain& chain,
                                           double target_fraction, const SimConfig& cfg);

}  // namespace resetlab
