#pragma once

#include <vector>

#include "resetlab/controllers.hpp"
#include "resetlab/lti.hpp"
#include "resetlab/reset.hpp"

namespace resetlab {

// Time-domain check on the describing-function formulas: drive the system
// with amplitude * sin(w t), discard the first half of the record, and take
// the DFT over the remaining whole periods. Gains are normalized by the input
// amplitude, so gains[n - 1] is directly comparable with H_n(jw).
struct OracleOptions {
    double amplitude = 1.0;
    int    n_max     = 5;
    double fs        = 20000.0;  // Hz
    int    periods   = 40;
};

struct HarmonicSlice {
    double               omega = 0.0;
    std::vector<Complex> gains;              // harmonics 1..n_max
    int                  samples_per_period = 0;
    double               fs_used            = 0.0;  // grid rate actually used (>= requested fs)
    int                  reset_count        = 0;

    [[nodiscard]] Complex gain(int n) const { return gains.at(static_cast<size_t>(n - 1)); }
};

// Reset element alone. The trigger is sin(w t + trigger_phase), so a nonzero
// phase reproduces a shaping filter's lead or lag at the fundamental.
//
// Between samples the state is propagated exactly for the sinusoidal input,
// and the grid is aligned with the trigger zero crossings (even number of
// samples per period), so resets happen at their exact instants. The known
// state jumps are removed with a sawtooth correction before the DFT, which
// keeps aliasing from the output discontinuities out of the estimates.
//
// Throws ConfigError when fs < 4 f n_max or periods < 20, and NumericalError
// when the last two periods give first-harmonic estimates more than 0.5% apart.
[[nodiscard]] HarmonicSlice harmonic_oracle(const ResetElement& re, double omega, const OracleOptions& opt,
                                            double trigger_phase = 0.0);

// Whole chain and plant, stepped with the same discretized blocks as the
// closed-loop simulator (Tustin controllers, ZOH reset base and plant). The
// output is the plant output. Requires fs >= 100 f n_max.
[[nodiscard]] HarmonicSlice harmonic_oracle(const ControllerChain& chain, const RationalTF& plant, double omega,
                                            const OracleOptions& opt);

}  // namespace resetlab
