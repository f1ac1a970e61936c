#pragma once

#include <cstddef>
#include <vector>

#include "resetlab/controllers.hpp"
#include "resetlab/lti.hpp"
#include "resetlab/reset.hpp"

namespace resetlab {

// ============================================================================
// Describing functions of reset elements
// ============================================================================

// (2/pi) (I + E)(I + Arho E)^-1 (I - Arho)((A/w)^2 + I)^-1 with E = exp(pi A / w).
// Throws NumericalError (naming omega) when either inverse does not exist.
[[nodiscard]] Matrix theta_rho(const ResetElement& re, double omega);

// C (jwI - A)^-1 (I + j Theta) B + D
[[nodiscard]] Complex df(const ResetElement& re, double omega);

// n = 1: df; odd n >= 3: C (jnwI - A)^-1 j Theta B; even n: exactly zero.
[[nodiscard]] Complex hosidf(const ResetElement& re, double omega, int n);

// Theta_s = Theta (-A sin(phi) + w cos(phi) I) / w
[[nodiscard]] Matrix theta_shaped(const ResetElement& re, double phi, double omega);

// HOSIDF when the reset instants are set by a trigger leading the element
// input by phi (the shaping-filter phase at the fundamental).
[[nodiscard]] Complex hosidf_shaped(const ResetElement& re, double phi, double omega, int n);

// Element HOSIDF inside a chain: shaped when the chain carries a shaping filter.
[[nodiscard]] Complex chain_reset_hosidf(const ControllerChain& chain, double omega, int n);

// C_L1(jw) H_n(jw) C_L2(njw) G(njw)
[[nodiscard]] Complex open_loop_hosidf(const ControllerChain& chain, const RationalTF& plant, double omega, int n);

// 1 / (1 + L1); NumericalError when |1 + L1| < 1e-300.
[[nodiscard]] Complex df_sensitivity(Complex L1);

// ============================================================================
// Harmonic tables
// ============================================================================
struct HarmonicResponse {
    std::vector<double>  freqs;   // rad/s, strictly increasing
    std::vector<int>     orders;  // harmonic orders stored
    std::vector<Complex> values;  // row-major: freqs.size() x orders.size()

    // Value at (freq index, order). Even orders are exactly zero whether or
    // not they were stored; an odd order that was not stored throws.
    [[nodiscard]] Complex at(std::size_t freq_index, int n) const;
};

// Validates the grid (positive, strictly increasing) and the orders (>= 1).
void validate_grid(const std::vector<double>& omegas);
void validate_orders(const std::vector<int>& orders);

[[nodiscard]] std::vector<double> log_grid(double lo, double hi, std::size_t points);
[[nodiscard]] std::vector<double> log_grid_per_decade(double lo, double hi, std::size_t per_decade);

// ============================================================================
// DF loop analysis
// ============================================================================
struct LoopMargins {
    bool   found            = false;
    double crossover        = 0.0;  // rad/s, first downward 0 dB crossing of |L1|
    double phase_margin_deg = 0.0;  // 180 + arg L1 at crossover, wrapped to (-180, 180]
};

[[nodiscard]] LoopMargins df_margins(const ControllerChain& chain, const RationalTF& plant, double omega_lo,
                                     double omega_hi, std::size_t grid_points = 4000);

// Kp such that |L1(j omega_c)| = 1 for the PI + CgLp loop. L1 is linear in Kp
// and identical for all four sequences.
[[nodiscard]] double tune_kp_for_crossover(const TuningParams& params, const RationalTF& plant);

}  // namespace resetlab
