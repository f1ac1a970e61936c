#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "resetlab/lti.hpp"

namespace resetlab {

// Linear base system (A_r, B_r, C_r, D_r) whose state jumps x -> gamma * x
// whenever the reset trigger crosses zero. gamma = 1 disables resetting.
struct ResetElement {
    StateSpace base;
    double     gamma = 0.0;

    [[nodiscard]] int    order() const { return base.order(); }
    [[nodiscard]] Matrix reset_matrix() const { return gamma * Matrix::Identity(order(), order()); }
};

// Validates gamma in [-1, 1] and order >= 1.
[[nodiscard]] ResetElement make_reset_element(StateSpace base, double gamma);

// First-order reset element with base 1/(s/omega_r + 1).
[[nodiscard]] ResetElement make_fore(double omega_r, double gamma);

// Integrator base 1/s: A_r = 0, B_r = 1, C_r = 1, D_r = 0.
[[nodiscard]] ResetElement make_clegg(double gamma);

inline constexpr std::int64_t kNeverReset = std::numeric_limits<std::int64_t>::min() / 2;

struct ResetSimState {
    std::vector<double> x;
    std::int64_t        step_index      = 0;  // index of the next sample to be processed
    std::int64_t        last_reset_step = kNeverReset;
    double              prev_trigger    = 0.0;

    static ResetSimState zero(int order) { return ResetSimState{std::vector<double>(static_cast<size_t>(order), 0.0)}; }
};

// Sign change between consecutive trigger samples. An exact zero counts as a
// crossing; a previous sample of exactly zero never does.
[[nodiscard]] inline bool trigger_crossed(double prev, double curr) { return prev != 0.0 && prev * curr <= 0.0; }

struct ResetStepOutput {
    double y     = 0.0;
    bool   reset = false;
};

// ZOH-discretized reset element, ready for sample-by-sample stepping.
//
// Per sample k: if the trigger crossed zero and k > last_reset + 1, the state
// is scaled by gamma; then x <- Ad x + Bd u; then y = C x + D u.
class ResetStepper {
   public:
    ResetStepper() = default;
    ResetStepper(const ResetElement& element, double Ts);

    ResetStepOutput step(ResetSimState& st, double u, double trigger) const;

    [[nodiscard]] int    order() const { return n_; }
    [[nodiscard]] double gamma() const { return gamma_; }
    [[nodiscard]] double Ts() const { return Ts_; }

   private:
    int                 n_     = 0;
    double              gamma_ = 1.0;
    double              Ts_    = 0.0;
    std::vector<double> ad_;
    std::vector<double> bd_;
    std::vector<double> c_;
    double              d_ = 0.0;
};

// One-shot step; discretizes on every call, so prefer ResetStepper in loops.
ResetStepOutput step(const ResetElement& element, ResetSimState& st, double u, double trigger, double Ts);

}  // namespace resetlab
