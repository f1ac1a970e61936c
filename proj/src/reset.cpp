#include "resetlab/reset.hpp"

#include <cmath>
#include <string>

#include "resetlab/errors.hpp"

namespace resetlab {

ResetElement make_reset_element(StateSpace base, double gamma) {
    if (!(gamma >= -1.0 && gamma <= 1.0)) throw ConfigError("reset coefficient gamma must lie in [-1, 1], got " + std::to_string(gamma));
    if (base.order() < 1) throw ConfigError("reset element needs at least one state");
    return ResetElement{std::move(base), gamma};
}

ResetElement make_fore(double omega_r, double gamma) {
    if (!(omega_r > 0.0) || !std::isfinite(omega_r)) throw ConfigError("FORE corner frequency must be positive");
    return make_reset_element(tf_to_ss(RationalTF({1.0}, {1.0 / omega_r, 1.0})), gamma);
}

ResetElement make_clegg(double gamma) {
    StateSpace base(Matrix::Zero(1, 1), Matrix::Ones(1, 1), Matrix::Ones(1, 1), Matrix::Zero(1, 1));
    return make_reset_element(std::move(base), gamma);
}

ResetStepper::ResetStepper(const ResetElement& element, double Ts)
    : n_(element.order()), gamma_(element.gamma), Ts_(Ts), d_(element.base.D(0, 0)) {
    const DiscreteStateSpace dss = discretize(element.base, Ts, Discretization::zoh);
    ad_.resize(static_cast<size_t>(n_) * n_);
    bd_.resize(static_cast<size_t>(n_));
    c_.resize(static_cast<size_t>(n_));
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) ad_[static_cast<size_t>(i) * n_ + j] = dss.Ad(i, j);
        bd_[i] = dss.Bd(i, 0);
        c_[i]  = dss.Cd(0, i);
    }
}

ResetStepOutput ResetStepper::step(ResetSimState& st, double u, double trigger) const {
    if (st.x.size() != static_cast<size_t>(n_)) throw ConfigError("reset state dimension does not match element order");
    ResetStepOutput out;
    if (trigger_crossed(st.prev_trigger, trigger) && st.step_index > st.last_reset_step + 1) {
        for (double& v : st.x) v *= gamma_;
        st.last_reset_step = st.step_index;
        out.reset          = true;
    }
    st.prev_trigger = trigger;

    // n_ <= 4 in practice; a small stack buffer avoids per-sample allocation.
    double next[8];
    std::vector<double> heap;
    double* nx = next;
    if (n_ > 8) {
        heap.resize(static_cast<size_t>(n_));
        nx = heap.data();
    }
    for (int i = 0; i < n_; ++i) {
        double acc = bd_[i] * u;
        for (int j = 0; j < n_; ++j) acc += ad_[static_cast<size_t>(i) * n_ + j] * st.x[j];
        nx[i] = acc;
    }
    double y = d_ * u;
    for (int i = 0; i < n_; ++i) {
        st.x[i] = nx[i];
        y += c_[i] * nx[i];
    }
    out.y = y;
    ++st.step_index;
    return out;
}

ResetStepOutput step(const ResetElement& element, ResetSimState& st, double u, double trigger, double Ts) {
    return ResetStepper(element, Ts).step(st, u, trigger);
}

}  // namespace resetlab
