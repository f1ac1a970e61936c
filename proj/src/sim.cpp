#include "resetlab/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "resetlab/errors.hpp"

namespace resetlab {

// ----------------------------------------------------------------------------
// Signals
// ----------------------------------------------------------------------------
double Multisine::value(double t) const {
    double v = 0.0;
    for (double f : freqs_hz) v += std::sin(2.0 * kPi * f * t);
    return amplitude * v;
}

double Multisine::fundamental_period() const {
    if (freqs_hz.empty()) return 0.0;
    // Frequencies are taken on a 1 mHz lattice; the common period is 1/gcd.
    std::int64_t g = 0;
    for (double f : freqs_hz) {
        const auto q = static_cast<std::int64_t>(std::llround(f * 1000.0));
        if (q <= 0) throw ConfigError("disturbance frequencies must be positive");
        g = std::gcd(g, q);
    }
    return 1000.0 / static_cast<double>(g);
}

double Reference::value(double t) const {
    switch (kind) {
        case Kind::sine: return amplitude * std::sin(2.0 * kPi * freq_hz * t);
        case Kind::step: return amplitude;
        case Kind::zero: return 0.0;
    }
    return 0.0;
}

void SimConfig::validate() const {
    if (!(fs > 0.0) || !std::isfinite(fs)) throw ConfigError("sample rate must be positive");
    if (settle_periods < 0) throw ConfigError("settle_periods must be >= 0");
    if (measure_periods < 1) throw ConfigError("measure_periods must be >= 1");
    if (!(noise_fraction >= 0.0) || !std::isfinite(noise_fraction)) throw ConfigError("noise level must be >= 0");
    if (!(divergence_factor > 0.0)) throw ConfigError("divergence factor must be positive");
    if (duration_s < 0.0) throw ConfigError("duration must be >= 0");
    if (disturbance) {
        if (!(disturbance->amplitude >= 0.0) || !std::isfinite(disturbance->amplitude))
            throw ConfigError("disturbance amplitude must be >= 0");
        (void)disturbance->fundamental_period();
    }
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(mix(base) ^ a) ^ b);
}

namespace {

class NoiseSource {
   public:
    NoiseSource(std::uint64_t seed, NoiseModel model, double magnitude)
        : gen_(seed), model_(model), magnitude_(magnitude) {}

    double next() {
        if (magnitude_ == 0.0) return 0.0;
        if (model_ == NoiseModel::uniform) return magnitude_ * (2.0 * uniform() - 1.0);
        if (has_spare_) {
            has_spare_ = false;
            return magnitude_ * spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r  = std::sqrt(-2.0 * std::log(u1));
        spare_          = r * std::sin(2.0 * kPi * u2);
        has_spare_      = true;
        return magnitude_ * r * std::cos(2.0 * kPi * u2);
    }

   private:
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 gen_;
    NoiseModel      model_;
    double          magnitude_;
    double          spare_     = 0.0;
    bool            has_spare_ = false;
};

bool disturbance_active(const SimConfig& cfg) { return cfg.disturbance && cfg.disturbance->amplitude > 0.0; }

struct Timing {
    std::int64_t period_samples = 0;
    std::int64_t settle_blocks  = 0;
    std::int64_t blocks         = 0;
};

Timing plan_timing(const Reference& ref, const SimConfig& cfg) {
    Timing tm;
    const double d_period = disturbance_active(cfg) ? cfg.disturbance->fundamental_period() : 0.0;
    if (ref.kind == Reference::Kind::sine) {
        if (!(ref.freq_hz > 0.0)) throw ConfigError("reference frequency must be positive");
        const double T_ref = 1.0 / ref.freq_hz;
        double       T_a   = T_ref;
        if (d_period > T_ref) T_a = T_ref * std::ceil(d_period / T_ref - 1e-9);
        tm.period_samples = std::max<std::int64_t>(1, std::llround(T_a * cfg.fs));
        tm.settle_blocks  = static_cast<std::int64_t>(std::ceil(cfg.settle_periods * T_ref / T_a - 1e-9));
        std::int64_t measure = static_cast<std::int64_t>(std::ceil(cfg.measure_periods * T_ref / T_a - 1e-9));
        if (d_period > 0.0) measure = std::max<std::int64_t>(measure, 2);
        tm.blocks = tm.settle_blocks + std::max<std::int64_t>(measure, 1);
        return tm;
    }
    if (ref.kind == Reference::Kind::step) {
        const double dur  = cfg.duration_s > 0.0 ? cfg.duration_s : 2.0;
        tm.period_samples = std::max<std::int64_t>(1, std::llround(dur * cfg.fs));
        tm.settle_blocks  = 0;
        tm.blocks         = 1;
        return tm;
    }
    // Zero reference: one settling block and two measured blocks of the
    // disturbance period, unless a duration is given.
    const double T_a  = d_period > 0.0 ? d_period : 1.0;
    tm.period_samples = std::max<std::int64_t>(1, std::llround(T_a * cfg.fs));
    if (cfg.duration_s > 0.0) {
        tm.blocks        = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(cfg.duration_s / T_a)));
        tm.settle_blocks = tm.blocks / 3;
    } else {
        tm.settle_blocks = 1;
        tm.blocks        = 3;
    }
    return tm;
}

}  // namespace

// ----------------------------------------------------------------------------
// ChainRunner
// ----------------------------------------------------------------------------
ChainRunner::ChainRunner(const ControllerChain& chain, double Ts, bool use_shaping)
    : cl1_(discretize(tf_to_ss(chain.cl1), Ts, Discretization::tustin)),
      cl2_(discretize(tf_to_ss(chain.cl2), Ts, Discretization::tustin)),
      reset_(chain.reset(), Ts),
      reset_state_(ResetSimState::zero(chain.reset().order())) {
    if (use_shaping) {
        if (!chain.shaping()) throw ConfigError("shaping requested but the chain has no shaping filter");
        shaping_.emplace(discretize(tf_to_ss(chain.shaping()->tf), Ts, Discretization::tustin));
    }
}

double ChainRunner::step(double input) {
    const double v   = cl1_.step(input);
    last_trigger_    = shaping_ ? shaping_->step(v) : v;
    const auto out   = reset_.step(reset_state_, v, last_trigger_);
    last_reset_      = out.reset;
    return cl2_.step(out.y);
}

// ----------------------------------------------------------------------------
// Closed loop
// ----------------------------------------------------------------------------
SimResult simulate_closed_loop(const ControllerChain& chain, const RationalTF& plant, const Reference& reference,
                               const SimConfig& cfg) {
    cfg.validate();
    if (!plant.is_strictly_proper()) throw ConfigError("closed-loop plant must be strictly proper");
    if (!(reference.amplitude > 0.0) || !std::isfinite(reference.amplitude))
        throw ConfigError("reference amplitude must be positive");

    const Timing       tm = plan_timing(reference, cfg);
    const std::int64_t N  = tm.period_samples * tm.blocks;
    const double       Ts = 1.0 / cfg.fs;

    ChainRunner    runner(chain, Ts, cfg.shaping);
    DiscreteFilter g(discretize(tf_to_ss(plant), Ts, Discretization::zoh));
    NoiseSource    noise(cfg.seed, cfg.noise_model, cfg.noise_fraction * reference.amplitude);
    const double   d_scale = reference.amplitude;
    const bool     use_d   = disturbance_active(cfg);
    const double   limit   = cfg.divergence_factor * reference.amplitude;

    SimResult res;
    res.samples             = N;
    res.period_samples      = tm.period_samples;
    res.reference_amplitude = reference.amplitude;
    res.Ts                  = Ts;
    res.period_max_error.assign(static_cast<size_t>(tm.blocks), 0.0);
    res.period_max_control.assign(static_cast<size_t>(tm.blocks), 0.0);
    if (cfg.keep_series) {
        res.e.resize(static_cast<size_t>(N));
        res.u.resize(static_cast<size_t>(N));
        res.y.resize(static_cast<size_t>(N));
    }

    for (std::int64_t k = 0; k < N; ++k) {
        const double t = static_cast<double>(k) * Ts;
        const double y = g.state_output();
        if (!(std::abs(y) <= limit))
            throw NumericalError("closed loop diverged (|y| > " + std::to_string(limit) + ") at t = " +
                                 std::to_string(t) + " s, sequence " + std::to_string(chain.sequence_id));
        const double e = reference.value(t) - (y + noise.next());
        const double u = runner.step(e);
        if (runner.last_step_reset()) res.reset_indices.push_back(k);
        const double d = use_d ? d_scale * cfg.disturbance->value(t) : 0.0;
        (void)g.step(u + d);

        const auto b = static_cast<size_t>(k / tm.period_samples);
        res.period_max_error[b]   = std::max(res.period_max_error[b], std::abs(e));
        res.period_max_control[b] = std::max(res.period_max_control[b], std::abs(u));
        if (cfg.keep_series) {
            res.e[static_cast<size_t>(k)] = e;
            res.u[static_cast<size_t>(k)] = u;
            res.y[static_cast<size_t>(k)] = y;
        }
    }

    const auto ss = detect_steady_state_from_maxima(res.period_max_error, tm.period_samples,
                                                    static_cast<int>(tm.settle_blocks));
    res.t_ss    = ss.t_ss;
    res.settled = ss.settled;
    const auto first = static_cast<size_t>(ss.t_ss / tm.period_samples);
    for (size_t b = first; b < res.period_max_error.size(); ++b) {
        res.max_abs_error   = std::max(res.max_abs_error, res.period_max_error[b]);
        res.max_abs_control = std::max(res.max_abs_control, res.period_max_control[b]);
    }
    return res;
}

SteadyState detect_steady_state_from_maxima(std::span<const double> m, std::int64_t period_samples,
                                            int settle_periods) {
    if (period_samples < 1) throw ConfigError("period must span at least one sample");
    if (settle_periods < 0) throw ConfigError("settle_periods must be >= 0");
    const auto blocks = static_cast<std::int64_t>(m.size());
    auto       close  = [&](std::int64_t i) {
        const double a = m[static_cast<size_t>(i)];
        const double b = m[static_cast<size_t>(i + 1)];
        return std::abs(a - b) <= 0.01 * std::max(std::abs(a), std::abs(b));
    };
    // Walk back from the end to find where the converged tail starts.
    std::int64_t start = blocks - 1;
    while (start > 0 && close(start - 1)) --start;
    const std::int64_t floor_block = std::min<std::int64_t>(settle_periods, std::max<std::int64_t>(blocks - 1, 0));
    SteadyState        ss;
    if (blocks >= 2 && start <= blocks - 2) {
        const std::int64_t b = std::max(start, floor_block);
        if (b <= blocks - 2) {
            ss.t_ss    = b * period_samples;
            ss.settled = true;
            return ss;
        }
    }
    ss.t_ss    = floor_block * period_samples;
    ss.settled = false;
    return ss;
}

SteadyState detect_steady_state(std::span<const double> e, std::int64_t period_samples, int settle_periods) {
    if (period_samples < 1) throw ConfigError("period must span at least one sample");
    const auto          blocks = static_cast<std::int64_t>(e.size()) / period_samples;
    std::vector<double> maxima(static_cast<size_t>(blocks), 0.0);
    for (std::int64_t b = 0; b < blocks; ++b)
        for (std::int64_t k = b * period_samples; k < (b + 1) * period_samples; ++k)
            maxima[static_cast<size_t>(b)] = std::max(maxima[static_cast<size_t>(b)], std::abs(e[static_cast<size_t>(k)]));
    return detect_steady_state_from_maxima(maxima, period_samples, settle_periods);
}

double max_control_input(const SimResult& res) { return res.max_abs_control; }

SensitivityPoint pseudo_sensitivity_point(const ControllerChain& chain, const RationalTF& plant, double freq_hz,
                                          double amplitude, const SimConfig& cfg) {
    SimConfig c   = cfg;
    c.keep_series = false;
    const auto r  = simulate_closed_loop(chain, plant, Reference::sine(amplitude, freq_hz), c);
    return SensitivityPoint{freq_hz, r.max_abs_error / amplitude, r.max_abs_control, r.settled};
}

std::vector<SensitivityPoint> pseudo_sensitivity(const ControllerChain& chain, const RationalTF& plant,
                                                 const std::vector<double>& freqs_hz, double amplitude,
                                                 const SimConfig& cfg) {
    std::vector<SensitivityPoint> out;
    out.reserve(freqs_hz.size());
    for (double f : freqs_hz) out.push_back(pseudo_sensitivity_point(chain, plant, f, amplitude, cfg));
    return out;
}

// ----------------------------------------------------------------------------
// Step response
// ----------------------------------------------------------------------------
StepMetrics step_metrics(std::span<const double> y, double Ts, double target) {
    if (y.empty()) throw ConfigError("step metrics need a non-empty record");
    if (target == 0.0) throw ConfigError("step target must be nonzero");
    const double sgn  = target > 0.0 ? 1.0 : -1.0;
    const double tabs = std::abs(target);
    const auto   N    = static_cast<std::int64_t>(y.size());

    StepMetrics  m;
    std::int64_t k10 = -1, k90 = -1;
    double       peak = -INFINITY;
    std::int64_t last_out = -1;
    for (std::int64_t k = 0; k < N; ++k) {
        const double v = sgn * y[static_cast<size_t>(k)];
        if (k10 < 0 && v >= 0.1 * tabs) k10 = k;
        if (k90 < 0 && v >= 0.9 * tabs) k90 = k;
        peak = std::max(peak, v);
        if (std::abs(v - tabs) > 0.02 * tabs) last_out = k;
    }
    m.rise_time     = (k10 >= 0 && k90 >= 0) ? static_cast<double>(k90 - k10) * Ts : std::nan("");
    m.overshoot_pct = std::max(0.0, (peak - tabs) / tabs * 100.0);
    m.settling_time = static_cast<double>(last_out + 1) * Ts;

    const std::int64_t tail = std::max<std::int64_t>(1, N / 10);
    for (std::int64_t k = N - tail; k < N; ++k)
        m.ss_error = std::max(m.ss_error, std::abs(target - y[static_cast<size_t>(k)]));
    m.settled = last_out + 1 <= N - tail;
    return m;
}

StepResult simulate_step(const ControllerChain& chain, const RationalTF& plant, const SimConfig& cfg) {
    SimConfig c      = cfg;
    c.noise_fraction = 0.0;
    c.disturbance.reset();
    c.keep_series = true;
    StepResult out;
    out.sim     = simulate_closed_loop(chain, plant, Reference::step(1.0), c);
    out.metrics = step_metrics(out.sim.y, out.sim.Ts, 1.0);
    return out;
}

// ----------------------------------------------------------------------------
// Disturbance calibration
// ----------------------------------------------------------------------------
double calibrate_disturbance(const RationalTF& plant, const ControllerChain& chain, double target_fraction,
                             const SimConfig& cfg) {
    if (!(target_fraction > 0.0)) throw ConfigError("disturbance target must be positive");
    SimConfig c      = cfg;
    c.noise_fraction = 0.0;
    c.keep_series    = true;
    if (!c.disturbance) c.disturbance = Multisine{};

    auto peak_output = [&](double amp) {
        c.disturbance->amplitude = amp;
        const auto r             = simulate_closed_loop(chain, plant, Reference::zero(1.0), c);
        double     peak          = 0.0;
        for (auto k = static_cast<size_t>(r.t_ss); k < r.y.size(); ++k) peak = std::max(peak, std::abs(r.y[k]));
        return peak;
    };

    // The loop is homogeneous of degree one in the input, so a single probe
    // is normally exact; a few secant-style refinements absorb round-off.
    double amp  = 1.0;
    double peak = peak_output(amp);
    if (!(peak > 0.0)) throw NumericalError("disturbance calibration: output does not respond to the disturbance");
    for (int round = 0; round < 8; ++round) {
        amp *= target_fraction / peak;
        peak = peak_output(amp);
        if (std::abs(peak - target_fraction) <= 1e-6 * target_fraction) break;
    }
    return amp;
}

}  // namespace resetlab
