#include "resetlab/oracle.hpp"

#include <cmath>
#include <cstdint>
#include <string>

#include "resetlab/errors.hpp"
#include "resetlab/sim.hpp"

namespace resetlab {

namespace {

struct Jump {
    std::int64_t k;
    double       tau;
    double       size;
};

void check_common(double omega, const OracleOptions& opt) {
    if (!(omega > 0.0) || !std::isfinite(omega)) throw ConfigError("oracle frequency must be positive");
    if (opt.n_max < 1) throw ConfigError("oracle n_max must be >= 1");
    if (!(opt.amplitude > 0.0)) throw ConfigError("oracle amplitude must be positive");
    if (opt.periods < 20) throw ConfigError("oracle needs at least 20 periods");
}

std::int64_t positive_mod(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

// Fourier coefficient of order n over samples [start, start + len) after the
// jumps in `jumps` have been subtracted as unit-period sawtooths.
Complex corrected_coefficient(const std::vector<double>& y, const std::vector<double>& t, std::int64_t start,
                              std::int64_t len, std::int64_t P, const std::vector<Jump>& jumps, int n, double omega) {
    Complex acc{0.0, 0.0};
    for (std::int64_t k = start; k < start + len; ++k) {
        double yc = y[static_cast<size_t>(k)];
        for (const auto& j : jumps)
            yc += j.size * (static_cast<double>(positive_mod(k - j.k, P)) / static_cast<double>(P) - 0.5);
        acc += yc * std::polar(1.0, -n * omega * t[static_cast<size_t>(k)]);
    }
    Complex c = acc / static_cast<double>(len);
    for (const auto& j : jumps) c -= j.size * Complex{0.0, 1.0 / (2.0 * kPi * n)} * std::polar(1.0, -n * omega * j.tau);
    return c;
}

Complex plain_coefficient(const std::vector<double>& y, std::int64_t start, std::int64_t len, int n, double omega,
                          double Ts) {
    Complex acc{0.0, 0.0};
    for (std::int64_t k = start; k < start + len; ++k)
        acc += y[static_cast<size_t>(k)] * std::polar(1.0, -n * omega * static_cast<double>(k) * Ts);
    return acc / static_cast<double>(len);
}

void check_settled(Complex a, Complex b, double omega) {
    if (std::abs(a - b) > 0.005 * std::abs(b))
        throw NumericalError("oracle not settled at omega = " + std::to_string(omega) +
                             " rad/s: last two periods disagree by more than 0.5%");
}

}  // namespace

HarmonicSlice harmonic_oracle(const ResetElement& re, double omega, const OracleOptions& opt, double trigger_phase) {
    check_common(omega, opt);
    const double f = rad_to_hz(omega);
    if (opt.fs < 4.0 * f * opt.n_max) throw ConfigError("oracle sample rate must be at least 4 f n_max");

    const std::int64_t P       = 2 * static_cast<std::int64_t>(std::ceil(opt.fs / (2.0 * f)));
    const std::int64_t periods = opt.periods + (opt.periods % 2);
    const std::int64_t N       = P * periods;
    const double       h       = 1.0 / (static_cast<double>(P) * f);
    const double       t0      = -trigger_phase / omega;
    const double       amp     = opt.amplitude;

    const int    n = re.order();
    const Matrix E = mat_exp(re.base.A * h);
    const CMatrix jwI = Complex{0.0, omega} * CMatrix::Identity(n, n);
    const CMatrix rhs = (std::polar(1.0, omega * h) * CMatrix::Identity(n, n) - E.cast<Complex>()) *
                        re.base.B.cast<Complex>();
    const Eigen::VectorXcd F = (jwI - re.base.A.cast<Complex>()).partialPivLu().solve(rhs);
    const double           D = re.base.D(0, 0);

    std::vector<double> y(static_cast<size_t>(N));
    std::vector<double> t(static_cast<size_t>(N));
    std::vector<Jump>   jumps;
    Vector              x = Vector::Zero(n);
    int                 resets = 0;

    for (std::int64_t k = 0; k < N; ++k) {
        const double tk = t0 + static_cast<double>(k) * h;
        t[static_cast<size_t>(k)] = tk;
        if (k > 0 && k % (P / 2) == 0) {
            const double before = (re.base.C * x)(0, 0);
            x *= re.gamma;
            jumps.push_back({k, tk, (re.base.C * x)(0, 0) - before});
            ++resets;
        }
        y[static_cast<size_t>(k)] = (re.base.C * x)(0, 0) + D * amp * std::sin(omega * tk);
        const Eigen::VectorXcd forced = std::polar(1.0, omega * tk) * F;
        x = E * x + amp * forced.imag();
    }

    auto jumps_in = [&](std::int64_t lo, std::int64_t hi) {
        std::vector<Jump> out;
        for (const auto& j : jumps)
            if (j.k >= lo && j.k < hi) out.push_back(j);
        return out;
    };

    const auto last_jumps = jumps_in(N - P, N);
    const auto prev_jumps = jumps_in(N - 2 * P, N - P);

    const Complex c_last = corrected_coefficient(y, t, N - P, P, P, last_jumps, 1, omega);
    const Complex c_prev = corrected_coefficient(y, t, N - 2 * P, P, P, prev_jumps, 1, omega);
    check_settled(c_prev, c_last, omega);

    HarmonicSlice out;
    out.omega              = omega;
    out.samples_per_period = static_cast<int>(P);
    out.fs_used            = static_cast<double>(P) * f;
    out.reset_count        = resets;
    const std::int64_t M   = N / 2;
    for (int order = 1; order <= opt.n_max; ++order) {
        const Complex c = corrected_coefficient(y, t, N - M, M, P, last_jumps, order, omega);
        out.gains.push_back(Complex{0.0, 2.0} * c / amp);
    }
    return out;
}

HarmonicSlice harmonic_oracle(const ControllerChain& chain, const RationalTF& plant, double omega,
                              const OracleOptions& opt) {
    check_common(omega, opt);
    const double f = rad_to_hz(omega);
    if (opt.fs < 100.0 * f * opt.n_max) throw ConfigError("chain oracle sample rate must be at least 100 f n_max");

    const std::int64_t P       = static_cast<std::int64_t>(std::ceil(opt.fs / f));
    const std::int64_t periods = opt.periods + (opt.periods % 2);
    const std::int64_t N       = P * periods;
    const double       fs_eff  = static_cast<double>(P) * f;
    const double       Ts      = 1.0 / fs_eff;

    ChainRunner    runner(chain, Ts, chain.shaping().has_value());
    DiscreteFilter g(discretize(tf_to_ss(plant), Ts, Discretization::zoh));

    std::vector<double> y(static_cast<size_t>(N));
    int                 resets = 0;
    for (std::int64_t k = 0; k < N; ++k) {
        const double r = opt.amplitude * std::sin(omega * static_cast<double>(k) * Ts);
        const double u = runner.step(r);
        if (runner.last_step_reset()) ++resets;
        y[static_cast<size_t>(k)] = g.step(u);
    }

    check_settled(plain_coefficient(y, N - 2 * P, P, 1, omega, Ts), plain_coefficient(y, N - P, P, 1, omega, Ts),
                  omega);

    HarmonicSlice out;
    out.omega              = omega;
    out.samples_per_period = static_cast<int>(P);
    out.fs_used            = fs_eff;
    out.reset_count        = resets;
    const std::int64_t M   = N / 2;
    for (int order = 1; order <= opt.n_max; ++order)
        out.gains.push_back(Complex{0.0, 2.0} * plain_coefficient(y, N - M, M, order, omega, Ts) / opt.amplitude);
    return out;
}

}  // namespace resetlab
