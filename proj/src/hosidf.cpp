#include "resetlab/hosidf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "resetlab/errors.hpp"

namespace resetlab {

namespace {

// M = I + X. The smallest singular value is compared with the size of the
// terms being added, so cancellation down to round-off counts as singular.
Matrix checked_inverse(const Matrix& M, double term_scale, const char* what, double omega) {
    Eigen::JacobiSVD<Matrix> svd(M);
    const double smin = svd.singularValues().minCoeff();
    if (!(smin > 1e-12 * (1.0 + term_scale)))
        throw NumericalError(std::string("theta_rho: ") + what + " is singular at omega = " + std::to_string(omega) +
                             " rad/s");
    return M.fullPivLu().inverse();
}

// C (j w I - A)^-1 v for a complex vector v.
Complex resolvent_apply(const StateSpace& base, double omega, const Eigen::VectorXcd& v) {
    const int n = base.order();
    CMatrix   M = Complex{0.0, omega} * CMatrix::Identity(n, n) - base.A.cast<Complex>();
    Eigen::PartialPivLU<CMatrix> lu(M);
    if (std::abs(lu.determinant()) < 1e-300)
        throw NumericalError("resolvent singular at omega = " + std::to_string(omega) + " rad/s");
    return (base.C.cast<Complex>() * lu.solve(v))(0, 0);
}

void require_positive_omega(double omega) {
    if (!(omega > 0.0) || !std::isfinite(omega)) throw ConfigError("frequency must be positive");
}

void require_order(int n) {
    if (n < 1) throw ConfigError("harmonic order must be >= 1");
}

}  // namespace

Matrix theta_rho(const ResetElement& re, double omega) {
    require_positive_omega(omega);
    const int    n    = re.order();
    const Matrix I    = Matrix::Identity(n, n);
    const Matrix Arho = re.reset_matrix();
    const Matrix Aw   = re.base.A / omega;
    const Matrix E    = mat_exp(kPi * Aw);

    const Matrix AE        = Arho * E;
    const Matrix A2        = Aw * Aw;
    const Matrix inv_reset = checked_inverse(I + AE, AE.norm(), "(I + Arho exp(pi A / w))", omega);
    const Matrix inv_quad  = checked_inverse(A2 + I, A2.norm(), "((A / w)^2 + I)", omega);
    return (2.0 / kPi) * (I + E) * inv_reset * (I - Arho) * inv_quad;
}

Complex df(const ResetElement& re, double omega) { return hosidf(re, omega, 1); }

Complex hosidf(const ResetElement& re, double omega, int n) {
    require_positive_omega(omega);
    require_order(n);
    if (n % 2 == 0) return Complex{0.0, 0.0};
    const Matrix          theta = theta_rho(re, omega);
    const Eigen::VectorXcd jtb  = Complex{0.0, 1.0} * (theta * re.base.B).cast<Complex>();
    if (n == 1) {
        const Eigen::VectorXcd v = re.base.B.cast<Complex>() + jtb;
        return resolvent_apply(re.base, omega, v) + re.base.D(0, 0);
    }
    return resolvent_apply(re.base, n * omega, jtb);
}

Matrix theta_shaped(const ResetElement& re, double phi, double omega) {
    const int    n = re.order();
    const Matrix I = Matrix::Identity(n, n);
    return theta_rho(re, omega) * ((-std::sin(phi) * re.base.A + omega * std::cos(phi) * I) / omega);
}

Complex hosidf_shaped(const ResetElement& re, double phi, double omega, int n) {
    require_positive_omega(omega);
    require_order(n);
    if (n % 2 == 0) return Complex{0.0, 0.0};
    const Matrix          theta_s = theta_shaped(re, phi, omega);
    const Complex         rot     = std::polar(1.0, phi) * Complex{0.0, 1.0};
    const Eigen::VectorXcd term   = rot * (theta_s * re.base.B).cast<Complex>();
    if (n == 1) {
        const Eigen::VectorXcd v = re.base.B.cast<Complex>() + term;
        return resolvent_apply(re.base, omega, v) + re.base.D(0, 0);
    }
    return resolvent_apply(re.base, n * omega, term);
}

Complex chain_reset_hosidf(const ControllerChain& chain, double omega, int n) {
    if (chain.shaping()) return hosidf_shaped(chain.reset(), phase_at(*chain.shaping(), omega), omega, n);
    return hosidf(chain.reset(), omega, n);
}

Complex open_loop_hosidf(const ControllerChain& chain, const RationalTF& plant, double omega, int n) {
    const Complex h = chain_reset_hosidf(chain, omega, n);
    if (h == Complex{0.0, 0.0}) return h;
    const double nw = n * omega;
    return chain.cl1.at_frequency(omega) * h * chain.cl2.at_frequency(nw) * plant.at_frequency(nw);
}

Complex df_sensitivity(Complex L1) {
    const Complex d = 1.0 + L1;
    if (std::abs(d) < 1e-300) throw NumericalError("sensitivity undefined: 1 + L1 = 0");
    return 1.0 / d;
}

// ----------------------------------------------------------------------------
// HarmonicResponse and grids
// ----------------------------------------------------------------------------
Complex HarmonicResponse::at(std::size_t freq_index, int n) const {
    if (n < 1) throw ConfigError("harmonic order must be >= 1");
    if (freq_index >= freqs.size()) throw ConfigError("frequency index out of range");
    const auto it = std::find(orders.begin(), orders.end(), n);
    if (it == orders.end()) {
        if (n % 2 == 0) return Complex{0.0, 0.0};
        throw ConfigError("harmonic order " + std::to_string(n) + " not stored");
    }
    return values[freq_index * orders.size() + static_cast<std::size_t>(it - orders.begin())];
}

void validate_grid(const std::vector<double>& omegas) {
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        if (!(omegas[i] > 0.0) || !std::isfinite(omegas[i])) throw ConfigError("frequency grid must be positive");
        if (i > 0 && !(omegas[i] > omegas[i - 1])) throw ConfigError("frequency grid must be strictly increasing");
    }
}

void validate_orders(const std::vector<int>& orders) {
    for (int n : orders) require_order(n);
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
    if (!(lo > 0.0 && hi >= lo) || points == 0) throw ConfigError("log grid needs 0 < lo <= hi and points >= 1");
    if (points == 1) return {lo};
    std::vector<double> g(points);
    const double        a = std::log10(lo);
    const double        b = std::log10(hi);
    for (std::size_t i = 0; i < points; ++i)
        g[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1));
    g.front() = lo;
    g.back()  = hi;
    return g;
}

std::vector<double> log_grid_per_decade(double lo, double hi, std::size_t per_decade) {
    if (!(lo > 0.0 && hi > lo) || per_decade == 0) throw ConfigError("log grid needs 0 < lo < hi");
    const double decades = std::log10(hi / lo);
    const auto   points  = static_cast<std::size_t>(std::ceil(decades * static_cast<double>(per_decade))) + 1;
    return log_grid(lo, hi, points);
}

// ----------------------------------------------------------------------------
// Loop analysis
// ----------------------------------------------------------------------------
LoopMargins df_margins(const ControllerChain& chain, const RationalTF& plant, double omega_lo, double omega_hi,
                       std::size_t grid_points) {
    const auto grid = log_grid(omega_lo, omega_hi, grid_points);
    auto       mag  = [&](double w) { return std::abs(open_loop_hosidf(chain, plant, w, 1)); };

    LoopMargins out;
    double      prev = mag(grid[0]);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double cur = mag(grid[i]);
        if (prev >= 1.0 && cur < 1.0) {
            double lo = std::log(grid[i - 1]);
            double hi = std::log(grid[i]);
            for (int it = 0; it < 100; ++it) {
                const double mid = 0.5 * (lo + hi);
                (mag(std::exp(mid)) >= 1.0 ? lo : hi) = mid;
            }
            out.found     = true;
            out.crossover = std::exp(0.5 * (lo + hi));
            double pm     = 180.0 + std::arg(open_loop_hosidf(chain, plant, out.crossover, 1)) * 180.0 / kPi;
            while (pm > 180.0) pm -= 360.0;
            while (pm <= -180.0) pm += 360.0;
            out.phase_margin_deg = pm;
            return out;
        }
        prev = cur;
    }
    return out;
}

double tune_kp_for_crossover(const TuningParams& params, const RationalTF& plant) {
    TuningParams unit = params;
    unit.kp           = 1.0;
    const auto chain  = arrange_sequence(make_pi_cglp_parts(unit), 1);
    const double mag  = std::abs(open_loop_hosidf(chain, plant, params.omega_c, 1));
    if (!(mag > 0.0) || !std::isfinite(mag)) throw NumericalError("cannot tune Kp: degenerate open loop at omega_c");
    return 1.0 / mag;
}

}  // namespace resetlab
