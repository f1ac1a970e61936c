#include "resetlab/lti.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "resetlab/errors.hpp"

namespace resetlab {

namespace {

constexpr double kTrimTolerance = 1e-14;
constexpr double kPoleGuard     = 1e-300;

std::vector<double> trim_leading(std::vector<double> c, const char* what) {
    if (c.empty()) throw ConfigError(std::string("transfer function ") + what + " has no coefficients");
    for (double v : c)
        if (!std::isfinite(v)) throw ConfigError(std::string("transfer function ") + what + " has a non-finite coefficient");
    double largest = 0.0;
    for (double v : c) largest = std::max(largest, std::abs(v));
    if (largest == 0.0) return {0.0};
    const double tol = kTrimTolerance * largest;
    auto first       = std::find_if(c.begin(), c.end(), [tol](double v) { return std::abs(v) > tol; });
    c.erase(c.begin(), first);
    return c;
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace

// ----------------------------------------------------------------------------
// Polynomials
// ----------------------------------------------------------------------------
std::vector<double> poly_mul(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) return {};
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

Complex poly_eval(std::span<const double> p, Complex s) {
    Complex acc{0.0, 0.0};
    for (double c : p) acc = acc * s + c;
    return acc;
}

// ----------------------------------------------------------------------------
// RationalTF
// ----------------------------------------------------------------------------
RationalTF::RationalTF(std::vector<double> num, std::vector<double> den)
    : num_(trim_leading(std::move(num), "numerator")), den_(trim_leading(std::move(den), "denominator")) {
    if (den_.size() == 1 && den_[0] == 0.0) throw ConfigError("transfer function denominator is identically zero");
}

Complex RationalTF::operator()(Complex s) const {
    const Complex d = poly_eval(den_, s);
    if (std::abs(d) < kPoleGuard)
        throw NumericalError("pole on evaluation grid at s = (" + std::to_string(s.real()) + ", " +
                             std::to_string(s.imag()) + ")");
    return poly_eval(num_, s) / d;
}

double RationalTF::dc_gain() const { return (*this)(Complex{0.0, 0.0}).real(); }

Complex tf_eval(const RationalTF& tf, Complex s) { return tf(s); }

RationalTF series(const RationalTF& a, const RationalTF& b) {
    return RationalTF(poly_mul(a.num(), b.num()), poly_mul(a.den(), b.den()));
}

// ----------------------------------------------------------------------------
// State space
// ----------------------------------------------------------------------------
StateSpace::StateSpace(Matrix a, Matrix b, Matrix c, Matrix d)
    : A(std::move(a)), B(std::move(b)), C(std::move(c)), D(std::move(d)) {
    const auto n = A.rows();
    if (A.cols() != n || B.rows() != n || B.cols() != 1 || C.rows() != 1 || C.cols() != n || D.rows() != 1 ||
        D.cols() != 1)
        throw ConfigError("inconsistent state-space dimensions");
}

Complex StateSpace::response(Complex s) const {
    const int n = order();
    Complex   d{D(0, 0), 0.0};
    if (n == 0) return d;
    CMatrix M = s * CMatrix::Identity(n, n) - A.cast<Complex>();
    Eigen::PartialPivLU<CMatrix> lu(M);
    if (std::abs(lu.determinant()) < kPoleGuard) throw NumericalError("pole on evaluation grid");
    const Eigen::VectorXcd x = lu.solve(B.cast<Complex>());
    return (C.cast<Complex>() * x)(0, 0) + d;
}

Complex DiscreteStateSpace::response_z(Complex z) const {
    const int n = order();
    Complex   d{Dd(0, 0), 0.0};
    if (n == 0) return d;
    CMatrix M = z * CMatrix::Identity(n, n) - Ad.cast<Complex>();
    Eigen::PartialPivLU<CMatrix> lu(M);
    if (std::abs(lu.determinant()) < kPoleGuard) throw NumericalError("pole on unit-circle evaluation grid");
    const Eigen::VectorXcd x = lu.solve(Bd.cast<Complex>());
    return (Cd.cast<Complex>() * x)(0, 0) + d;
}

Complex DiscreteStateSpace::response(double omega) const { return response_z(std::polar(1.0, omega * Ts)); }

StateSpace tf_to_ss(const RationalTF& tf) {
    if (!tf.is_proper())
        throw ConfigError("cannot realize an improper transfer function (numerator degree " +
                          std::to_string(tf.num_degree()) + " > denominator degree " +
                          std::to_string(tf.den_degree()) + ")");
    const int    n  = tf.den_degree();
    const double a0 = tf.den()[0];

    std::vector<double> a(tf.den().begin(), tf.den().end());
    for (double& v : a) v /= a0;
    std::vector<double> b(n + 1, 0.0);
    std::copy(tf.num().begin(), tf.num().end(), b.begin() + (n + 1 - static_cast<int>(tf.num().size())));
    for (double& v : b) v /= a0;

    Matrix A = Matrix::Zero(n, n);
    Matrix B = Matrix::Zero(n, 1);
    Matrix C = Matrix::Zero(1, n);
    Matrix D = Matrix::Constant(1, 1, b[0]);
    if (n > 0) {
        for (int j = 0; j < n; ++j) A(0, j) = -a[j + 1];
        for (int i = 1; i < n; ++i) A(i, i - 1) = 1.0;
        B(0, 0) = 1.0;
        for (int j = 0; j < n; ++j) C(0, j) = b[j + 1] - b[0] * a[j + 1];
    }
    return StateSpace(std::move(A), std::move(B), std::move(C), std::move(D));
}

DiscreteStateSpace discretize(const StateSpace& ss, double Ts, Discretization method) {
    if (!(Ts > 0.0) || !std::isfinite(Ts)) throw ConfigError("sample period must be positive");
    const int n = ss.order();
    DiscreteStateSpace out;
    out.Ts = Ts;
    if (n == 0) {
        out.Ad = Matrix::Zero(0, 0);
        out.Bd = Matrix::Zero(0, 1);
        out.Cd = Matrix::Zero(1, 0);
        out.Dd = ss.D;
        return out;
    }

    if (method == Discretization::zoh) {
        Matrix M                = Matrix::Zero(n + 1, n + 1);
        M.topLeftCorner(n, n)   = ss.A * Ts;
        M.topRightCorner(n, 1)  = ss.B * Ts;
        const Matrix E          = mat_exp(M);
        out.Ad                  = E.topLeftCorner(n, n);
        out.Bd                  = E.topRightCorner(n, 1);
        out.Cd                  = ss.C;
        out.Dd                  = ss.D;
        return out;
    }

    const Matrix I    = Matrix::Identity(n, n);
    const Matrix half = ss.A * (Ts / 2.0);
    Eigen::FullPivLU<Matrix> lu(I - half);
    if (!lu.isInvertible() || lu.rcond() < 1e-14)
        throw NumericalError("tustin discretization: pole at the bilinear singularity s = 2/Ts");
    const Matrix Minv = lu.inverse();
    out.Ad            = Minv * (I + half);
    out.Bd            = Minv * ss.B * Ts;
    out.Cd            = ss.C * Minv;
    out.Dd            = ss.D + ss.C * Minv * ss.B * (Ts / 2.0);
    return out;
}

// ----------------------------------------------------------------------------
// Matrix exponential
// ----------------------------------------------------------------------------
Matrix mat_exp(const Matrix& A) {
    if (A.rows() != A.cols()) throw ConfigError("mat_exp requires a square matrix");
    if (!all_finite(A)) throw NumericalError("mat_exp: non-finite matrix entries");
    const auto n = A.rows();
    if (n == 0) return A;

    static constexpr std::array<double, 14> b = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
        129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
        1323241920.0,        40840800.0,          960960.0,           16380.0,
        182.0,               1.0};
    constexpr double theta13 = 5.371920351148152;

    const double norm1 = A.cwiseAbs().colwise().sum().maxCoeff();
    int          s     = 0;
    if (norm1 > theta13) s = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
    const Matrix As = A / std::ldexp(1.0, s);

    const Matrix I  = Matrix::Identity(n, n);
    const Matrix A2 = As * As;
    const Matrix A4 = A2 * A2;
    const Matrix A6 = A4 * A2;

    const Matrix U = As * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I);
    const Matrix V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;

    Matrix R = (V - U).partialPivLu().solve(V + U);
    for (int k = 0; k < s; ++k) R = R * R;
    return R;
}

// ----------------------------------------------------------------------------
// DiscreteFilter
// ----------------------------------------------------------------------------
DiscreteFilter::DiscreteFilter(const DiscreteStateSpace& dss)
    : n_(dss.order()), d_(dss.Dd(0, 0)), x_(static_cast<size_t>(n_), 0.0), scratch_(static_cast<size_t>(n_), 0.0) {
    a_.resize(static_cast<size_t>(n_) * n_);
    b_.resize(static_cast<size_t>(n_));
    c_.resize(static_cast<size_t>(n_));
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) a_[static_cast<size_t>(i) * n_ + j] = dss.Ad(i, j);
        b_[i] = dss.Bd(i, 0);
        c_[i] = dss.Cd(0, i);
    }
}

double DiscreteFilter::step(double u) {
    double y = d_ * u;
    for (int i = 0; i < n_; ++i) y += c_[i] * x_[i];
    for (int i = 0; i < n_; ++i) {
        double acc = b_[i] * u;
        for (int j = 0; j < n_; ++j) acc += a_[static_cast<size_t>(i) * n_ + j] * x_[j];
        scratch_[i] = acc;
    }
    x_.swap(scratch_);
    return y;
}

double DiscreteFilter::state_output() const {
    double y = 0.0;
    for (int i = 0; i < n_; ++i) y += c_[i] * x_[i];
    return y;
}

void DiscreteFilter::reset_state() { std::fill(x_.begin(), x_.end(), 0.0); }

}  // namespace resetlab
