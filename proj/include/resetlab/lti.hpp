#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace resetlab {

using Complex = std::complex<double>;
using Matrix  = Eigen::MatrixXd;
using Vector  = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;

[[nodiscard]] inline constexpr double hz_to_rad(double hz) { return 2.0 * kPi * hz; }
[[nodiscard]] inline constexpr double rad_to_hz(double w) { return w / (2.0 * kPi); }

// ============================================================================
// Rational transfer function in s
// ============================================================================
// Coefficients are stored in descending powers of s. Both lists are trimmed of
// leading coefficients below 1e-14 relative to the largest coefficient.
// Improper functions are representable (frequency evaluation of a pure lead
// such as 1 + s/w_d is legitimate) but cannot be realized in state space.
class RationalTF {
   public:
    RationalTF(std::vector<double> num, std::vector<double> den);

    static RationalTF gain(double k) { return RationalTF({k}, {1.0}); }

    [[nodiscard]] const std::vector<double>& num() const { return num_; }
    [[nodiscard]] const std::vector<double>& den() const { return den_; }

    [[nodiscard]] int num_degree() const { return static_cast<int>(num_.size()) - 1; }
    [[nodiscard]] int den_degree() const { return static_cast<int>(den_.size()) - 1; }
    [[nodiscard]] bool is_proper() const { return num_degree() <= den_degree(); }
    [[nodiscard]] bool is_strictly_proper() const { return num_degree() < den_degree(); }

    // num(s)/den(s); throws NumericalError when |den(s)| < 1e-300.
    [[nodiscard]] Complex operator()(Complex s) const;

    [[nodiscard]] Complex at_frequency(double omega) const { return (*this)(Complex{0.0, omega}); }

    // Value at s = 0 for systems without a pole at the origin.
    [[nodiscard]] double dc_gain() const;

   private:
    std::vector<double> num_;
    std::vector<double> den_;
};

[[nodiscard]] Complex tf_eval(const RationalTF& tf, Complex s);

[[nodiscard]] RationalTF series(const RationalTF& a, const RationalTF& b);
[[nodiscard]] inline RationalTF operator*(const RationalTF& a, const RationalTF& b) { return series(a, b); }

[[nodiscard]] std::vector<double> poly_mul(std::span<const double> a, std::span<const double> b);
[[nodiscard]] Complex poly_eval(std::span<const double> p, Complex s);

// ============================================================================
// State-space realizations (SISO)
// ============================================================================
struct StateSpace {
    Matrix A;  // n x n
    Matrix B;  // n x 1
    Matrix C;  // 1 x n
    Matrix D;  // 1 x 1

    StateSpace() = default;
    StateSpace(Matrix a, Matrix b, Matrix c, Matrix d);

    [[nodiscard]] int order() const { return static_cast<int>(A.rows()); }

    // C (sI - A)^-1 B + D
    [[nodiscard]] Complex response(Complex s) const;
};

struct DiscreteStateSpace {
    Matrix Ad;
    Matrix Bd;
    Matrix Cd;
    Matrix Dd;
    double Ts = 0.0;

    [[nodiscard]] int order() const { return static_cast<int>(Ad.rows()); }

    // Cd (zI - Ad)^-1 Bd + Dd
    [[nodiscard]] Complex response_z(Complex z) const;
    // Response at z = exp(j omega Ts).
    [[nodiscard]] Complex response(double omega) const;
};

enum class Discretization { tustin, zoh };

// Controllable canonical form; rejects improper functions.
[[nodiscard]] StateSpace tf_to_ss(const RationalTF& tf);

[[nodiscard]] DiscreteStateSpace discretize(const StateSpace& ss, double Ts, Discretization method);

// Scaling-and-squaring with a degree-13 Padé approximant.
[[nodiscard]] Matrix mat_exp(const Matrix& A);

// ============================================================================
// Sample-by-sample runner for a discrete realization
// ============================================================================
// Output is produced before the state update: y_k = Cd x_k + Dd u_k.
class DiscreteFilter {
   public:
    DiscreteFilter() = default;
    explicit DiscreteFilter(const DiscreteStateSpace& dss);

    double step(double u);
    void reset_state();

    // Cd x_k, the part of the output that does not depend on the current input.
    [[nodiscard]] double state_output() const;
    [[nodiscard]] double feedthrough() const { return d_; }

    [[nodiscard]] int order() const { return n_; }
    [[nodiscard]] std::span<const double> state() const { return x_; }

   private:
    int n_ = 0;
    std::vector<double> a_;  // row-major n x n
    std::vector<double> b_;
    std::vector<double> c_;
    double d_ = 1.0;
    std::vector<double> x_;
    std::vector<double> scratch_;
};

}  // namespace resetlab
