#pragma once

// Numerical building blocks shared by every module: the complex type,
// error hierarchy, compensated summation, the complex log-gamma, Bernoulli
// data, stable power-integral primitives and fixed quadrature rules.

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tate {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// ---------------------------------------------------------------------------
// Errors. The CLI maps PreconditionError to exit code 3 and the remaining
// configuration errors to exit code 2.

class TateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside an operation's contract (bad discriminant, bad range).
class DomainError : public TateError {
 public:
  using TateError::TateError;
};

/// A numeric precondition that the caller asserted does not hold,
/// e.g. |L(s)| is not small at a claimed zero.
class PreconditionError : public TateError {
 public:
  using TateError::TateError;
};

/// The stream does not support the requested operation (ramanujan_tau on
/// the critical-line side, hardy_Z on a non-self-dual stream).
class UnsupportedError : public TateError {
 public:
  using TateError::TateError;
};

class PoleError : public TateError {
 public:
  using TateError::TateError;
};

/// Coefficient demand beyond a stream's declared N_max.
class TruncationError : public TateError {
 public:
  using TateError::TateError;
};

// ---------------------------------------------------------------------------
// Compensated (Neumaier) summation.

template <typename T>
class CompensatedSum;

template <>
class CompensatedSum<double> {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

template <>
class CompensatedSum<cplx> {
 public:
  void add(cplx z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  [[nodiscard]] cplx value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum<double> re_;
  CompensatedSum<double> im_;
};

/// Pairwise reduction; the partition depends only on the length, so the
/// result is independent of how the terms were produced.
double pairwise_sum(std::span<const double> xs);
cplx pairwise_sum(std::span<const cplx> xs);

// ---------------------------------------------------------------------------
// Special functions.

/// Principal branch of log Gamma(z) for Re z > 0 (continuous in Im z).
cplx log_gamma(cplx z);

/// Digamma for real x > 0.
double digamma(double x);

/// B_{2k} / (2k)! for k = 1..kMaxBernoulliIndex.
inline constexpr int kMaxBernoulliIndex = 30;
double bernoulli_even_over_factorial(int k);

/// B_k / k! for any k >= 0 (B_1 = -1/2).
double bernoulli_over_factorial(int k);

/// e^z - 1 without cancellation near z = 0.
cplx expm1(cplx z);

/// (e^z - 1) / z, equal to 1 at z = 0.
cplx expm1_over_z(cplx z);

/// Integral of x^alpha over [a, b], 0 <= a <= b. Uses a log1p/expm1 form
/// so narrow intervals far from the origin keep full relative accuracy and
/// alpha = -1 takes the logarithmic branch. Throws DomainError when a = 0
/// and Re alpha <= -1.
cplx power_integral(double a, double b, cplx alpha);

/// Tail of the sawtooth integral  G(X, a) = int_X^inf P_1(t) t^a dt  for an
/// integer X >= 1 and Re a < 0, where P_1(t) = {t} - 1/2. Evaluated by
/// repeated integration by parts against the periodic Bernoulli functions;
/// requires X large compared to |a| (checked).
cplx sawtooth_tail(std::int64_t X, cplx a);

/// int_x^M P_1(t) t^a dt for x <= M with M an integer, summed exactly per
/// unit interval.
cplx sawtooth_segment(double x, std::int64_t M, cplx a);

// ---------------------------------------------------------------------------
// Quadrature rules.

struct QuadratureRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(int n);

/// 7-point Gauss / 15-point Kronrod pair on [-1, 1]. Kronrod nodes are
/// ordered so that the odd positions 1,3,...,13 are the Gauss nodes.
struct GaussKronrod15 {
  std::array<double, 15> nodes;
  std::array<double, 15> kronrod_weights;
  std::array<double, 15> gauss_weights;  // zero on non-Gauss nodes
};
const GaussKronrod15& gauss_kronrod15();

/// Double-exponential (tanh-sinh) quadrature on [a, b] for functions that
/// are smooth in the interior; endpoint behaviour may be singular.
double tanh_sinh(const std::function<double(double)>& f, double a, double b, double h = 1.0 / 32.0);
cplx tanh_sinh(const std::function<cplx(double)>& f, double a, double b, double h = 1.0 / 32.0);

// ---------------------------------------------------------------------------
// Small helpers.

/// Parse "a+bi", "a-bi", "bi", "a", or "(a,b)".
cplx parse_complex(const std::string& text);
std::string format_complex(cplx z);

/// Runs body(i) for i in [0, n) on up to hardware_concurrency threads using
/// a fixed block partition.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace tate
