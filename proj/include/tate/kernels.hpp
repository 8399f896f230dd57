#pragma once

// Piecewise kernels built from partial Dirichlet sums, the mollifier and
// the smoothed kernel.

#include <cstdint>
#include <string>
#include <vector>

#include "tate/coefficients.hpp"
#include "tate/numerics.hpp"

namespace tate {

enum class TailKind { closed_form_m1, exponent_fit, none };

std::string to_string(TailKind kind);

/// Beyond x_max the kernel is summarised by its mean-square envelope:
/// closed_form_m1 uses |H|^2 ~ 1/(12 x^2) (the sawtooth term of the m = 1
/// zero case), exponent_fit uses a root-mean-square power law C x^beta
/// fitted on the last decade below x_max.
struct TailModel {
  TailKind kind = TailKind::none;
  double beta = 0.0;
  double C = 0.0;
};

/// f(x) = c_k x^p - d x^q on the k-th interval, zero below support_lo.
/// Breakpoints are rationals numerator/denominator, stored exactly; the
/// function is right-continuous at each of them.
struct PiecewiseKernel {
  std::string label;
  cplx s = 0.0;
  cplx offset_d = 0.0;
  cplx offset_power = 0.0;  // q
  cplx power_exponent = 0.0;  // p
  double support_lo = 0.0;
  std::int64_t denominator = 1;
  std::vector<std::int64_t> break_numerators;  // strictly increasing, > support_lo
  std::vector<cplx> interval_coeffs;           // size break_numerators.size() + 1
  double x_max = 0.0;
  TailModel tail;

  [[nodiscard]] std::size_t interval_count() const { return interval_coeffs.size(); }
  [[nodiscard]] double breakpoint(std::size_t k) const;
  /// [left, right) of interval k (left of interval 0 is support_lo, right of
  /// the last is x_max).
  [[nodiscard]] double interval_left(std::size_t k) const;
  [[nodiscard]] double interval_right(std::size_t k) const;
  /// Index of the interval containing x (support_lo <= x < x_max).
  [[nodiscard]] std::size_t locate(double x) const;
  [[nodiscard]] cplx value(double x) const;
  /// Same kernel with every coefficient and the offset multiplied by a.
  [[nodiscard]] PiecewiseKernel scaled(cplx a) const;
  /// CSV with columns x_left,x_right,coeff_re,coeff_im.
  [[nodiscard]] std::string to_csv() const;
};

/// Exact int_a^b |c x^p - d x^q|^2 x^r dx.
double interval_square_integral(cplx c, cplx p, cplx d, cplx q, double r, double a, double b);

/// Exact int_a^b (c x^p - d x^q) x^w dx.
cplx interval_moment(cplx c, cplx p, cplx d, cplx q, cplx w, double a, double b);

/// sum_{n <= x} a_n n^{-s}, compensated; throws TruncationError naming the
/// shortfall when floor(x) exceeds the stream's N_max.
cplx partial_sum_A(const CoefficientStream& stream, cplx s, double x);

/// H_s(x) = x^{s-1} A_s(x) - kappa/(1-s).
PiecewiseKernel build_tate_kernel(const CoefficientStream& stream, cplx s, double x_max);

/// Sawtooth representation of H_s for zeta at a zero, valid for x >= 1 not
/// an integer: -psi(x)/x + s x^{s-1} int_x^inf psi(t) t^{-s-1} dt.
cplx closed_form_H_zeta(cplx s, double x);

/// K_s for the quadratic field of discriminant d (d = 1 gives Q and H_s).
PiecewiseKernel build_inverse_different_kernel(std::int64_t d, cplx s, double x_max);

enum class VarianceWeight { sqrt_n, unit };

/// sqrt_n: sum_{n<=x} a_n/sqrt(n) - central for x >= 1.
/// unit:   x^{-1/2}(sum_{n<=x} a_n - central) for x >= 1, where central is
///         L(0) for the limit kernel or 0 for the plain mean square; for
///         zeta the subtrahend is x itself on all of (0, inf) and central is
///         ignored.
PiecewiseKernel build_variance_kernel(const CoefficientStream& stream, cplx central, double x_max,
                                      VarianceWeight weight);

/// Running compensated sums P[n] = sum_{k <= n} a_k / sqrt(k), n = 0..N.
std::vector<cplx> sqrt_weighted_prefix(const CoefficientStream& stream, std::int64_t N);

/// Smooth cutoff J_eps built from the bump phi(X) = c exp(-1/(1 - 4X^2))
/// on (-1/2, 1/2). J_eps(x) = int_{log(x)/eps}^{1/2} phi.
class Mollifier {
 public:
  explicit Mollifier(double eps);
  [[nodiscard]] double eps() const { return eps_; }
  [[nodiscard]] double phi(double X) const;
  [[nodiscard]] double J(double x) const;
  /// phi-hat(i eps s) = int phi(X) e^{eps s X} dX.
  [[nodiscard]] cplx phi_hat_i_eps(cplx s) const;
  /// Mellin transform phi-hat(i eps s)/s; s != 0.
  [[nodiscard]] cplx mellin(cplx s) const;
  /// J_eps is exactly 1 below lower_edge() and 0 above upper_edge().
  [[nodiscard]] double lower_edge() const;
  [[nodiscard]] double upper_edge() const;

 private:
  double eps_;
  double norm_;
};

double mollifier_J(double eps, double x);
cplx mollifier_mellin(double eps, cplx s);

/// sum_n a_n/sqrt(n) J_eps(n/x) - central J_eps(1/x).
cplx smoothed_kernel_H_eps(const CoefficientStream& stream, cplx central, double eps, double x);

/// Fits the mean-square envelope of |f|^2 on [x_max/10, x_max] with a
/// power law (bins of equal log width) and returns the model.
TailModel fit_tail(const PiecewiseKernel& kernel, int bins = 8);

}  // namespace tate
