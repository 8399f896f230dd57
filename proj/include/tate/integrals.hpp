#pragma once

// Quadratic integrals of kernels and of L-values on vertical lines, kernel
// transforms, and the explicit Friedlander-Iwaniec main term.

#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "tate/coefficients.hpp"
#include "tate/kernels.hpp"
#include "tate/numerics.hpp"

namespace tate {

struct Truncation {
  std::optional<double> x_max;
  std::optional<double> T;
  std::optional<double> line_re;
};

struct IntegralResult {
  cplx value = 0.0;
  bool complex_valued = false;
  Truncation truncation;
  double tail_estimate = 0.0;
  std::string tail_method = "none";
  double error_bound = 0.0;
  // Part of error_bound that is not tail: quadrature plus rounding, scaled
  // like error_bound when a warning inflates it.
  double truncated_error = 0.0;
  std::string warning;

  [[nodiscard]] double real() const { return value.real(); }
  /// JSON object with value, truncation, tail_estimate, tail_method,
  /// error_bound (and warning when set).
  [[nodiscard]] std::string to_json() const;
};

enum class Weight { dx, dx_over_x, dx_over_x2 };

double weight_exponent(Weight w);

/// int_0^{x_max} |f|^2 w(x) dx, exact per interval, plus the tail model's
/// estimate of the remainder in error_bound.
IntegralResult kernel_l2_norm(const PiecewiseKernel& kernel, Weight weight, double x_max);

/// Exact int_a^b |f|^2 x^r dx over a sub-range of the kernel.
double kernel_l2_norm_range(const PiecewiseKernel& kernel, double r, double a, double b);

/// Estimated int_X^inf |f|^2 x^r dx from the kernel's tail model
/// (infinity when the model predicts divergence, 0 for TailKind::none).
double kernel_tail_estimate(const PiecewiseKernel& kernel, double r, double X);

inline constexpr double kTailSafety = 3.0;

/// Caches L(line_re + it) at Gauss-Kronrod nodes on panels of width 0.25,
/// with finer panels around requested peaks, so repeated integrals on the
/// same line (e.g. over many zeros) share evaluations.
class LineSampler {
 public:
  LineSampler(CoefficientStream stream, double line_re);

  [[nodiscard]] const CoefficientStream& stream() const { return stream_; }
  [[nodiscard]] double line_re() const { return line_re_; }

  struct Panel {
    double a = 0.0;
    double b = 0.0;
    std::vector<cplx> values;  // L at the 15 Kronrod nodes, +t side
    std::vector<cplx> mirror;  // L at the mirrored nodes (-t side)
  };

  /// Panels covering [0, T], refined to width 0.0625 within distance 2 of
  /// each focus ordinate (a focus also splits the panel containing it).
  std::vector<const Panel*> panels(double T, const std::vector<double>& foci);

  static constexpr double kPanelWidth = 0.25;
  static constexpr int kRefineFactor = 4;
  static constexpr double kRefineRadius = 2.0;

 private:
  const Panel& base_panel(std::size_t k);
  Panel make_panel(double a, double b) const;
  void ensure_base(std::size_t count);

  CoefficientStream stream_;
  double line_re_;
  bool mirror_by_conjugation_;
  std::deque<Panel> base_;  // deque keeps handed-out pointers valid
  std::vector<std::pair<std::pair<double, double>, std::unique_ptr<Panel>>> fine_;
  std::mutex mutex_;
};

/// Process-wide sampler for (stream, line). Thread-safe.
std::shared_ptr<LineSampler> line_sampler(const CoefficientStream& stream, double line_re);

enum class CenterShift { pole_at_s, pole_at_half };

/// int_{-T}^{T} |L(line_re + it)|^2 / |line_re + it - z|^2 dt with z = s
/// (pole_at_s) or z = 0 (pole_at_half).
IntegralResult vertical_line_integral(const CoefficientStream& stream, cplx s, double line_re, double T,
                                      CenterShift center_shift);

/// int_{-T}^{T} |L(1/2 + it) - L(1/2)|^2 / t^2 dt.
IntegralResult variance_integral(const CoefficientStream& stream, double T);

/// Heuristic for int_T^inf of a mean |L(sigma+it)|^2 / t^2, both signs of t,
/// times kTailSafety.
double critical_tail_estimate(const LSeriesDescriptor& desc, double sigma, double T);

/// int_0^inf f(x) x^{w-1} dx. The zeta zero case continues exactly beyond
/// x_max through the sawtooth representation; other kernels contribute a
/// fitted-envelope bound to error_bound.
IntegralResult mellin_of_kernel(const PiecewiseKernel& kernel, cplx w);

/// 2 int_0^inf H_s(x) cos(2 pi x xi) dx for the zeta kernel at a zero.
IntegralResult fourier_of_kernel_zeta(cplx s, double xi, double x_max);

/// xi^{-s'} A_{s'}(xi) - 1/(1-s') for zeta with s' = 1 - s, i.e. the exact
/// H_{1-s}(xi) from the definition.
cplx zeta_tate_kernel_value(cplx s, double x);

struct FIConstants {
  double Q = 0.0;
  double beta = 0.0;
  cplx omega1 = 1.0;
  cplx omega2 = 1.0;
  cplx c_sum = 0.0;
  cplx epsilon_pi = 1.0;
};

FIConstants fi_constants(const LSeriesDescriptor& desc);

/// B(x, N) with dual coefficients b_n = conj(a_n).
cplx fi_B(const CoefficientStream& stream, const FIConstants& k, double x, double N);

/// epsilon x^{-s} (Q/(2 pi m))^{1/2} x^{(m-1)/(2m)} B(x, N).
cplx fi_main_term(const CoefficientStream& stream, const FIConstants& k, cplx s, double x, double N);

}  // namespace tate
