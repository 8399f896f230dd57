#pragma once

// Critical-strip evaluation of degree-1 and factorable degree-2 L-series,
// the rotated Z-function, zero location and central values.

#include <optional>
#include <string>
#include <vector>

#include "tate/coefficients.hpp"
#include "tate/numerics.hpp"

namespace tate {

inline constexpr double kMinTolerance = 1e-14;

struct Evaluation {
  cplx value = 0.0;
  double error_estimate = 0.0;  // magnitude of the first omitted correction
  double tol = 0.0;             // tolerance actually used
  bool clamped = false;         // requested tol was below kMinTolerance
};

/// sum_n v[n mod q] n^{-s} continued to all s (s = 1 excluded when the
/// mean over a period is nonzero). Euler-Maclaurin per residue class.
Evaluation periodic_series(const PeriodicFactor& factor, cplx s, double tol = 1e-12);

Evaluation zeta_value(cplx s, double tol = 1e-12);

/// Product of the stream's periodic factors. Throws UnsupportedError for
/// streams without a critical-strip evaluator and PoleError at s = 1.
Evaluation l_value(const CoefficientStream& stream, cplx s, double tol = 1e-12);

/// Residue at s = 1: 1 for zeta, 0 for entire streams, L(1, chi) for
/// dedekind_quadratic (computed through periodic_series at s = 1).
cplx residue_of(const CoefficientStream& stream);

/// Argument of D^{s/2} pi^{-ms/2} prod Gamma((s + c_j)/2) at s = 1/2 + it.
double theta(const LSeriesDescriptor& desc, double t);

/// log of the Archimedean prefactor D^{s/2} pi^{-ms/2} prod Gamma((s + c_j)/2).
cplx log_gamma_factor(const LSeriesDescriptor& desc, cplx s);

/// D^{s/2} L(s, pi_inf) L(s).
cplx completed_l_value(const CoefficientStream& stream, cplx s, double tol = 1e-12);

struct HardyZ {
  double value = 0.0;
  double residual_imag = 0.0;
};

/// e^{i theta(t)} L(1/2 + it) with the imaginary residue reported.
HardyZ hardy_Z_detail(const CoefficientStream& stream, double t, double tol = 1e-12);
double hardy_Z(const CoefficientStream& stream, double t, double tol = 1e-12);

struct ZeroRecord {
  double ordinate = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  double refined_tol = 0.0;
  std::string label;
};

inline constexpr double kZeroScanStep = 0.05;
inline constexpr double kMaxOrdinate = 500.0;

std::vector<ZeroRecord> find_zeros(const CoefficientStream& stream, double t_lo, double t_hi, double tol = 1e-9,
                                   double step = kZeroScanStep);

/// The k-th zero (1-based) above ordinate 0; throws DomainError if fewer
/// than k zeros lie below kMaxOrdinate.
ZeroRecord nth_zero(const CoefficientStream& stream, int k, double tol = 1e-9);

std::string zeros_to_csv(const std::vector<ZeroRecord>& zeros);

/// l_value at 1/2 when the stream is evaluable, else the override.
cplx central_value(const CoefficientStream& stream, std::optional<cplx> override_value = std::nullopt);

}  // namespace tate
