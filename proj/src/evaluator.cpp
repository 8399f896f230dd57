#include "tate/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace tate {

namespace {

constexpr int kMaxEulerMaclaurinTerms = 25;

std::int64_t cutoff_for(cplx s) {
  const double t = std::abs(s.imag());
  const double sigma_excess = std::max(0.0, -s.real());
  return std::max<std::int64_t>(20, static_cast<std::int64_t>(std::ceil(0.4 * t + sigma_excess)) + 10);
}

}  // namespace

Evaluation periodic_series(const PeriodicFactor& factor, cplx s, double tol) {
  Evaluation out;
  out.clamped = tol < kMinTolerance;
  out.tol = std::max(tol, kMinTolerance);
  const bool pole = factor.has_pole();
  if (pole && s == cplx(1.0, 0.0)) throw PoleError("series has a pole at s = 1");
  const std::int64_t q = factor.modulus;
  const std::int64_t M = cutoff_for(s);
  const double sigma = s.real();
  const double t = s.imag();

  CompensatedSum<cplx> direct;
  const std::int64_t n_direct = M * q;
  for (std::int64_t n = 1; n <= n_direct; ++n) {
    const cplx v = factor.values[n % q];
    if (v == 0.0) continue;
    const double ln = std::log(static_cast<double>(n));
    const double mag = std::exp(-sigma * ln);
    const double ph = t * ln;
    direct.add(v * cplx(mag * std::cos(ph), -mag * std::sin(ph)));
  }

  // Tail: sum_{k >= M} (kq + a)^{-s} = q^{-s} zeta(s, M + a/q).
  CompensatedSum<cplx> tail;
  double err = 0.0;
  const double per_term_target = 1e-3 * out.tol / static_cast<double>(q);
  for (std::int64_t a = 1; a <= q; ++a) {
    const cplx v = factor.values[a % q];
    if (v == 0.0) continue;
    const double b = static_cast<double>(M) + static_cast<double>(a) / static_cast<double>(q);
    const double logb = std::log(b);
    const cplx b_minus_s = std::exp(-s * logb);
    cplx h;
    if (pole) {
      h = b * b_minus_s / (s - 1.0);
    } else {
      // b^{1-s}/(s-1) minus the 1/(s-1) that cancels across a period.
      h = -logb * expm1_over_z((1.0 - s) * logb);
    }
    h += 0.5 * b_minus_s;
    cplx rising = s;
    cplx pw = b_minus_s / b;
    const double inv_b2 = 1.0 / (b * b);
    double last = 0.0;
    for (int k = 1; k <= kMaxEulerMaclaurinTerms; ++k) {
      const cplx term = bernoulli_even_over_factorial(k) * rising * pw;
      const double mag = std::abs(term);
      if (k > 1 && mag > last) break;
      h += term;
      last = mag;
      if (mag < per_term_target) break;
      rising *= (s + (2.0 * k - 1.0)) * (s + 2.0 * k);
      pw *= inv_b2;
    }
    err += std::abs(v) * last;
    tail.add(v * h);
  }
  const cplx q_minus_s = q == 1 ? cplx(1.0) : std::exp(-s * std::log(static_cast<double>(q)));
  out.value = direct.value() + q_minus_s * tail.value();
  out.error_estimate = err * std::abs(q_minus_s);
  return out;
}

Evaluation zeta_value(cplx s, double tol) {
  static const PeriodicFactor unit{1, {1.0}};
  if (s == cplx(1.0, 0.0)) throw PoleError("zeta has a pole at s = 1");
  return periodic_series(unit, s, tol);
}

Evaluation l_value(const CoefficientStream& stream, cplx s, double tol) {
  if (!stream.evaluable()) {
    throw UnsupportedError("stream '" + stream.spec() +
                           "' has no critical-strip evaluator; use coefficient-side operations (partial sums, kernels)");
  }
  if (stream.descriptor().has_pole && s == cplx(1.0, 0.0)) {
    throw PoleError("stream '" + stream.spec() + "' has a pole at s = 1");
  }
  Evaluation out;
  out.value = 1.0;
  out.clamped = tol < kMinTolerance;
  out.tol = std::max(tol, kMinTolerance);
  // Split the budget so the product meets tol when the factors are O(1).
  const double each = out.tol / static_cast<double>(stream.factors().size());
  double rel = 0.0;
  for (const auto& f : stream.factors()) {
    const Evaluation e = periodic_series(f, s, each);
    out.value *= e.value;
    rel += e.error_estimate / std::max(std::abs(e.value), 1e-300);
  }
  out.error_estimate = rel * std::abs(out.value);
  return out;
}

cplx residue_of(const CoefficientStream& stream) {
  const auto& desc = stream.descriptor();
  switch (stream.kind()) {
    case StreamKind::zeta:
      return 1.0;
    case StreamKind::dirichlet:
    case StreamKind::ramanujan_tau:
      return 0.0;
    case StreamKind::dedekind_quadratic:
      return periodic_series(stream.factors().at(1), 1.0, 1e-14).value;
    case StreamKind::product: {
      if (!desc.has_pole) return 0.0;
      cplx kappa = 1.0;
      for (const auto& f : stream.factors()) {
        kappa *= f.has_pole() ? cplx(1.0) : periodic_series(f, 1.0, 1e-14).value;
      }
      return kappa;
    }
  }
  return desc.residue_kappa;
}

cplx log_gamma_factor(const LSeriesDescriptor& desc, cplx s) {
  const double m = desc.degree_m;
  cplx acc = 0.5 * s * std::log(static_cast<double>(desc.conductor_D)) - 0.5 * m * s * std::log(kPi);
  for (const cplx& c : desc.gamma_params) acc += log_gamma(0.5 * (s + c));
  return acc;
}

double theta(const LSeriesDescriptor& desc, double t) { return log_gamma_factor(desc, cplx(0.5, t)).imag(); }

cplx completed_l_value(const CoefficientStream& stream, cplx s, double tol) {
  return std::exp(log_gamma_factor(stream.descriptor(), s)) * l_value(stream, s, tol).value;
}

HardyZ hardy_Z_detail(const CoefficientStream& stream, double t, double tol) {
  if (!stream.descriptor().self_dual || !stream.real_coefficients()) {
    throw UnsupportedError("hardy_Z needs a self-dual stream with real coefficients");
  }
  const cplx L = l_value(stream, cplx(0.5, t), tol).value;
  const double th = theta(stream.descriptor(), t);
  const cplx rotated = std::polar(1.0, th) * L;
  HardyZ out{rotated.real(), rotated.imag()};
  if (std::abs(out.residual_imag) > 1e-6 * std::max(1.0, std::abs(L))) {
    throw TateError("rotated L-value has imaginary part " + std::to_string(out.residual_imag) +
                    " at t = " + std::to_string(t) + "; root number is not +1 or the evaluation is inaccurate");
  }
  return out;
}

double hardy_Z(const CoefficientStream& stream, double t, double tol) { return hardy_Z_detail(stream, t, tol).value; }

std::vector<ZeroRecord> find_zeros(const CoefficientStream& stream, double t_lo, double t_hi, double tol,
                                   double step) {
  if (!(t_lo >= 0.0 && t_lo < t_hi && t_hi <= kMaxOrdinate)) {
    throw DomainError("find_zeros requires 0 <= t_lo < t_hi <= 500");
  }
  if (tol < 1e-10) throw DomainError("find_zeros requires tol >= 1e-10");
  if (!(step > 0.0)) throw DomainError("find_zeros requires a positive scan step");
  hardy_Z(stream, t_lo);  // surfaces UnsupportedError before any work
  const std::size_t cells = static_cast<std::size_t>(std::ceil((t_hi - t_lo) / step));
  std::vector<double> grid(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) grid[i] = std::min(t_hi, t_lo + step * static_cast<double>(i));
  std::vector<double> z(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { z[i] = hardy_Z(stream, grid[i]); });

  std::vector<std::size_t> brackets;
  for (std::size_t i = 0; i < cells; ++i) {
    if (z[i] == 0.0 && grid[i] > 0.0) {
      // An exact hit on the grid: nudge so the bracket is strict.
      z[i] = hardy_Z(stream, grid[i] - 0.25 * step);
    }
    if ((z[i] < 0.0) != (z[i + 1] < 0.0) && z[i + 1] != 0.0 && z[i] != 0.0) brackets.push_back(i);
  }
  std::vector<ZeroRecord> out(brackets.size());
  parallel_for(brackets.size(), [&](std::size_t j) {
    const std::size_t i = brackets[j];
    double lo = grid[i];
    double hi = grid[i + 1];
    double zlo = z[i];
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      const double zm = hardy_Z(stream, mid);
      if (zm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((zm < 0.0) == (zlo < 0.0)) {
        lo = mid;
        zlo = zm;
      } else {
        hi = mid;
      }
    }
    out[j] = ZeroRecord{0.5 * (lo + hi), lo, hi, tol, stream.descriptor().label};
  });
  return out;
}

ZeroRecord nth_zero(const CoefficientStream& stream, int k, double tol) {
  if (k < 1) throw DomainError("zero index is 1-based");
  const auto zeros = find_zeros(stream, 0.0, std::min(kMaxOrdinate, 20.0 + 12.0 * k), tol);
  if (static_cast<int>(zeros.size()) >= k) return zeros[k - 1];
  const auto wide = find_zeros(stream, 0.0, kMaxOrdinate, tol);
  if (static_cast<int>(wide.size()) < k) {
    throw DomainError("only " + std::to_string(wide.size()) + " zeros found below ordinate 500");
  }
  return wide[k - 1];
}

std::string zeros_to_csv(const std::vector<ZeroRecord>& zeros) {
  std::ostringstream os;
  os << "label,ordinate,tol\n";
  char buf[64];
  for (const auto& z : zeros) {
    std::snprintf(buf, sizeof buf, "%.12f,%.3g", z.ordinate, z.refined_tol);
    os << z.label << ',' << buf << '\n';
  }
  return os.str();
}

cplx central_value(const CoefficientStream& stream, std::optional<cplx> override_value) {
  if (stream.evaluable()) return l_value(stream, 0.5).value;
  if (override_value) return *override_value;
  throw UnsupportedError("stream '" + stream.spec() + "' cannot be evaluated at s = 1/2; supply an override value");
}

}  // namespace tate
