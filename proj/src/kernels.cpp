#include "tate/kernels.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "tate/evaluator.hpp"

namespace tate {

std::string to_string(TailKind kind) {
  switch (kind) {
    case TailKind::closed_form_m1: return "closed_form_m1";
    case TailKind::exponent_fit: return "exponent_fit";
    case TailKind::none: return "none";
  }
  return "none";
}

double PiecewiseKernel::breakpoint(std::size_t k) const {
  return static_cast<double>(break_numerators.at(k)) / static_cast<double>(denominator);
}

double PiecewiseKernel::interval_left(std::size_t k) const { return k == 0 ? support_lo : breakpoint(k - 1); }

double PiecewiseKernel::interval_right(std::size_t k) const {
  return k + 1 < interval_coeffs.size() ? breakpoint(k) : x_max;
}

std::size_t PiecewiseKernel::locate(double x) const {
  // Number of breakpoints n/D with n/D <= x, compared as n <= x D.
  const double scaled = x * static_cast<double>(denominator);
  auto it = std::upper_bound(break_numerators.begin(), break_numerators.end(), scaled,
                             [](double v, std::int64_t n) { return v < static_cast<double>(n); });
  return static_cast<std::size_t>(it - break_numerators.begin());
}

cplx PiecewiseKernel::value(double x) const {
  if (!(x > 0.0)) throw DomainError("kernel argument must be positive");
  if (x > x_max) throw DomainError("kernel evaluated at x = " + std::to_string(x) + " beyond x_max = " +
                                   std::to_string(x_max));
  if (x < support_lo) return 0.0;
  const cplx c = interval_coeffs[locate(x)];
  const double lx = std::log(x);
  cplx out = -offset_d * (offset_power == 0.0 ? cplx(1.0) : std::exp(offset_power * lx));
  if (c != 0.0) out += c * (power_exponent == 0.0 ? cplx(1.0) : std::exp(power_exponent * lx));
  return out;
}

PiecewiseKernel PiecewiseKernel::scaled(cplx a) const {
  PiecewiseKernel k = *this;
  for (auto& c : k.interval_coeffs) c *= a;
  k.offset_d *= a;
  k.tail.C *= std::abs(a);
  return k;
}

std::string PiecewiseKernel::to_csv() const {
  std::ostringstream os;
  os << "x_left,x_right,coeff_re,coeff_im\n";
  char buf[160];
  for (std::size_t k = 0; k < interval_coeffs.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", interval_left(k), interval_right(k),
                  interval_coeffs[k].real(), interval_coeffs[k].imag());
    os << buf;
  }
  return os.str();
}

double interval_square_integral(cplx c, cplx p, cplx d, cplx q, double r, double a, double b) {
  if (b <= a) return 0.0;
  double out = 0.0;
  if (c != 0.0) out += std::norm(c) * power_integral(a, b, 2.0 * p.real() + r).real();
  if (d != 0.0) out += std::norm(d) * power_integral(a, b, 2.0 * q.real() + r).real();
  if (c != 0.0 && d != 0.0) {
    out -= 2.0 * (c * std::conj(d) * power_integral(a, b, p + std::conj(q) + r)).real();
  }
  return out;
}

cplx interval_moment(cplx c, cplx p, cplx d, cplx q, cplx w, double a, double b) {
  if (b <= a) return 0.0;
  cplx out = 0.0;
  if (c != 0.0) out += c * power_integral(a, b, p + w);
  if (d != 0.0) out -= d * power_integral(a, b, q + w);
  return out;
}

cplx partial_sum_A(const CoefficientStream& stream, cplx s, double x) {
  if (x < 0.0) throw DomainError("partial_sum_A requires x >= 0");
  const auto N = static_cast<std::int64_t>(std::floor(x));
  if (N > stream.n_max()) {
    throw TruncationError("partial sum to x = " + std::to_string(x) + " needs coefficients up to " +
                          std::to_string(N) + " but stream '" + stream.spec() + "' has N_max = " +
                          std::to_string(stream.n_max()) + " (shortfall " + std::to_string(N - stream.n_max()) + ")");
  }
  const auto a = stream.prefix();
  CompensatedSum<cplx> acc;
  for (std::int64_t n = 1; n <= N; ++n) {
    if (a[n] == 0.0) continue;
    acc.add(a[n] * std::exp(-s * std::log(static_cast<double>(n))));
  }
  return acc.value();
}

namespace {

void require_coefficients(const CoefficientStream& stream, double x) {
  const auto N = static_cast<std::int64_t>(std::floor(x));
  if (N > stream.n_max()) {
    throw TruncationError("kernel up to x = " + std::to_string(x) + " needs coefficients up to " +
                          std::to_string(N) + " but stream '" + stream.spec() + "' has N_max = " +
                          std::to_string(stream.n_max()) + " (shortfall " + std::to_string(N - stream.n_max()) + ")");
  }
}

// Interval coefficients from terms term(n, a_n) at positions n/denominator,
// n = 1..N; terms at positions <= support_lo seed the first interval.
template <typename TermFn>
void fill_steps(PiecewiseKernel& k, const CoefficientStream& stream, std::int64_t N, TermFn term) {
  const auto a = stream.prefix();
  const double lo_scaled = k.support_lo * static_cast<double>(k.denominator);
  k.interval_coeffs.clear();
  k.break_numerators.clear();
  CompensatedSum<cplx> run;
  for (std::int64_t n = 1; n <= N; ++n) {
    if (a[n] == 0.0) continue;
    if (static_cast<double>(n) > lo_scaled) {
      if (k.break_numerators.empty()) k.interval_coeffs.push_back(run.value());
      k.break_numerators.push_back(n);
      run.add(term(n, a[n]));
      k.interval_coeffs.push_back(run.value());
    } else {
      run.add(term(n, a[n]));
    }
  }
  if (k.break_numerators.empty()) k.interval_coeffs.push_back(run.value());
}

}  // namespace

PiecewiseKernel build_tate_kernel(const CoefficientStream& stream, cplx s, double x_max) {
  if (s == cplx(1.0, 0.0)) throw PoleError("H_s is undefined at s = 1");
  if (x_max < 2.0) throw DomainError("build_tate_kernel requires x_max >= 2");
  require_coefficients(stream, x_max);
  const auto& desc = stream.descriptor();
  PiecewiseKernel k;
  k.label = "H_s[" + desc.label + "]";
  k.s = s;
  k.offset_d = desc.residue_kappa / (1.0 - s);
  k.power_exponent = s - 1.0;
  k.support_lo = 0.0;
  k.x_max = x_max;
  fill_steps(k, stream, static_cast<std::int64_t>(std::floor(x_max)), [&](std::int64_t n, cplx an) {
    return an * std::exp(-s * std::log(static_cast<double>(n)));
  });
  bool zeta_zero = false;
  if (stream.kind() == StreamKind::zeta && s.real() > 0.0 && s.real() < 1.0) {
    zeta_zero = std::abs(zeta_value(s).value) <= 1e-6;
  }
  if (zeta_zero) {
    k.tail.kind = TailKind::closed_form_m1;
  } else {
    k.tail = fit_tail(k);
  }
  return k;
}

cplx closed_form_H_zeta(cplx s, double x) {
  if (!(s.real() > 0.0 && s.real() < 1.0)) throw DomainError("closed_form_H_zeta requires 0 < Re s < 1");
  if (x < 1.0) throw DomainError("closed_form_H_zeta requires x >= 1");
  if (x == std::floor(x)) throw DomainError("closed_form_H_zeta is evaluated off the integers");
  const double residual = std::abs(zeta_value(s).value);
  if (residual > 1e-6) {
    throw PreconditionError("closed form needs zeta(s) = 0; |zeta(s)| = " + std::to_string(residual));
  }
  const cplx a = -s - 1.0;
  const auto M = static_cast<std::int64_t>(std::ceil(x)) + static_cast<std::int64_t>(std::ceil(4.0 * (std::abs(s) + 10.0)));
  const cplx R = sawtooth_segment(x, M, a) + sawtooth_tail(M, a);
  const double psi = x - std::floor(x) - 0.5;
  return -psi / x + s * std::exp((s - 1.0) * std::log(x)) * R;
}

PiecewiseKernel build_inverse_different_kernel(std::int64_t d, cplx s, double x_max) {
  if (s == cplx(1.0, 0.0)) throw PoleError("K_s is undefined at s = 1");
  require_fundamental_discriminant(d);
  if (d == 1) {
    auto k = build_tate_kernel(make_zeta(static_cast<std::int64_t>(std::ceil(x_max)) + 1), s, x_max);
    k.label = "K_s[Q]";
    return k;
  }
  const std::int64_t D = std::abs(d);
  const double scaled_max = x_max * static_cast<double>(D);
  const auto stream = make_dedekind_quadratic(d, static_cast<std::int64_t>(std::ceil(scaled_max)) + 1);
  const double sqrtD = std::sqrt(static_cast<double>(D));
  PiecewiseKernel k;
  k.label = "K_s[" + stream.descriptor().label + "]";
  k.s = s;
  k.offset_d = stream.descriptor().residue_kappa * sqrtD / (1.0 - s);
  k.power_exponent = s - 1.0;
  k.denominator = D;
  k.x_max = x_max;
  const double logD = std::log(static_cast<double>(D));
  fill_steps(k, stream, static_cast<std::int64_t>(std::floor(scaled_max)), [&](std::int64_t n, cplx an) {
    return an * std::exp(-s * (std::log(static_cast<double>(n)) - logD)) / sqrtD;
  });
  k.tail = fit_tail(k);
  return k;
}

std::vector<cplx> sqrt_weighted_prefix(const CoefficientStream& stream, std::int64_t N) {
  if (N > stream.n_max()) {
    throw TruncationError("prefix up to " + std::to_string(N) + " exceeds N_max = " + std::to_string(stream.n_max()) +
                          " of stream '" + stream.spec() + "' (shortfall " + std::to_string(N - stream.n_max()) + ")");
  }
  const auto a = stream.prefix();
  std::vector<cplx> out(N + 1);
  CompensatedSum<cplx> run;
  out[0] = 0.0;
  for (std::int64_t n = 1; n <= N; ++n) {
    if (a[n] != 0.0) run.add(a[n] / std::sqrt(static_cast<double>(n)));
    out[n] = run.value();
  }
  return out;
}

PiecewiseKernel build_variance_kernel(const CoefficientStream& stream, cplx central, double x_max,
                                      VarianceWeight weight) {
  if (x_max < 2.0) throw DomainError("build_variance_kernel requires x_max >= 2");
  require_coefficients(stream, x_max);
  const auto N = static_cast<std::int64_t>(std::floor(x_max));
  PiecewiseKernel k;
  k.support_lo = 1.0;
  k.x_max = x_max;
  k.s = 0.5;
  const auto a = stream.prefix();
  if (weight == VarianceWeight::sqrt_n) {
    k.label = "H[" + stream.descriptor().label + "]";
    k.power_exponent = 0.0;
    k.offset_d = central;
    k.offset_power = 0.0;
    const auto P = sqrt_weighted_prefix(stream, N);
    k.interval_coeffs.push_back(P[1]);
    for (std::int64_t n = 2; n <= N; ++n) {
      if (a[n] == 0.0) continue;
      k.break_numerators.push_back(n);
      k.interval_coeffs.push_back(P[n]);
    }
  } else {
    k.label = "K[" + stream.descriptor().label + "]";
    k.s = 0.0;
    k.power_exponent = -0.5;
    CompensatedSum<cplx> run;
    if (stream.kind() == StreamKind::zeta) {
      // Subtracting x itself keeps [0, 1) in play: there K = -x^{1/2}.
      k.support_lo = 0.0;
      k.offset_d = 1.0;
      k.offset_power = 0.5;
      k.interval_coeffs.push_back(0.0);
      k.break_numerators.push_back(1);
    } else {
      k.offset_d = central;
      k.offset_power = -0.5;
    }
    run.add(a[1]);
    k.interval_coeffs.push_back(run.value());
    for (std::int64_t n = 2; n <= N; ++n) {
      if (a[n] == 0.0) continue;
      run.add(a[n]);
      k.break_numerators.push_back(n);
      k.interval_coeffs.push_back(run.value());
    }
  }
  k.tail = fit_tail(k);
  return k;
}

Mollifier::Mollifier(double eps) : eps_(eps), norm_(1.0) {
  if (!(eps > 0.0 && eps <= 0.2)) throw DomainError("mollifier eps must lie in (0, 0.2]");
  const double mass = tanh_sinh(std::function<double(double)>([](double X) { return std::exp(-1.0 / (1.0 - 4.0 * X * X)); }), -0.5, 0.5);
  norm_ = 1.0 / mass;
}

double Mollifier::phi(double X) const {
  if (std::abs(X) >= 0.5) return 0.0;
  return norm_ * std::exp(-1.0 / (1.0 - 4.0 * X * X));
}

double Mollifier::lower_edge() const { return std::exp(-0.5 * eps_); }
double Mollifier::upper_edge() const { return std::exp(0.5 * eps_); }

double Mollifier::J(double x) const {
  if (!(x > 0.0)) throw DomainError("J_eps needs x > 0");
  const double u = std::log(x) / eps_;
  if (u <= -0.5) return 1.0;
  if (u >= 0.5) return 0.0;
  const std::function<double(double)> f = [this](double X) { return phi(X); };
  double v;
  if (u >= 0.0) {
    v = tanh_sinh(f, u, 0.5);
  } else {
    v = 1.0 - tanh_sinh(f, -0.5, u);
  }
  return std::clamp(v, 0.0, 1.0);
}

cplx Mollifier::phi_hat_i_eps(cplx s) const {
  const cplx k = eps_ * s;
  return tanh_sinh(std::function<cplx(double)>([&](double X) -> cplx { return phi(X) * std::exp(k * X); }), -0.5, 0.5);
}

cplx Mollifier::mellin(cplx s) const {
  if (s == 0.0) throw PoleError("the mollifier transform has a pole at s = 0");
  return phi_hat_i_eps(s) / s;
}

double mollifier_J(double eps, double x) { return Mollifier(eps).J(x); }
cplx mollifier_mellin(double eps, cplx s) { return Mollifier(eps).mellin(s); }

cplx smoothed_kernel_H_eps(const CoefficientStream& stream, cplx central, double eps, double x) {
  if (!(x > 0.0)) throw DomainError("H_eps needs x > 0");
  const Mollifier mol(eps);
  const auto hi = static_cast<std::int64_t>(std::ceil(x * mol.upper_edge()));
  // Largest n with J(n/x) == 1 exactly.
  auto n0 = static_cast<std::int64_t>(std::floor(x * mol.lower_edge()));
  while (n0 >= 1 && mol.J(static_cast<double>(n0) / x) != 1.0) --n0;
  while (mol.J(static_cast<double>(n0 + 1) / x) == 1.0) ++n0;
  const auto P = sqrt_weighted_prefix(stream, std::max(n0, hi));
  const auto a = stream.prefix();
  cplx out = P[n0];
  for (std::int64_t n = n0 + 1; n <= hi; ++n) {
    if (a[n] == 0.0) continue;
    const double j = mol.J(static_cast<double>(n) / x);
    if (j == 0.0) continue;
    out += a[n] / std::sqrt(static_cast<double>(n)) * j;
  }
  const double j1 = mol.J(1.0 / x);
  if (j1 != 0.0) out -= central * j1;
  return out;
}

TailModel fit_tail(const PiecewiseKernel& kernel, int bins) {
  TailModel model;
  const double hi = kernel.x_max;
  const double lo = std::max(hi / 10.0, kernel.support_lo);
  if (!(hi > lo * 1.5)) return model;
  std::vector<double> xs;
  std::vector<double> ys;
  const double step = std::log(hi / lo) / bins;
  std::size_t k = kernel.locate(lo);
  for (int b = 0; b < bins; ++b) {
    const double a0 = lo * std::exp(step * b);
    const double a1 = b + 1 == bins ? hi : lo * std::exp(step * (b + 1));
    double acc = 0.0;
    while (k < kernel.interval_count() && kernel.interval_right(k) <= a0) ++k;
    std::size_t j = k;
    while (j < kernel.interval_count() && kernel.interval_left(j) < a1) {
      const double l = std::max(a0, kernel.interval_left(j));
      const double r = std::min(a1, kernel.interval_right(j));
      acc += interval_square_integral(kernel.interval_coeffs[j], kernel.power_exponent, kernel.offset_d,
                                      kernel.offset_power, 0.0, l, r);
      if (kernel.interval_right(j) >= a1) break;
      ++j;
    }
    const double ms = acc / (a1 - a0);
    if (ms > 0.0) {
      xs.push_back(0.5 * (std::log(a0) + std::log(a1)));
      ys.push_back(0.5 * std::log(ms));
    }
  }
  if (xs.size() < 2) return model;
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return model;
  model.kind = TailKind::exponent_fit;
  model.beta = (n * sxy - sx * sy) / denom;
  model.C = std::exp((sy - model.beta * sx) / n);
  return model;
}

}  // namespace tate
