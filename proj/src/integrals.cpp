#include "tate/integrals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "json.hpp"

#include "tate/evaluator.hpp"

namespace tate {

namespace {

nlohmann::json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

std::string IntegralResult::to_json() const {
  nlohmann::json j;
  if (complex_valued) {
    j["value"] = {{"re", value.real()}, {"im", value.imag()}};
  } else {
    j["value"] = value.real();
  }
  nlohmann::json tr = nlohmann::json::object();
  if (truncation.x_max) tr["x_max"] = *truncation.x_max;
  if (truncation.T) tr["T"] = *truncation.T;
  if (truncation.line_re) tr["line_re"] = *truncation.line_re;
  j["truncation"] = tr;
  j["tail_estimate"] = number_or_null(tail_estimate);
  j["tail_method"] = tail_method;
  j["error_bound"] = number_or_null(error_bound);
  if (!warning.empty()) j["warning"] = warning;
  return j.dump();
}

double weight_exponent(Weight w) {
  switch (w) {
    case Weight::dx: return 0.0;
    case Weight::dx_over_x: return -1.0;
    case Weight::dx_over_x2: return -2.0;
  }
  return 0.0;
}

double kernel_l2_norm_range(const PiecewiseKernel& kernel, double r, double a, double b) {
  if (b > kernel.x_max) throw DomainError("range exceeds the kernel's x_max");
  a = std::max(a, kernel.support_lo);
  if (!(b > a)) return 0.0;
  const std::size_t first = kernel.locate(a);
  const std::size_t last = std::min(kernel.locate(b), kernel.interval_count() - 1);
  std::vector<double> parts(last - first + 1);
  parallel_for(parts.size(), [&](std::size_t i) {
    const std::size_t k = first + i;
    const double l = std::max(a, kernel.interval_left(k));
    const double rr = std::min(b, kernel.interval_right(k));
    parts[i] = interval_square_integral(kernel.interval_coeffs[k], kernel.power_exponent, kernel.offset_d,
                                        kernel.offset_power, r, l, rr);
  });
  return pairwise_sum(parts);
}

double kernel_tail_estimate(const PiecewiseKernel& kernel, double r, double X) {
  switch (kernel.tail.kind) {
    case TailKind::closed_form_m1:
      // Mean of psi(x)^2 / x^2 is 1/(12 x^2).
      if (r >= 1.0) return std::numeric_limits<double>::infinity();
      return std::pow(X, r - 1.0) / (12.0 * (1.0 - r));
    case TailKind::exponent_fit: {
      const double e = 2.0 * kernel.tail.beta + r + 1.0;
      if (e >= 0.0) return std::numeric_limits<double>::infinity();
      return kernel.tail.C * kernel.tail.C * std::pow(X, e) / (-e);
    }
    case TailKind::none:
      return 0.0;
  }
  return 0.0;
}

IntegralResult kernel_l2_norm(const PiecewiseKernel& kernel, Weight weight, double x_max) {
  if (x_max > kernel.x_max) {
    throw DomainError("requested x_max " + std::to_string(x_max) + " exceeds the kernel's x_max " +
                      std::to_string(kernel.x_max));
  }
  const double r = weight_exponent(weight);
  if (kernel.support_lo == 0.0 && kernel.offset_d != 0.0 && 2.0 * kernel.offset_power.real() + r <= -1.0) {
    throw DomainError("weighted norm diverges at 0 for this kernel");
  }
  IntegralResult out;
  out.value = kernel_l2_norm_range(kernel, r, 0.0, x_max);
  out.truncation.x_max = x_max;
  out.tail_method = "kernel:" + to_string(kernel.tail.kind);
  out.tail_estimate = kernel_tail_estimate(kernel, r, x_max);
  const double rounding = 1e-13 * std::abs(out.value.real()) * std::log2(2.0 + kernel.interval_count());
  out.error_bound = rounding + kTailSafety * out.tail_estimate;
  if (!std::isfinite(out.tail_estimate)) out.warning = "tail model predicts divergence beyond x_max";
  if (kernel.tail.kind == TailKind::none) out.warning = "no tail model; error_bound covers rounding only";
  return out;
}

// ---------------------------------------------------------------------------
// Critical-line sampling.

LineSampler::LineSampler(CoefficientStream stream, double line_re)
    : stream_(std::move(stream)), line_re_(line_re), mirror_by_conjugation_(stream_.real_coefficients()) {
  if (!stream_.evaluable()) {
    throw UnsupportedError("stream '" + stream_.spec() + "' has no critical-line evaluator");
  }
}

LineSampler::Panel LineSampler::make_panel(double a, double b) const {
  const auto& gk = gauss_kronrod15();
  Panel p;
  p.a = a;
  p.b = b;
  p.values.resize(15);
  p.mirror.resize(15);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int j = 0; j < 15; ++j) {
    const double t = mid + half * gk.nodes[j];
    p.values[j] = l_value(stream_, cplx(line_re_, t), 1e-11).value;
    p.mirror[j] = mirror_by_conjugation_ ? std::conj(p.values[j]) : l_value(stream_, cplx(line_re_, -t), 1e-11).value;
  }
  return p;
}

void LineSampler::ensure_base(std::size_t count) {
  const std::size_t have = base_.size();
  if (count <= have) return;
  std::vector<Panel> fresh(count - have);
  parallel_for(fresh.size(), [&](std::size_t i) {
    const double a = kPanelWidth * static_cast<double>(have + i);
    fresh[i] = make_panel(a, a + kPanelWidth);
  });
  for (auto& p : fresh) base_.push_back(std::move(p));
}

const LineSampler::Panel& LineSampler::base_panel(std::size_t k) { return base_.at(k); }

std::vector<const LineSampler::Panel*> LineSampler::panels(double T, const std::vector<double>& foci) {
  std::lock_guard<std::mutex> lock(mutex_);
  const auto full = static_cast<std::size_t>(std::floor(T / kPanelWidth + 1e-12));
  // Work out the layout first, then compute anything missing in one batch.
  struct Slot {
    bool base;
    std::size_t index;
    double a;
    double b;
  };
  std::vector<Slot> layout;
  const std::size_t count = static_cast<std::size_t>(std::ceil(T / kPanelWidth - 1e-12));
  for (std::size_t k = 0; k < count; ++k) {
    const double a = kPanelWidth * static_cast<double>(k);
    const double b = std::min(T, a + kPanelWidth);
    bool refine = false;
    for (double f : foci) {
      if (b > f - kRefineRadius && a < f + kRefineRadius) refine = true;
    }
    if (!refine && k < full) {
      layout.push_back({true, k, a, b});
      continue;
    }
    std::vector<double> cuts{a, b};
    if (refine) {
      for (int j = 1; j < kRefineFactor; ++j) {
        const double c = a + kPanelWidth * j / kRefineFactor;
        if (c < b) cuts.push_back(c);
      }
    }
    for (double f : foci) {
      if (f > a && f < b) cuts.push_back(f);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
      if (cuts[j + 1] - cuts[j] < 1e-12) continue;
      layout.push_back({false, 0, cuts[j], cuts[j + 1]});
    }
  }
  ensure_base(full);
  std::vector<std::pair<double, double>> missing;
  auto find_fine = [&](double a, double b) -> const Panel* {
    for (const auto& [key, ptr] : fine_) {
      if (key.first == a && key.second == b) return ptr.get();
    }
    return nullptr;
  };
  for (const auto& s : layout) {
    if (!s.base && find_fine(s.a, s.b) == nullptr) missing.emplace_back(s.a, s.b);
  }
  std::sort(missing.begin(), missing.end());
  missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
  std::vector<Panel> fresh(missing.size());
  parallel_for(missing.size(), [&](std::size_t i) { fresh[i] = make_panel(missing[i].first, missing[i].second); });
  for (std::size_t i = 0; i < missing.size(); ++i) {
    fine_.emplace_back(missing[i], std::make_unique<Panel>(std::move(fresh[i])));
  }
  std::vector<const Panel*> out;
  out.reserve(layout.size());
  for (const auto& s : layout) out.push_back(s.base ? &base_panel(s.index) : find_fine(s.a, s.b));
  return out;
}

std::shared_ptr<LineSampler> line_sampler(const CoefficientStream& stream, double line_re) {
  static std::mutex registry_mutex;
  static std::map<std::string, std::shared_ptr<LineSampler>> registry;
  std::ostringstream key;
  key.precision(17);
  key << stream.spec() << '|' << line_re;
  for (const auto& f : stream.factors()) {
    key << '|' << f.modulus;
    for (const auto& v : f.values) key << ',' << v.real() << ':' << v.imag();
  }
  std::lock_guard<std::mutex> lock(registry_mutex);
  auto& slot = registry[key.str()];
  if (!slot) slot = std::make_shared<LineSampler>(stream, line_re);
  return slot;
}

double critical_tail_estimate(const LSeriesDescriptor& desc, double sigma, double T) {
  const int m = desc.degree_m;
  const double beta = m * std::max(0.0, 1.0 - 2.0 * sigma);
  const double lambda = 1.0 - beta;
  if (lambda <= 0.0) return std::numeric_limits<double>::infinity();
  const double a = std::log(desc.analytic_conductor) / m;
  // int_{log T}^inf e^{-lambda u} (u + a)^m du
  const double U = std::log(T);
  double sum = 0.0;
  double falling = 1.0;
  for (int j = 0; j <= m; ++j) {
    sum += falling * std::pow(std::max(U + a, 0.0), m - j) / std::pow(lambda, j + 1);
    falling *= (m - j);
  }
  return kTailSafety * 2.0 * std::exp(-lambda * U) * sum;
}

namespace {

struct LineSums {
  double value = 0.0;
  double quad_error = 0.0;
};

template <typename Integrand>
LineSums integrate_panels(const std::vector<const LineSampler::Panel*>& panels, Integrand f) {
  const auto& gk = gauss_kronrod15();
  std::vector<double> k15(panels.size());
  std::vector<double> diff(panels.size());
  for (std::size_t i = 0; i < panels.size(); ++i) {
    const auto& p = *panels[i];
    const double mid = 0.5 * (p.a + p.b);
    const double half = 0.5 * (p.b - p.a);
    double kr = 0.0;
    double ga = 0.0;
    for (int j = 0; j < 15; ++j) {
      const double t = mid + half * gk.nodes[j];
      const double v = f(t, p.values[j], p.mirror[j]);
      kr += gk.kronrod_weights[j] * v;
      ga += gk.gauss_weights[j] * v;
    }
    k15[i] = half * kr;
    diff[i] = half * std::abs(kr - ga);
  }
  return {pairwise_sum(k15), pairwise_sum(diff)};
}

void require_line(double line_re, double T) {
  if (!(line_re > 0.0 && line_re < 1.0)) throw DomainError("line_re must lie in (0, 1)");
  if (T < 100.0) throw DomainError("T must be at least 100");
}

}  // namespace

IntegralResult vertical_line_integral(const CoefficientStream& stream, cplx s, double line_re, double T,
                                      CenterShift center_shift) {
  require_line(line_re, T);
  if (!stream.evaluable()) {
    throw UnsupportedError("stream '" + stream.spec() + "' has no critical-line evaluator");
  }
  if (center_shift == CenterShift::pole_at_s && !(s.real() > 0.0 && s.real() < 1.0)) {
    throw DomainError("pole_at_s requires s in the critical strip");
  }
  const cplx z = center_shift == CenterShift::pole_at_s ? s : cplx(0.0);
  if (std::abs(line_re - z.real()) < 1e-12) {
    const double residual = std::abs(l_value(stream, z).value);
    if (residual > 1e-6) {
      throw PreconditionError("the integrand has a double pole at s unless L(s) = 0; |L(s)| = " +
                              std::to_string(residual));
    }
  }
  auto sampler = line_sampler(stream, line_re);
  std::vector<double> foci;
  if (std::abs(z.imag()) < T) foci.push_back(std::abs(z.imag()));
  const auto panels = sampler->panels(T, foci);
  const double dx = line_re - z.real();
  const auto sums = integrate_panels(panels, [&](double t, cplx up, cplx down) {
    const double d_up = dx * dx + (t - z.imag()) * (t - z.imag());
    const double d_down = dx * dx + (t + z.imag()) * (t + z.imag());
    return std::norm(up) / d_up + std::norm(down) / d_down;
  });
  IntegralResult out;
  out.value = sums.value;
  out.truncation.T = T;
  out.truncation.line_re = line_re;
  out.tail_method = "mean-square heuristic (log t + log c/m)^m t^(m max(0,1-2 sigma) - 2), x3";
  out.tail_estimate = critical_tail_estimate(stream.descriptor(), line_re, T);
  out.error_bound = sums.quad_error + out.tail_estimate + 1e-12 * sums.value;
  out.truncated_error = sums.quad_error + 1e-12 * sums.value;
  if (std::abs(z.imag()) + LineSampler::kRefineRadius > T) {
    out.warning = "T does not separate the peak near Im z";
    out.error_bound *= 10.0;
    out.truncated_error *= 10.0;
  }
  if (!std::isfinite(out.tail_estimate)) out.warning = "tail heuristic diverges on this line";
  return out;
}

IntegralResult variance_integral(const CoefficientStream& stream, double T) {
  require_line(0.5, T);
  const cplx central = central_value(stream);
  auto sampler = line_sampler(stream, 0.5);
  const auto panels = sampler->panels(T, {});
  const auto sums = integrate_panels(panels, [&](double t, cplx up, cplx down) {
    return (std::norm(up - central) + std::norm(down - central)) / (t * t);
  });
  IntegralResult out;
  out.value = sums.value;
  out.truncation.T = T;
  out.truncation.line_re = 0.5;
  out.tail_method = "mean-square heuristic plus |L(1/2)|^2/T, x3";
  out.tail_estimate = critical_tail_estimate(stream.descriptor(), 0.5, T) + kTailSafety * 2.0 * std::norm(central) / T;
  out.error_bound = sums.quad_error + out.tail_estimate + 1e-12 * sums.value;
  out.truncated_error = sums.quad_error + 1e-12 * sums.value;
  return out;
}

// ---------------------------------------------------------------------------
// Transforms.

IntegralResult mellin_of_kernel(const PiecewiseKernel& kernel, cplx w) {
  const bool zeta_zero = kernel.tail.kind == TailKind::closed_form_m1;
  if (zeta_zero && !(w.real() > 0.0 && w.real() < 1.0)) {
    throw DomainError("the Mellin transform of H_s converges absolutely for 0 < Re w < 1");
  }
  if (kernel.support_lo == 0.0 && kernel.offset_d != 0.0 && (kernel.offset_power + w).real() <= 0.0) {
    throw DomainError("Mellin transform diverges at 0: need Re w > 0");
  }
  const cplx wm1 = w - 1.0;
  std::vector<cplx> parts(kernel.interval_count());
  parallel_for(parts.size(), [&](std::size_t k) {
    parts[k] = interval_moment(kernel.interval_coeffs[k], kernel.power_exponent, kernel.offset_d, kernel.offset_power,
                               wm1, kernel.interval_left(k), kernel.interval_right(k));
  });
  IntegralResult out;
  out.complex_valued = true;
  out.truncation.x_max = kernel.x_max;
  const cplx body = pairwise_sum(parts);
  if (zeta_zero) {
    const double Xd = kernel.x_max;
    if (Xd != std::floor(Xd)) throw DomainError("the exact tail needs an integer x_max");
    const auto X = static_cast<std::int64_t>(Xd);
    const cplx s = kernel.s;
    const cplx g_w = sawtooth_tail(X, w - 2.0);
    const cplx g_s = sawtooth_tail(X, -s - 1.0);
    // A scaled copy carries its factor in the offset, d = a / (1 - s).
    const cplx scale = kernel.offset_d * (1.0 - s);
    const cplx tail = scale * (-g_w + s / (s + w - 1.0) * (g_w - std::exp((s + w - 1.0) * std::log(Xd)) * g_s));
    out.value = body + tail;
    out.tail_estimate = std::abs(tail);
    out.tail_method = "exact sawtooth continuation";
    out.error_bound = 1e-12 * (std::abs(out.value) + 1.0);
  } else {
    out.value = body;
    out.tail_method = "envelope bound " + to_string(kernel.tail.kind);
    if (kernel.tail.kind == TailKind::exponent_fit) {
      const double e = kernel.tail.beta + w.real();
      out.tail_estimate = e < 0.0 ? kernel.tail.C * std::pow(kernel.x_max, e) / (-e) : std::numeric_limits<double>::infinity();
    }
    out.error_bound = kTailSafety * out.tail_estimate + 1e-12 * std::abs(out.value);
    if (!std::isfinite(out.tail_estimate)) out.warning = "tail envelope does not decay against x^{w-1}";
  }
  return out;
}

cplx zeta_tate_kernel_value(cplx s, double x) {
  if (!(x > 0.0)) throw DomainError("H_s needs x > 0");
  CompensatedSum<cplx> acc;
  const auto N = static_cast<std::int64_t>(std::floor(x));
  for (std::int64_t n = 1; n <= N; ++n) acc.add(std::exp(-s * std::log(static_cast<double>(n))));
  return std::exp((s - 1.0) * std::log(x)) * acc.value() - 1.0 / (1.0 - s);
}

namespace {

// (pi/2 - Si(z)) for z >= 1e3 from the auxiliary-function asymptotics,
// with cos z and sin z supplied.
double si_complement(double z, double cz, double sz) {
  const double iz2 = 1.0 / (z * z);
  const double f = (1.0 - 2.0 * iz2 * (1.0 - 12.0 * iz2 * (1.0 - 30.0 * iz2))) / z;
  const double g = iz2 * (1.0 - 6.0 * iz2 * (1.0 - 20.0 * iz2 * (1.0 - 42.0 * iz2)));
  return f * cz + g * sz;
}

}  // namespace

IntegralResult fourier_of_kernel_zeta(cplx s, double xi, double x_max) {
  const double residual = std::abs(zeta_value(s).value);
  if (residual > 1e-6) {
    throw PreconditionError("the Fourier identity needs zeta(s) = 0; |zeta(s)| = " + std::to_string(residual));
  }
  xi = std::abs(xi);
  if (xi == 0.0) throw DomainError("xi = 0 is excluded");
  if (xi == std::floor(xi)) throw DomainError("integer xi is excluded (H_{1-s} jumps there)");
  if (x_max != std::floor(x_max) || x_max < 100.0) throw DomainError("x_max must be an integer >= 100");
  const auto X = static_cast<std::int64_t>(x_max);
  const double w = kTwoPi * xi;
  const cplx d = 1.0 / (1.0 - s);
  static const QuadratureRule gl = gauss_legendre(20);

  // [0, 1): H = -d.
  std::vector<cplx> parts(X);
  parts[0] = -d * std::sin(w) / w;
  // Partial sums A_s(n) for the unit intervals.
  std::vector<cplx> A(X + 1);
  {
    CompensatedSum<cplx> run;
    A[0] = 0.0;
    for (std::int64_t n = 1; n <= X; ++n) {
      run.add(std::exp(-s * std::log(static_cast<double>(n))));
      A[n] = run.value();
    }
  }
  parallel_for(static_cast<std::size_t>(X - 1), [&](std::size_t i) {
    const auto n = static_cast<std::int64_t>(i) + 1;
    const double a = static_cast<double>(n);
    cplx acc = 0.0;
    for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
      const double x = a + 0.5 + 0.5 * gl.nodes[j];
      acc += gl.weights[j] * std::exp((s - 1.0) * std::log(x)) * std::cos(w * x);
    }
    const cplx power_part = 0.5 * A[n] * acc;
    const cplx const_part = d * (std::sin(w * (a + 1.0)) - std::sin(w * a)) / w;
    parts[n] = power_part - const_part;
  });
  const cplx body = 2.0 * pairwise_sum(parts);

  // Beyond X: -psi(x)/x via the sawtooth Fourier series; cos and sin of
  // 2 pi (k +- xi) X reduce to those of 2 pi xi X since k X is an integer.
  const double frac = xi * static_cast<double>(X) - std::floor(xi * static_cast<double>(X));
  const double cz = std::cos(kTwoPi * frac);
  const double sz = std::sin(kTwoPi * frac);
  const int K = 4000;
  double series = 0.0;
  for (int k = K; k >= 1; --k) {
    const double zp = kTwoPi * (k + xi) * static_cast<double>(X);
    const double nu = k - xi;
    const double zm = kTwoPi * std::abs(nu) * static_cast<double>(X);
    // sin(zm) carries the sign of nu through the reduction.
    const double sp = si_complement(zp, cz, sz);
    const double sm = (nu > 0 ? 1.0 : -1.0) * si_complement(zm, cz, nu > 0 ? -sz : sz);
    series += (sp + sm) / (kPi * k);
  }
  IntegralResult out;
  out.complex_valued = true;
  out.value = body + series;
  out.truncation.x_max = x_max;
  out.tail_method = "sawtooth Fourier series beyond x_max; s x^{s-1} R(x) remainder bounded";
  const double remainder = 2.0 * std::abs(s) / (6.0 * x_max);
  const double series_cut = 2.0 / (kPi * kPi * x_max * K);
  out.tail_estimate = remainder + std::abs(series);
  out.error_bound = remainder + series_cut + 1e-10;
  return out;
}

// ---------------------------------------------------------------------------
// Friedlander-Iwaniec main term.

FIConstants fi_constants(const LSeriesDescriptor& desc) {
  FIConstants k;
  const double m = desc.degree_m;
  k.Q = std::pow(static_cast<double>(desc.conductor_D), 1.0 / m) / kTwoPi;
  k.beta = 0.5 + 1.0 / m;
  cplx c = 0.0;
  for (const auto& cj : desc.gamma_params) c += cj;
  k.c_sum = c;
  const cplx i(0.0, 1.0);
  k.omega1 = std::exp(-i * m * kPi / 4.0) * std::exp(i * kPi * c / 2.0);
  k.omega2 = std::exp(i * m * kPi / 4.0) * std::exp(-i * kPi * c / 2.0);
  k.epsilon_pi = 1.0;
  return k;
}

cplx fi_B(const CoefficientStream& stream, const FIConstants& k, double x, double N) {
  const auto& desc = stream.descriptor();
  const int m = desc.degree_m;
  const auto top = static_cast<std::int64_t>(std::floor(N));
  if (top > stream.n_max()) throw TruncationError("B(x, N) needs coefficients beyond N_max");
  const long double D = static_cast<long double>(desc.conductor_D);
  const cplx i(0.0, 1.0);
  const cplx e1 = k.omega1 * std::exp(-i * kPi / 4.0);
  const cplx e2 = k.omega2 * std::exp(i * kPi / 4.0);
  const double expo = -(m + 1.0) / (2.0 * m);
  CompensatedSum<cplx> acc;
  for (std::int64_t n = 1; n <= top; ++n) {
    const cplx b = std::conj(stream.coeff(n));
    if (b == 0.0) continue;
    // Phase 2 pi m (n x / D)^{1/m}, reduced modulo 1 in extended precision.
    const long double ratio = static_cast<long double>(n) * static_cast<long double>(x) / D;
    const long double u = static_cast<long double>(m) * (m == 2 ? std::sqrt(ratio) : std::pow(ratio, 1.0L / m));
    const double fr = static_cast<double>(u - std::floor(u));
    const double ph = kTwoPi * fr;
    const cplx rot(std::cos(ph), std::sin(ph));
    acc.add(b * std::pow(static_cast<double>(n), expo) * (e1 * std::conj(rot) + e2 * rot));
  }
  return acc.value();
}

cplx fi_main_term(const CoefficientStream& stream, const FIConstants& k, cplx s, double x, double N) {
  const auto& desc = stream.descriptor();
  const int m = desc.degree_m;
  if (m != 2 || !desc.self_dual) throw DomainError("the explicit main term is implemented for self-dual m = 2");
  const double upper = x / std::pow(kTwoPi, m);
  if (!(N >= 1.0 && N <= upper)) {
    throw DomainError("N must satisfy 1 <= N <= (2 pi)^{-m} x = " + std::to_string(upper));
  }
  const double md = m;
  return k.epsilon_pi * std::exp(-s * std::log(x)) * std::sqrt(k.Q / (kTwoPi * md)) *
         std::pow(x, (md - 1.0) / (2.0 * md)) * fi_B(stream, k, x, N);
}

}  // namespace tate
