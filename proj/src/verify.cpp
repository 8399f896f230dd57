#include "tate/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>

#include "json.hpp"
#include "tate/evaluator.hpp"
#include "tate/integrals.hpp"
#include "tate/kernels.hpp"

namespace tate {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json num(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

constexpr double kZeroResidual = 1e-6;
const double kLog2 = std::log(2.0);

struct ClaimInfo {
  std::string id;
  std::string description;
};

const std::vector<ClaimInfo>& registry() {
  static const std::vector<ClaimInfo> r = {
      {"T12", "I(s) > 2 pi (log 2 - 2|kappa|/|1-s|) at a zero, streams with a pole"},
      {"TA", "I(s) > 2 pi log 2 at a zero, entire streams"},
      {"TB2", "I(s) > pi log 2 at a zero, streams with a pole"},
      {"TC", "int |L(1/2+it)/(1/2+it)|^2 dt > pi, entire streams"},
      {"TD", "int |L(1/2+it)/(1/2+it)|^2 dt > pi/2, streams with a pole"},
      {"QF", "int |zeta_F(1/2+it)/(1/2+it)|^2 dt > pi/2, quadratic fields"},
      {"P31", "off-line integral > 3 pi/4 - 4 pi |kappa|/|1-s|, degree 1"},
      {"P32", "off-line integral > 3 pi/4 - 4 pi |kappa/(1-s)|, degree 2, line > 1/3"},
      {"MELLIN", "M H_s(w) = L(1-w)/(1-s-w), relative 1e-3"},
      {"FOURIER", "F H_s(xi) = -H_{1-s}(xi) for zeta, absolute 1e-2"},
      {"PARSEVAL1", "2 pi int |H_s|^2 dx = I(s)"},
      {"PARSEVAL3", "2 pi int_1^inf |sum a_n/sqrt(n) - L(1/2)|^2 dx/x = V"},
      {"PARSEVAL7", "2 pi int |sum_{n<=x} a_n - delta x|^2 dx/x^2 = int |L(1/2+it)|^2/(1/4+t^2) dt"},
      {"VAR5", "V > 2 pi log 2 |1 - L(1/2)|^2, entire streams"},
      {"NU_Q", "int_1^inf |H_0|^2 dx >= nu - 2 log nu for the quadratic character mod prime q"},
  };
  return r;
}

struct Inapplicable {
  std::string reason;
};

cplx resolve_zero(const CoefficientStream& stream, const ClaimParams& p) {
  const double gamma = p.gamma ? *p.gamma : nth_zero(stream, p.zero_index, 1e-10).ordinate;
  const cplx s(0.5, gamma);
  const double residual = std::abs(l_value(stream, s).value);
  if (residual > kZeroResidual) {
    throw PreconditionError("|L(s)| = " + fmt(residual) + " at s = " + format_complex(s) +
                            " exceeds the zero threshold 1e-6");
  }
  return s;
}

void require_evaluable(const CoefficientStream& stream) {
  if (!stream.evaluable()) throw Inapplicable{"stream has no critical-line evaluator"};
}

void inequality(ClaimReport& r, double lhs, double bound, double budget) {
  r.kind = ClaimKind::inequality;
  r.lhs = lhs;
  r.bound_or_rhs = bound;
  r.margin = lhs - bound;
  r.error_budget = budget;
  r.pass = std::isfinite(budget) && r.margin - budget > 0.0;
}

void identity(ClaimReport& r, double lhs, double rhs, double gap, double tol, double budget) {
  r.kind = ClaimKind::identity;
  r.lhs = lhs;
  r.bound_or_rhs = rhs;
  r.margin = gap;
  r.tolerance = tol;
  r.error_budget = budget;
  r.pass = std::isfinite(budget) && gap <= tol + budget;
}

// Lower-bound claims on a nonnegative integrand: the truncated integral
// already underestimates the full one, so only quadrature and rounding can
// push the true value below lhs. The tail goes into the note.
void lower_bound(ClaimReport& r, const IntegralResult& I, double bound) {
  inequality(r, I.real(), bound, I.truncated_error);
  if (!r.note.empty()) r.note += "; ";
  r.note += "omitted tail estimate " + fmt(I.tail_estimate);
}

void add_warning(ClaimReport& r, const IntegralResult& res) {
  if (res.warning.empty()) return;
  if (!r.note.empty()) r.note += "; ";
  r.note += res.warning;
}

// I(s) on line 1/2 against a fixed bound, or the kappa-dependent one when
// none is given.
void zero_integral_claim(ClaimReport& r, const CoefficientStream& stream, const ClaimParams& p,
                         std::optional<double> fixed_bound) {
  const cplx s = resolve_zero(stream, p);
  r.inputs.emplace_back("s", format_complex(s));
  r.inputs.emplace_back("T", fmt(p.T));
  const auto I = vertical_line_integral(stream, s, 0.5, p.T, CenterShift::pole_at_s);
  add_warning(r, I);
  const double bound =
      fixed_bound ? *fixed_bound : kTwoPi * (kLog2 - 2.0 * std::abs(residue_of(stream)) / std::abs(1.0 - s));
  lower_bound(r, I, bound);
}

void off_line_claim(ClaimReport& r, const CoefficientStream& stream, const ClaimParams& p,
                    const std::vector<double>& default_lines) {
  const cplx s = resolve_zero(stream, p);
  r.inputs.emplace_back("s", format_complex(s));
  r.inputs.emplace_back("T", fmt(p.T));
  const std::vector<double> lines = p.line_re ? std::vector<double>{*p.line_re} : default_lines;
  const double kappa = std::abs(residue_of(stream));
  const double bound = 0.75 * kPi - 4.0 * kPi * kappa / std::abs(1.0 - s);
  // Report the line with the smallest margin after its own budget.
  bool first = true;
  const ClaimReport base = r;
  std::string lines_text;
  for (double tau : lines) {
    if (!lines_text.empty()) lines_text += ",";
    lines_text += fmt(tau);
    const auto I = vertical_line_integral(stream, s, tau, p.T, CenterShift::pole_at_s);
    ClaimReport trial = base;
    lower_bound(trial, I, bound);
    add_warning(trial, I);
    if (first || trial.margin - trial.error_budget < r.margin - r.error_budget) {
      r = trial;
      r.note = "worst line_re = " + fmt(tau) + (trial.note.empty() ? "" : "; " + trial.note);
    }
    first = false;
  }
  r.inputs.emplace_back("line_re", lines_text);
}

ClaimReport evaluate(const std::string& id, const ClaimParams& p) {
  ClaimReport r;
  r.claim_id = id;
  r.inputs.emplace_back("stream", p.stream);
  const auto stream = parse_stream(p.stream);
  const auto& desc = stream.descriptor();

  if (id == "T12") {
    require_evaluable(stream);
    if (!desc.has_pole) throw Inapplicable{"needs a pole at s = 1"};
    zero_integral_claim(r, stream, p, std::nullopt);
  } else if (id == "TA") {
    require_evaluable(stream);
    if (desc.has_pole) throw Inapplicable{"entire streams only; TB2 covers streams with a pole"};
    zero_integral_claim(r, stream, p, kTwoPi * kLog2);
  } else if (id == "TB2") {
    require_evaluable(stream);
    if (!desc.has_pole) throw Inapplicable{"needs a pole at s = 1"};
    zero_integral_claim(r, stream, p, kPi * kLog2);
  } else if (id == "TC" || id == "TD" || id == "QF") {
    require_evaluable(stream);
    double bound = 0.0;
    if (id == "TC") {
      if (desc.has_pole) throw Inapplicable{"entire streams only"};
      bound = kPi;
    } else if (id == "TD") {
      if (!desc.has_pole) throw Inapplicable{"needs a pole at s = 1"};
      bound = 0.5 * kPi;
    } else {
      if (stream.kind() != StreamKind::dedekind_quadratic) throw Inapplicable{"quadratic Dedekind zeta only"};
      bound = 0.5 * kPi;
    }
    r.inputs.emplace_back("T", fmt(p.T));
    const auto I = vertical_line_integral(stream, 0.0, 0.5, p.T, CenterShift::pole_at_half);
    add_warning(r, I);
    lower_bound(r, I, bound);
  } else if (id == "P31") {
    require_evaluable(stream);
    if (desc.degree_m != 1) throw Inapplicable{"degree 1 only"};
    off_line_claim(r, stream, p, {0.35, 0.4, 0.45, 0.6});
  } else if (id == "P32") {
    require_evaluable(stream);
    if (desc.degree_m != 2) throw Inapplicable{"degree 2 only"};
    if (p.line_re && *p.line_re <= 1.0 / 3.0) throw DomainError("P32 needs line_re > 1/3");
    off_line_claim(r, stream, p, {0.4, 0.45, 0.5});
  } else if (id == "MELLIN") {
    require_evaluable(stream);
    const cplx s = resolve_zero(stream, p);
    const cplx w = p.w.value_or(cplx(0.5, 0.0));
    r.inputs.emplace_back("s", format_complex(s));
    r.inputs.emplace_back("w", format_complex(w));
    r.inputs.emplace_back("X", fmt(p.X));
    const auto kernel = build_tate_kernel(stream, s, p.X);
    const auto M = mellin_of_kernel(kernel, w);
    add_warning(r, M);
    const cplx rhs = l_value(stream, 1.0 - w).value / (1.0 - s - w);
    const double scale = std::abs(rhs);
    identity(r, std::abs(M.value), scale, std::abs(M.value - rhs) / scale, 1e-3, M.error_bound / scale);
    r.note = (r.note.empty() ? "" : r.note + "; ") + "relative gap; lhs " + format_complex(M.value) + ", rhs " +
             format_complex(rhs);
  } else if (id == "FOURIER") {
    if (stream.kind() != StreamKind::zeta) throw Inapplicable{"zeta only"};
    const cplx s = resolve_zero(stream, p);
    const double xi = p.xi.value_or(1.5);
    r.inputs.emplace_back("s", format_complex(s));
    r.inputs.emplace_back("xi", fmt(xi));
    r.inputs.emplace_back("X", fmt(p.X));
    const auto F = fourier_of_kernel_zeta(s, xi, p.X);
    const cplx rhs = -zeta_tate_kernel_value(1.0 - s, std::abs(xi));
    identity(r, std::abs(F.value), std::abs(rhs), std::abs(F.value - rhs), 1e-2, F.error_bound);
    r.note = "lhs " + format_complex(F.value) + ", rhs " + format_complex(rhs);
  } else if (id == "PARSEVAL1") {
    require_evaluable(stream);
    const cplx s = resolve_zero(stream, p);
    r.inputs.emplace_back("s", format_complex(s));
    r.inputs.emplace_back("T", fmt(p.T));
    r.inputs.emplace_back("X", fmt(p.X));
    const auto kernel = build_tate_kernel(stream, s, p.X);
    const auto N = kernel_l2_norm(kernel, Weight::dx, p.X);
    const auto I = vertical_line_integral(stream, s, 0.5, p.T, CenterShift::pole_at_s);
    add_warning(r, N);
    add_warning(r, I);
    const double lhs = kTwoPi * N.real();
    identity(r, lhs, I.real(), std::abs(lhs - I.real()), 0.0, kTwoPi * N.error_bound + I.error_bound);
    r.note = (r.note.empty() ? "" : r.note + "; ") + "relative gap " + fmt(r.margin / I.real());
  } else if (id == "PARSEVAL3" || id == "VAR5") {
    require_evaluable(stream);
    if (desc.has_pole) throw Inapplicable{"entire streams only"};
    const cplx central = central_value(stream);
    r.inputs.emplace_back("X", fmt(p.X));
    const auto kernel = build_variance_kernel(stream, central, p.X, VarianceWeight::sqrt_n);
    const auto N = kernel_l2_norm(kernel, Weight::dx_over_x, p.X);
    add_warning(r, N);
    const double V = kTwoPi * N.real();
    if (id == "VAR5") {
      const double bound = kTwoPi * kLog2 * std::norm(1.0 - central);
      // Truncating x only removes a nonnegative part, so rounding is the budget.
      inequality(r, V, bound, kTwoPi * 1e-12 * std::max(1.0, V));
    } else {
      r.inputs.emplace_back("T", fmt(p.T));
      const auto line = variance_integral(stream, p.T);
      add_warning(r, line);
      identity(r, V, line.real(), std::abs(V - line.real()), 0.0, kTwoPi * N.error_bound + line.error_bound);
    }
  } else if (id == "PARSEVAL7") {
    require_evaluable(stream);
    if (desc.has_pole && stream.kind() != StreamKind::zeta) {
      throw Inapplicable{"the x subtraction is defined for zeta only among streams with a pole"};
    }
    r.inputs.emplace_back("T", fmt(p.T));
    r.inputs.emplace_back("X", fmt(p.X));
    const auto kernel = build_variance_kernel(stream, 0.0, p.X, VarianceWeight::unit);
    const auto N = kernel_l2_norm(kernel, Weight::dx_over_x, p.X);
    const auto I = vertical_line_integral(stream, 0.0, 0.5, p.T, CenterShift::pole_at_half);
    add_warning(r, N);
    add_warning(r, I);
    const double lhs = kTwoPi * N.real();
    identity(r, lhs, I.real(), std::abs(lhs - I.real()), 0.0, kTwoPi * N.error_bound + I.error_bound);
  } else if (id == "NU_Q") {
    int q = 0;
    if (p.q) {
      q = *p.q;
    } else if (stream.kind() == StreamKind::dirichlet && stream.discriminant() != 0) {
      q = static_cast<int>(std::llabs(stream.discriminant()));
      bool prime = q >= 3 && q % 2 == 1;
      for (int d = 3; prime && d * d <= q; d += 2) prime = q % d != 0;
      if (!prime) throw Inapplicable{"the character modulus " + std::to_string(q) + " is not an odd prime"};
    } else {
      throw Inapplicable{"needs q or a quadratic character stream"};
    }
    const int nu = least_nonresidue(q);
    const auto chi = make_dirichlet_quadratic(q % 4 == 1 ? q : -q, static_cast<std::int64_t>(std::ceil(p.X)) + 1);
    r.inputs.clear();
    r.inputs.emplace_back("q", std::to_string(q));
    r.inputs.emplace_back("nu", std::to_string(nu));
    r.inputs.emplace_back("X", fmt(p.X));
    const auto kernel = build_tate_kernel(chi, 0.0, p.X);
    const double lhs = kernel_l2_norm_range(kernel, 0.0, 1.0, p.X);
    inequality(r, lhs, nu - 2.0 * std::log(static_cast<double>(nu)), 1e-12 * std::max(1.0, lhs));
    r.note = "truncated at X; the omitted tail is nonnegative";
  } else {
    throw DomainError("unknown claim '" + id + "'");
  }
  r.status = r.pass ? "pass" : "fail";
  return r;
}

}  // namespace

std::string ClaimReport::to_json(bool with_runtime) const {
  ordered_json j;
  j["claim_id"] = claim_id;
  j["kind"] = kind == ClaimKind::inequality ? "inequality" : "identity";
  ordered_json in = ordered_json::object();
  for (const auto& [k, v] : inputs) in[k] = v;
  j["inputs"] = in;
  j["lhs"] = num(lhs);
  j["bound_or_rhs"] = num(bound_or_rhs);
  j["margin"] = num(margin);
  j["tolerance"] = num(tolerance);
  j["error_budget"] = num(error_budget);
  j["pass"] = pass;
  j["status"] = status;
  if (!note.empty()) j["note"] = note;
  if (with_runtime) j["runtime_seconds"] = runtime_seconds;
  return j.dump();
}

const std::vector<std::string>& claim_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> out;
    for (const auto& c : registry()) out.push_back(c.id);
    return out;
  }();
  return ids;
}

std::string claim_description(const std::string& claim_id) {
  for (const auto& c : registry()) {
    if (c.id == claim_id) return c.description;
  }
  throw DomainError("unknown claim '" + claim_id + "'");
}

ClaimReport check_claim(const std::string& claim_id, const ClaimParams& params) {
  claim_description(claim_id);
  const auto start = std::chrono::steady_clock::now();
  ClaimReport r;
  try {
    r = evaluate(claim_id, params);
  } catch (const Inapplicable& e) {
    r = ClaimReport{};
    r.claim_id = claim_id;
    r.inputs.emplace_back("stream", params.stream);
    r.status = "inapplicable";
    r.pass = false;
    r.note = e.reason;
  } catch (const UnsupportedError& e) {
    r = ClaimReport{};
    r.claim_id = claim_id;
    r.inputs.emplace_back("stream", params.stream);
    r.status = "inapplicable";
    r.pass = false;
    r.note = e.what();
  }
  r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<ClaimReport> check_all(const ClaimParams& params) {
  const auto& ids = claim_ids();
  std::vector<ClaimReport> out(ids.size());
  parallel_for(ids.size(), [&](std::size_t i) { out[i] = check_claim(ids[i], params); });
  return out;
}

std::string reports_to_json(const std::vector<ClaimReport>& reports, bool with_runtime) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : reports) arr.push_back(ordered_json::parse(r.to_json(with_runtime)));
  return arr.dump();
}

// ---------------------------------------------------------------------------
// Envelope fits.

namespace {

EnvelopeFit fit_envelope(double x_lo, double x_hi, int bins,
                         const std::function<void(std::int64_t, double&, double&)>& endpoint_values) {
  if (bins < 8) throw DomainError("envelope fits need at least 8 bins");
  if (!(x_lo >= 1.0 && x_hi > x_lo)) throw DomainError("envelope fits need 1 <= x_lo < x_hi");
  std::vector<double> maxima(bins, 0.0);
  const double span = std::log(x_hi / x_lo);
  const auto first = static_cast<std::int64_t>(std::ceil(x_lo));
  const auto last = static_cast<std::int64_t>(std::floor(x_hi));
  for (std::int64_t n = first; n < last; ++n) {
    // On [n, n+1) the step function is fixed; the sup sits at an end.
    double left = 0.0;
    double right = 0.0;
    endpoint_values(n, left, right);
    const int b = std::min(bins - 1, static_cast<int>(bins * std::log(static_cast<double>(n) / x_lo) / span));
    maxima[b] = std::max({maxima[b], left, right});
  }
  EnvelopeFit fit;
  std::vector<double> u;
  std::vector<double> v;
  for (int b = 0; b < bins; ++b) {
    const double centre = x_lo * std::exp(span * (b + 0.5) / bins);
    fit.bin_maxima.emplace_back(centre, maxima[b]);
    if (maxima[b] > 0.0) {
      u.push_back(std::log(centre));
      v.push_back(std::log(maxima[b]));
    }
  }
  if (u.size() < 2) return fit;
  const double ub = std::accumulate(u.begin(), u.end(), 0.0) / u.size();
  const double vb = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  double suv = 0.0;
  double suu = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    suv += (u[i] - ub) * (v[i] - vb);
    suu += (u[i] - ub) * (u[i] - ub);
  }
  fit.defined = true;
  fit.slope = suv / suu;
  fit.intercept = vb - fit.slope * ub;
  return fit;
}

void require_range(const CoefficientStream& stream, double x_hi) {
  if (x_hi > static_cast<double>(stream.n_max())) {
    throw TruncationError("x_hi = " + fmt(x_hi) + " exceeds the stream's N_max = " + std::to_string(stream.n_max()));
  }
}

}  // namespace

EnvelopeFit landau_exponent(const CoefficientStream& stream, double x_lo, double x_hi, int bins) {
  require_range(stream, x_hi);
  const double kappa = residue_of(stream).real();
  const auto a = stream.prefix();
  std::vector<double> A(static_cast<std::size_t>(std::floor(x_hi)) + 1, 0.0);
  double run = 0.0;
  for (std::size_t n = 1; n < A.size(); ++n) {
    run += a[n].real();
    A[n] = run;
  }
  return fit_envelope(x_lo, x_hi, bins, [&](std::int64_t n, double& left, double& right) {
    const double An = A[static_cast<std::size_t>(n)];
    left = std::abs(An - kappa * static_cast<double>(n));
    right = std::abs(An - kappa * static_cast<double>(n + 1));
  });
}

EnvelopeFit kernel_envelope_exponent(const CoefficientStream& stream, cplx s, double x_lo, double x_hi, int bins) {
  require_range(stream, x_hi);
  const cplx d = residue_of(stream) / (1.0 - s);
  const auto a = stream.prefix();
  const auto N = static_cast<std::size_t>(std::floor(x_hi));
  std::vector<cplx> A(N + 1, 0.0);
  CompensatedSum<cplx> run;
  for (std::size_t n = 1; n <= N; ++n) {
    if (a[n] != 0.0) run.add(a[n] * std::exp(-s * std::log(static_cast<double>(n))));
    A[n] = run.value();
  }
  return fit_envelope(x_lo, x_hi, bins, [&](std::int64_t n, double& left, double& right) {
    const cplx An = A[static_cast<std::size_t>(n)];
    left = std::abs(std::exp((s - 1.0) * std::log(static_cast<double>(n))) * An - d);
    right = std::abs(std::exp((s - 1.0) * std::log(static_cast<double>(n + 1))) * An - d);
  });
}

// ---------------------------------------------------------------------------
// Growth scan.

GrowthTable scan_zero_growth(const CoefficientStream& stream, int n_zeros, double T) {
  if (n_zeros < 1) throw DomainError("n_zeros must be positive");
  if (!stream.evaluable()) throw UnsupportedError("stream '" + stream.spec() + "' has no critical-line evaluator");
  const auto zeros = find_zeros(stream, 0.0, kMaxOrdinate, 1e-10);
  GrowthTable table;
  const int count = std::min<int>(n_zeros, static_cast<int>(zeros.size()));
  if (count < n_zeros) {
    table.note = "only " + std::to_string(count) + " zeros below ordinate " + fmt(kMaxOrdinate) + "; " +
                 std::to_string(n_zeros - count) + " short";
  }
  const double kappa = std::abs(residue_of(stream));
  for (int k = 0; k < count; ++k) {
    const cplx s(0.5, zeros[k].ordinate);
    const auto I = vertical_line_integral(stream, s, 0.5, T, CenterShift::pole_at_s);
    GrowthRow row;
    row.index = k + 1;
    row.ordinate = zeros[k].ordinate;
    row.value = I.real();
    row.bound = kTwoPi * (kLog2 - 2.0 * kappa / std::abs(1.0 - s));
    row.margin = row.value - row.bound;
    row.error_budget = I.error_bound;
    table.rows.push_back(row);
  }
  return table;
}

std::string growth_to_csv(const GrowthTable& table) {
  std::string out = "index,ordinate,I_value,T12_bound,margin,error_budget\n";
  char buf[256];
  for (const auto& r : table.rows) {
    std::snprintf(buf, sizeof buf, "%d,%.12f,%.12g,%.12g,%.12g,%.6g\n", r.index, r.ordinate, r.value, r.bound,
                  r.margin, r.error_budget);
    out += buf;
  }
  return out;
}

int least_nonresidue(int q) {
  if (q < 3 || q % 2 == 0) throw DomainError("least_nonresidue needs an odd prime q");
  for (int d = 2; d * d <= q; ++d) {
    if (q % d == 0) throw DomainError("least_nonresidue needs a prime q; " + std::to_string(q) + " is composite");
  }
  std::vector<bool> square(q, false);
  for (long long x = 1; x < q; ++x) square[(x * x) % q] = true;
  for (int n = 2; n < q; ++n) {
    if (!square[n]) return n;
  }
  throw DomainError("no quadratic non-residue below q");
}

}  // namespace tate
