#include "tate/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

namespace tate {

namespace {

template <typename T>
T pairwise_impl(std::span<const T> xs) {
  if (xs.size() <= 8) {
    T acc{};
    for (const T& x : xs) acc += x;
    return acc;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_impl(xs.first(half)) + pairwise_impl(xs.subspan(half));
}

// zeta(2k) for k >= 1.
double zeta_even(int k) {
  const double pi = kPi;
  switch (k) {
    case 1: return pi * pi / 6.0;
    case 2: return std::pow(pi, 4) / 90.0;
    case 3: return std::pow(pi, 6) / 945.0;
    default: break;
  }
  const int two_k = 2 * k;
  const int N = 64;
  CompensatedSum<double> acc;
  for (int n = N; n >= 2; --n) acc.add(std::pow(static_cast<double>(n), -two_k));
  acc.add(1.0);
  // Euler-Maclaurin for sum_{n > N}.
  const double nN = N;
  acc.add(std::pow(nN, 1.0 - two_k) / (two_k - 1.0) - 0.5 * std::pow(nN, -two_k) +
          two_k / 12.0 * std::pow(nN, -two_k - 1.0));
  return acc.value();
}

struct BernoulliTable {
  std::array<double, kMaxBernoulliIndex + 1> even{};
  BernoulliTable() {
    even[0] = 1.0;
    for (int k = 1; k <= kMaxBernoulliIndex; ++k) {
      const double sign = (k % 2 == 1) ? 1.0 : -1.0;
      even[k] = sign * 2.0 * zeta_even(k) / std::pow(kTwoPi, 2 * k);
    }
  }
};

const BernoulliTable& bernoulli_table() {
  static const BernoulliTable table;
  return table;
}

}  // namespace

double pairwise_sum(std::span<const double> xs) { return pairwise_impl(xs); }
cplx pairwise_sum(std::span<const cplx> xs) { return pairwise_impl(xs); }

double bernoulli_even_over_factorial(int k) {
  if (k < 0 || k > kMaxBernoulliIndex) throw DomainError("Bernoulli index out of range");
  return bernoulli_table().even[k];
}

double bernoulli_over_factorial(int k) {
  if (k == 0) return 1.0;
  if (k == 1) return -0.5;
  if (k % 2 == 1) return 0.0;
  return bernoulli_even_over_factorial(k / 2);
}

cplx log_gamma(cplx z) {
  if (z.real() <= 0.0) throw DomainError("log_gamma requires Re z > 0");
  cplx shift = 0.0;
  // Each log(z + k) has Re > 0, so the sum of principal logs tracks the
  // continuous branch.
  while (z.real() < 15.0) {
    shift += std::log(z);
    z += 1.0;
  }
  const cplx inv = 1.0 / z;
  const cplx inv2 = inv * inv;
  cplx series = 0.0;
  cplx pw = inv;
  for (int k = 1; k <= 12; ++k) {
    // B_{2k} / (2k (2k-1)) = (2k)! b_k / (2k (2k-1))
    double fact = 1.0;
    for (int j = 1; j <= 2 * k - 2; ++j) fact *= j;
    series += bernoulli_even_over_factorial(k) * fact * pw;
    pw *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(kTwoPi) + series - shift;
}

double digamma(double x) {
  if (x <= 0.0) throw DomainError("digamma requires x > 0");
  double shift = 0.0;
  while (x < 12.0) {
    shift += 1.0 / x;
    x += 1.0;
  }
  const double inv2 = 1.0 / (x * x);
  double series = 0.0;
  double pw = inv2;
  for (int k = 1; k <= 10; ++k) {
    // B_{2k} / (2k x^{2k})
    double fact = 1.0;
    for (int j = 1; j <= 2 * k - 1; ++j) fact *= j;
    series += bernoulli_even_over_factorial(k) * fact * pw;
    pw *= inv2;
  }
  return std::log(x) - 0.5 / x - series - shift;
}

cplx expm1(cplx z) {
  const double x = z.real();
  const double y = z.imag();
  const double em1 = std::expm1(x);
  const double s = std::sin(0.5 * y);
  const double re = em1 * std::cos(y) - 2.0 * s * s;
  const double im = std::exp(x) * std::sin(y);
  return {re, im};
}

cplx expm1_over_z(cplx z) {
  if (std::abs(z) < 1e-5) {
    return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0));
  }
  return expm1(z) / z;
}

cplx power_integral(double a, double b, cplx alpha) {
  if (a < 0.0 || b < a) throw DomainError("power_integral requires 0 <= a <= b");
  if (a == b) return 0.0;
  const cplx e = alpha + 1.0;
  if (a == 0.0) {
    if (e.real() <= 0.0) throw DomainError("power_integral diverges at 0 for Re alpha <= -1");
    return std::exp(e * std::log(b)) / e;
  }
  const double ell = std::log1p((b - a) / a);
  return std::exp(e * std::log(a)) * ell * expm1_over_z(e * ell);
}

namespace {

// int_lo^hi (t - c) t^a dt on an interval inside one unit cell [n, n+1].
cplx sawtooth_cell(double lo, double hi, double c, cplx a) {
  if (hi <= lo) return 0.0;
  const double n = std::floor(lo);
  if (n >= 2.0 * std::abs(a) + 10.0) {
    // (t^a) barely varies in phase; a 16-point rule is exact to rounding.
    static const QuadratureRule rule = gauss_legendre(16);
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    CompensatedSum<cplx> acc;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double t = mid + half * rule.nodes[i];
      acc.add(rule.weights[i] * (t - c) * std::exp(a * std::log(t)));
    }
    return half * acc.value();
  }
  return power_integral(lo, hi, a + 1.0) - c * power_integral(lo, hi, a);
}

}  // namespace

cplx sawtooth_segment(double x, std::int64_t M, cplx a) {
  if (x > static_cast<double>(M)) throw DomainError("sawtooth_segment requires x <= M");
  if (x <= 0.0) throw DomainError("sawtooth_segment requires x > 0");
  CompensatedSum<cplx> acc;
  const double n0 = std::floor(x);
  acc.add(sawtooth_cell(x, std::min(n0 + 1.0, static_cast<double>(M)), n0 + 0.5, a));
  for (std::int64_t n = static_cast<std::int64_t>(n0) + 1; n < M; ++n) {
    const double dn = static_cast<double>(n);
    acc.add(sawtooth_cell(dn, dn + 1.0, dn + 0.5, a));
  }
  return acc.value();
}

cplx sawtooth_tail(std::int64_t X, cplx a) {
  if (X < 1) throw DomainError("sawtooth_tail requires X >= 1");
  if (a.real() >= 0.0) throw DomainError("sawtooth_tail requires Re a < 0");
  const double dX = static_cast<double>(X);
  if (dX < std::abs(a) / kPi + 1.0) throw DomainError("sawtooth_tail: X too small for the asymptotic expansion");
  CompensatedSum<cplx> acc;
  cplx falling = 1.0;  // (a)(a-1)...(a-j+2)
  const cplx Xa = std::exp(a * std::log(dX));
  double last = std::numeric_limits<double>::infinity();
  for (int j = 1; j + 1 <= 2 * kMaxBernoulliIndex; ++j) {
    if (j > 1) falling *= (a - static_cast<double>(j - 2));
    if (j % 2 == 0) continue;
    const double sign = (j % 2 == 1) ? -1.0 : 1.0;
    const cplx term = sign * falling * bernoulli_over_factorial(j + 1) * Xa * std::pow(dX, 1.0 - j);
    const double mag = std::abs(term);
    if (mag > last) break;
    acc.add(term);
    last = mag;
    if (mag < 1e-18 * std::max(1.0, std::abs(acc.value()))) break;
  }
  return acc.value();
}

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre requires n >= 1");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

const GaussKronrod15& gauss_kronrod15() {
  static const GaussKronrod15 rule = [] {
    // QUADPACK qk15 abscissae (positive half, descending) and weights.
    const double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                           0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                           0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                           0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
    const double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                           0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                           0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                           0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    const double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
    GaussKronrod15 r{};
    for (int i = 0; i < 7; ++i) {
      r.nodes[i] = -xgk[i];
      r.nodes[14 - i] = xgk[i];
      r.kronrod_weights[i] = wgk[i];
      r.kronrod_weights[14 - i] = wgk[i];
    }
    r.nodes[7] = 0.0;
    r.kronrod_weights[7] = wgk[7];
    // Gauss nodes are xgk[1], xgk[3], xgk[5] and 0.
    for (int j = 0; j < 3; ++j) {
      const int i = 2 * j + 1;
      r.gauss_weights[i] = wg[j];
      r.gauss_weights[14 - i] = wg[j];
    }
    r.gauss_weights[7] = wg[3];
    return r;
  }();
  return rule;
}

namespace {

template <typename T>
T tanh_sinh_impl(const std::function<T(double)>& f, double a, double b, double h) {
  if (!(b > a)) return T{};
  const double half = 0.5 * (b - a);
  CompensatedSum<T> acc;
  const double hp = 0.5 * kPi;
  const int K = static_cast<int>(std::ceil(4.0 / h));
  for (int k = -K; k <= K; ++k) {
    const double t = k * h;
    const double u = hp * std::sinh(t);
    const double ch = std::cosh(u);
    // 1 - |tanh u| = 2 / (exp(2|u|) + 1): distance to the nearer endpoint.
    const double comp = 2.0 / (std::exp(2.0 * std::abs(u)) + 1.0);
    const double w = hp * std::cosh(t) / (ch * ch);
    if (w < 1e-300 || comp * half == 0.0) continue;
    double x;
    if (u >= 0.0) {
      x = b - half * comp;
    } else {
      x = a + half * comp;
    }
    if (x <= a || x >= b) continue;
    acc.add(w * f(x));
  }
  return half * h * acc.value();
}

}  // namespace

double tanh_sinh(const std::function<double(double)>& f, double a, double b, double h) {
  return tanh_sinh_impl<double>(f, a, b, h);
}

cplx tanh_sinh(const std::function<cplx(double)>& f, double a, double b, double h) {
  return tanh_sinh_impl<cplx>(f, a, b, h);
}

cplx parse_complex(const std::string& raw) {
  std::string text;
  for (char ch : raw) {
    if (ch != ' ') text.push_back(ch);
  }
  if (text.empty()) throw DomainError("empty complex literal");
  auto to_double = [&](const std::string& part) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      throw DomainError("malformed complex literal '" + raw + "'");
    }
    if (used != part.size()) throw DomainError("malformed complex literal '" + raw + "'");
    return v;
  };
  if (text.front() == '(') {
    if (text.back() != ')') throw DomainError("malformed complex literal '" + raw + "'");
    const std::string inner = text.substr(1, text.size() - 2);
    const auto comma = inner.find(',');
    if (comma == std::string::npos) return to_double(inner);
    return {to_double(inner.substr(0, comma)), to_double(inner.substr(comma + 1))};
  }
  if (text.back() != 'i' && text.back() != 'j') return to_double(text);
  const std::string body = text.substr(0, text.size() - 1);
  std::size_t split = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  const std::string re_part = split == std::string::npos ? "" : body.substr(0, split);
  std::string im_part = split == std::string::npos ? body : body.substr(split);
  if (im_part.empty() || im_part == "+") im_part = "1";
  if (im_part == "-") im_part = "-1";
  const double re = re_part.empty() ? 0.0 : to_double(re_part);
  return {re, to_double(im_part)};
}

std::string format_complex(cplx z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min(hw, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t block = (n + workers - 1) / workers;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        const std::size_t lo = w * block;
        const std::size_t hi = std::min(n, lo + block);
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace tate
