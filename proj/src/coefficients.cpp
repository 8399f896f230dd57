#include "tate/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>

namespace tate {

namespace {

bool squarefree(std::int64_t n) {
  n = std::abs(n);
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % (p * p) == 0) return false;
  }
  return true;
}

std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

// Jacobi symbol (a/m) for odd m > 0.
int jacobi(std::int64_t a, std::int64_t m) {
  a = mod_floor(a, m);
  int result = 1;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      const std::int64_t r = m % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, m);
    if (a % 4 == 3 && m % 4 == 3) result = -result;
    a %= m;
  }
  return m == 1 ? result : 0;
}

std::string describe_discriminant_failure(std::int64_t d) {
  if (d == 0) return "d = 0 is not a discriminant";
  const std::int64_t r = mod_floor(d, 4);
  if (r == 1) {
    if (!squarefree(d)) return "d = " + std::to_string(d) + " is 1 mod 4 but not squarefree";
    return "";
  }
  if (r == 0) {
    const std::int64_t k = d / 4;
    const std::int64_t rk = mod_floor(k, 4);
    if (rk != 2 && rk != 3) {
      return "d = " + std::to_string(d) + " = 4k with k = " + std::to_string(k) + " not congruent to 2 or 3 mod 4";
    }
    if (!squarefree(k)) return "d = " + std::to_string(d) + " = 4k with k = " + std::to_string(k) + " not squarefree";
    return "";
  }
  return "d = " + std::to_string(d) + " is congruent to " + std::to_string(r) + " mod 4 (must be 0 or 1)";
}

std::shared_ptr<CoefficientStream::Data> new_data(StreamKind kind, std::string spec) {
  auto data = std::make_shared<CoefficientStream::Data>();
  data->kind = kind;
  data->spec = std::move(spec);
  return data;
}

void finish_descriptor(LSeriesDescriptor& d) {
  d.analytic_conductor = analytic_conductor_of(d.conductor_D, d.gamma_params);
  d.has_pole = d.residue_kappa != 0.0;
}

void require_n_max(std::int64_t n_max) {
  if (n_max < 1) throw DomainError("n_max must be at least 1");
}

PeriodicFactor quadratic_factor(std::int64_t d) {
  PeriodicFactor f;
  f.modulus = std::abs(d);
  f.values.resize(f.modulus);
  for (std::int64_t a = 0; a < f.modulus; ++a) {
    f.values[a] = a == 0 ? (f.modulus == 1 ? 1.0 : 0.0) : static_cast<double>(kronecker_symbol(d, a));
  }
  return f;
}

// Checks the table is a primitive Dirichlet character mod q.
void validate_character(std::int64_t q, const std::vector<cplx>& values) {
  if (q < 2) throw DomainError("character modulus must be at least 2");
  if (static_cast<std::int64_t>(values.size()) != q) throw DomainError("character table must have q entries");
  constexpr double tol = 1e-9;
  for (std::int64_t a = 0; a < q; ++a) {
    const bool unit = std::gcd(a, q) == 1;
    if (!unit && std::abs(values[a]) > tol) {
      throw DomainError("character value at a = " + std::to_string(a) + " must vanish (gcd(a, q) > 1)");
    }
    if (unit && std::abs(std::abs(values[a]) - 1.0) > tol) {
      throw DomainError("character value at unit a = " + std::to_string(a) + " must have modulus 1");
    }
  }
  if (std::abs(values[1] - 1.0) > tol) throw DomainError("character must satisfy chi(1) = 1");
  for (std::int64_t a = 1; a < q; ++a) {
    if (std::gcd(a, q) != 1) continue;
    for (std::int64_t b = a; b < q; ++b) {
      if (std::gcd(b, q) != 1) continue;
      if (std::abs(values[(a * b) % q] - values[a] * values[b]) > tol) {
        throw DomainError("character table is not multiplicative at (" + std::to_string(a) + ", " + std::to_string(b) + ")");
      }
    }
  }
  for (std::int64_t dd = 1; dd < q; ++dd) {
    if (q % dd != 0) continue;
    bool trivial_on_kernel = true;
    for (std::int64_t a = 1; a < q && trivial_on_kernel; a += dd) {
      if (std::gcd(a, q) == 1 && std::abs(values[a] - 1.0) > tol) trivial_on_kernel = false;
    }
    if (trivial_on_kernel) {
      throw DomainError("character table is imprimitive: induced from modulus " + std::to_string(dd));
    }
  }
}

// Coefficients of prod_{n>=1} (1 - q^n)^24 up to q^len-1, exactly.
std::vector<__int128> eta24_series(std::int64_t len) {
  // (prod (1 - q^n))^3 = sum_k (-1)^k (2k+1) q^{k(k+1)/2}
  std::vector<std::pair<std::int64_t, std::int64_t>> jacobi_terms;
  for (std::int64_t k = 0; k * (k + 1) / 2 < len; ++k) {
    jacobi_terms.emplace_back(k * (k + 1) / 2, (k % 2 == 0 ? 1 : -1) * (2 * k + 1));
  }
  std::vector<__int128> acc(len, 0);
  acc[0] = 1;
  for (int power = 0; power < 8; ++power) {
    std::vector<__int128> next(len, 0);
    for (std::int64_t i = 0; i < len; ++i) {
      if (acc[i] == 0) continue;
      for (const auto& [e, c] : jacobi_terms) {
        if (i + e >= len) break;
        next[i + e] += acc[i] * c;
      }
    }
    acc.swap(next);
  }
  return acc;
}

}  // namespace

double analytic_conductor_of(std::int64_t D, const std::vector<cplx>& gamma_params) {
  double prod = static_cast<double>(D);
  for (const cplx& c : gamma_params) prod *= 1.0 + std::abs(c);
  return prod;
}

bool PeriodicFactor::has_pole() const {
  cplx sum = 0.0;
  for (const cplx& v : values) sum += v;
  return std::abs(sum) > 1e-12;
}

cplx CoefficientStream::coeff(std::int64_t n) const {
  if (n < 1) throw DomainError("coefficient index must be >= 1");
  if (n <= n_max()) return data_->coeffs[n];
  switch (data_->kind) {
    case StreamKind::zeta:
      return 1.0;
    case StreamKind::dirichlet: {
      const PeriodicFactor& f = data_->factors.front();
      return f.values[n % f.modulus];
    }
    case StreamKind::dedekind_quadratic: {
      const std::int64_t d = data_->discriminant;
      std::int64_t sum = 0;
      for (std::int64_t e = 1; e * e <= n; ++e) {
        if (n % e != 0) continue;
        sum += kronecker_symbol(d, e);
        if (e * e != n) sum += kronecker_symbol(d, n / e);
      }
      return static_cast<double>(sum);
    }
    default:
      throw TruncationError("coefficient a_" + std::to_string(n) + " requested beyond N_max = " +
                            std::to_string(n_max()) + " of stream '" + data_->spec + "' (shortfall " +
                            std::to_string(n - n_max()) + ")");
  }
}

bool is_fundamental_discriminant(std::int64_t d) {
  return d != 1 && describe_discriminant_failure(d).empty();
}

void require_fundamental_discriminant(std::int64_t d) {
  if (d == 1) return;
  const std::string why = describe_discriminant_failure(d);
  if (!why.empty()) throw DomainError("not a fundamental discriminant: " + why);
}

int kronecker_symbol(std::int64_t d, std::int64_t n) {
  require_fundamental_discriminant(d);
  if (n < 1) throw DomainError("kronecker_symbol requires n >= 1");
  if (d == 1) return 1;
  int result = 1;
  while (n % 2 == 0) {
    n /= 2;
    if (d % 2 == 0) return 0;
    const std::int64_t r = mod_floor(d, 8);
    if (r == 3 || r == 5) result = -result;
  }
  if (n == 1) return result;
  return result * jacobi(d, n);
}

std::int64_t divisor_tau(int m, std::int64_t n) {
  if (m < 1 || n < 1) throw DomainError("divisor_tau requires m, n >= 1");
  std::int64_t result = 1;
  auto binom = [](std::int64_t top, std::int64_t k) {
    std::int64_t r = 1;
    for (std::int64_t i = 1; i <= k; ++i) r = r * (top - k + i) / i;
    return r;
  };
  for (std::int64_t p = 2; p * p <= n; ++p) {
    int k = 0;
    while (n % p == 0) {
      n /= p;
      ++k;
    }
    if (k > 0) result *= binom(k + m - 1, m - 1);
  }
  if (n > 1) result *= m;
  return result;
}

cplx dirichlet_L1(const PeriodicFactor& chi) {
  if (chi.has_pole()) throw PoleError("L(1, chi) diverges for a character with nonzero mean");
  const double q = static_cast<double>(chi.modulus);
  CompensatedSum<cplx> acc;
  for (std::int64_t a = 1; a < chi.modulus; ++a) {
    if (chi.values[a] == 0.0) continue;
    acc.add(chi.values[a] * digamma(static_cast<double>(a) / q));
  }
  return -acc.value() / q;
}

CoefficientStream make_zeta(std::int64_t n_max) {
  require_n_max(n_max);
  auto data = new_data(StreamKind::zeta, "zeta");
  auto& d = data->descriptor;
  d.label = "zeta";
  d.degree_m = 1;
  d.conductor_D = 1;
  d.residue_kappa = 1.0;
  d.gamma_params = {0.0};
  d.self_dual = true;
  finish_descriptor(d);
  data->coeffs.assign(n_max + 1, 1.0);
  data->coeffs[0] = 0.0;
  data->factors = {PeriodicFactor{1, {1.0}}};
  return CoefficientStream(data);
}

namespace {

CoefficientStream make_character_stream(std::string spec, std::string label, PeriodicFactor chi, std::int64_t d,
                                        std::int64_t n_max) {
  require_n_max(n_max);
  auto data = new_data(StreamKind::dirichlet, std::move(spec));
  data->discriminant = d;
  auto& desc = data->descriptor;
  desc.label = std::move(label);
  desc.degree_m = 1;
  desc.conductor_D = chi.modulus;
  desc.residue_kappa = 0.0;
  const cplx parity = chi.values[chi.modulus - 1];
  desc.gamma_params = {std::abs(parity - 1.0) < 1e-9 ? 0.0 : 1.0};
  bool real = true;
  for (const cplx& v : chi.values) real = real && v.imag() == 0.0;
  desc.self_dual = real;
  data->real_coefficients = real;
  finish_descriptor(desc);
  data->coeffs.resize(n_max + 1);
  data->coeffs[0] = 0.0;
  for (std::int64_t n = 1; n <= n_max; ++n) data->coeffs[n] = chi.values[n % chi.modulus];
  data->factors = {std::move(chi)};
  return CoefficientStream(data);
}

}  // namespace

CoefficientStream make_dirichlet(std::int64_t q, const std::vector<cplx>& values, std::int64_t n_max) {
  validate_character(q, values);
  return make_character_stream("dirichlet-table:" + std::to_string(q), "dirichlet(q=" + std::to_string(q) + ")",
                               PeriodicFactor{q, values}, 0, n_max);
}

CoefficientStream make_dirichlet_quadratic(std::int64_t d, std::int64_t n_max) {
  require_fundamental_discriminant(d);
  if (d == 1) throw DomainError("d = 1 gives the trivial character; use the zeta stream");
  return make_character_stream("dirichlet:" + std::to_string(d), "L(chi_" + std::to_string(d) + ")",
                               quadratic_factor(d), d, n_max);
}

CoefficientStream make_dedekind_quadratic(std::int64_t d, std::int64_t n_max) {
  require_fundamental_discriminant(d);
  if (d == 1) throw DomainError("d = 1 is not a quadratic field; use the zeta stream");
  require_n_max(n_max);
  auto data = new_data(StreamKind::dedekind_quadratic, "dedekind:" + std::to_string(d));
  data->discriminant = d;
  PeriodicFactor chi = quadratic_factor(d);
  auto& desc = data->descriptor;
  desc.label = "zeta_Q(sqrt(" + std::to_string(d) + "))";
  desc.degree_m = 2;
  desc.conductor_D = std::abs(d);
  desc.residue_kappa = dirichlet_L1(chi);
  desc.gamma_params = d > 0 ? std::vector<cplx>{0.0, 0.0} : std::vector<cplx>{0.0, 1.0};
  desc.self_dual = true;
  finish_descriptor(desc);
  std::vector<double> counts(n_max + 1, 0.0);
  for (std::int64_t e = 1; e <= n_max; ++e) {
    const double v = chi.values[e % chi.modulus].real();
    if (v == 0.0) continue;
    for (std::int64_t n = e; n <= n_max; n += e) counts[n] += v;
  }
  data->coeffs.assign(counts.begin(), counts.end());
  data->factors = {PeriodicFactor{1, {1.0}}, std::move(chi)};
  return CoefficientStream(data);
}

CoefficientStream make_ramanujan_tau(std::int64_t n_max) {
  require_n_max(n_max);
  auto data = new_data(StreamKind::ramanujan_tau, "tau");
  auto& desc = data->descriptor;
  desc.label = "Delta";
  desc.degree_m = 2;
  desc.conductor_D = 1;
  desc.residue_kappa = 0.0;
  desc.gamma_params = {5.5, 6.5};
  desc.self_dual = true;
  finish_descriptor(desc);
  // Delta = q * prod (1 - q^n)^24, so tau(n) is the coefficient of q^{n-1}.
  const auto series = eta24_series(n_max);
  data->coeffs.resize(n_max + 1);
  data->coeffs[0] = 0.0;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    const long double tau = static_cast<long double>(series[n - 1]);
    data->coeffs[n] = static_cast<double>(tau / std::pow(static_cast<long double>(n), 5.5L));
  }
  return CoefficientStream(data);
}

CoefficientStream make_product(const CoefficientStream& a, const CoefficientStream& b, std::int64_t n_max) {
  const std::int64_t available = std::min(a.n_max(), b.n_max());
  if (n_max < 0) n_max = available;
  require_n_max(n_max);
  if (n_max > available) {
    throw DomainError("product truncation " + std::to_string(n_max) + " exceeds operand N_max " +
                      std::to_string(available));
  }
  const auto& da = a.descriptor();
  const auto& db = b.descriptor();
  if (da.has_pole && db.has_pole) throw DomainError("product of two series with poles at s = 1 has a double pole");
  auto data = new_data(StreamKind::product, "product:" + a.spec() + "," + b.spec());
  auto& desc = data->descriptor;
  desc.label = da.label + "*" + db.label;
  desc.degree_m = da.degree_m + db.degree_m;
  desc.conductor_D = da.conductor_D * db.conductor_D;
  desc.gamma_params = da.gamma_params;
  desc.gamma_params.insert(desc.gamma_params.end(), db.gamma_params.begin(), db.gamma_params.end());
  desc.self_dual = da.self_dual && db.self_dual;
  data->real_coefficients = a.real_coefficients() && b.real_coefficients();
  data->ramanujan_verified = a.ramanujan_verified() && b.ramanujan_verified();
  if (da.has_pole || db.has_pole) {
    const CoefficientStream& entire = da.has_pole ? b : a;
    const cplx kappa = da.has_pole ? da.residue_kappa : db.residue_kappa;
    if (!entire.evaluable() || entire.factors().size() != 1) {
      throw UnsupportedError("residue of the product needs L(1) of the entire factor, which is not available");
    }
    desc.residue_kappa = kappa * dirichlet_L1(entire.factors().front());
  }
  finish_descriptor(desc);
  if (a.evaluable() && b.evaluable()) {
    data->factors = a.factors();
    data->factors.insert(data->factors.end(), b.factors().begin(), b.factors().end());
  }
  std::vector<CompensatedSum<cplx>> acc(n_max + 1);
  const auto pa = a.prefix();
  const auto pb = b.prefix();
  for (std::int64_t i = 1; i <= n_max; ++i) {
    if (pa[i] == 0.0) continue;
    for (std::int64_t j = 1; i * j <= n_max; ++j) acc[i * j].add(pa[i] * pb[j]);
  }
  data->coeffs.resize(n_max + 1);
  data->coeffs[0] = 0.0;
  for (std::int64_t n = 1; n <= n_max; ++n) data->coeffs[n] = acc[n].value();
  return CoefficientStream(data);
}

CoefficientStream load_character_table(const std::string& path, std::int64_t n_max) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open character table '" + path + "'");
  std::string line;
  std::int64_t q = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    q = std::stoll(line);
    break;
  }
  if (q < 2) throw DomainError("character table '" + path + "': modulus missing or below 2");
  std::vector<cplx> values(q, 0.0);
  std::vector<bool> seen(q, false);
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::int64_t a = 0;
    std::string value;
    if (!(row >> a)) continue;
    if (!(row >> value)) throw DomainError("character table '" + path + "': missing value for a = " + std::to_string(a));
    if (a < 0 || a >= q) throw DomainError("character table '" + path + "': index out of range");
    values[a] = parse_complex(value);
    seen[a] = true;
  }
  for (std::int64_t a = 1; a < q; ++a) {
    if (!seen[a]) throw DomainError("character table '" + path + "': no value for a = " + std::to_string(a));
  }
  return make_dirichlet(q, values, n_max);
}

CoefficientStream parse_stream(const std::string& spec, std::int64_t n_max) {
  auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto parse_int = [&](const std::string& s) {
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
      throw DomainError("bad integer in stream spec '" + spec + "'");
    }
    if (used != s.size()) throw DomainError("bad integer in stream spec '" + spec + "'");
    return v;
  };
  if (head == "zeta" && rest.empty()) return make_zeta(n_max);
  if (head == "tau" && rest.empty()) return make_ramanujan_tau(n_max);
  if ((head == "dirichlet" || head == "dirichlet_quadratic") && !rest.empty()) {
    return make_dirichlet_quadratic(parse_int(rest), n_max);
  }
  if ((head == "dedekind" || head == "dedekind_quadratic") && !rest.empty()) {
    return make_dedekind_quadratic(parse_int(rest), n_max);
  }
  if (head == "character" && !rest.empty()) return load_character_table(rest, n_max);
  if (head == "product" && !rest.empty()) {
    // Split at the top-level comma that starts a recognised operand.
    for (std::size_t i = 0; i < rest.size(); ++i) {
      if (rest[i] != ',') continue;
      std::optional<CoefficientStream> a;
      std::optional<CoefficientStream> b;
      try {
        a = parse_stream(rest.substr(0, i), n_max);
        b = parse_stream(rest.substr(i + 1), n_max);
      } catch (const DomainError&) {
        continue;
      }
      return make_product(*a, *b, n_max);
    }
    throw DomainError("product spec needs two operands: '" + spec + "'");
  }
  throw DomainError("unknown stream spec '" + spec + "'");
}

}  // namespace tate
