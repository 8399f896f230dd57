#pragma once

// Dirichlet coefficient streams with their structural data.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "tate/numerics.hpp"

namespace tate {

struct LSeriesDescriptor {
  std::string label;
  int degree_m = 1;
  std::int64_t conductor_D = 1;
  cplx residue_kappa = 0.0;
  std::vector<cplx> gamma_params;
  bool self_dual = true;
  bool has_pole = false;
  double analytic_conductor = 1.0;
};

/// D * prod (1 + |c_j|).
double analytic_conductor_of(std::int64_t D, const std::vector<cplx>& gamma_params);

/// A Dirichlet series with periodic coefficients, sum_n v[n mod q] n^{-s}.
/// These are the pieces the evaluator knows how to continue analytically.
struct PeriodicFactor {
  std::int64_t modulus = 1;
  std::vector<cplx> values;  // values[a] = chi(a), a = 0..modulus-1
  [[nodiscard]] bool has_pole() const;  // nonzero mean over a period
};

enum class StreamKind { zeta, dirichlet, dedekind_quadratic, ramanujan_tau, product };

class CoefficientStream {
 public:
  [[nodiscard]] const LSeriesDescriptor& descriptor() const { return data_->descriptor; }
  [[nodiscard]] StreamKind kind() const { return data_->kind; }
  [[nodiscard]] const std::string& spec() const { return data_->spec; }

  /// a_n for n >= 1. Served from the memoized prefix up to n_max; beyond it
  /// only kinds with a direct formula answer, the rest throw TruncationError.
  [[nodiscard]] cplx coeff(std::int64_t n) const;

  /// Dense prefix, index 0 unused (holds 0).
  [[nodiscard]] std::span<const cplx> prefix() const { return data_->coeffs; }
  [[nodiscard]] std::int64_t n_max() const { return static_cast<std::int64_t>(data_->coeffs.size()) - 1; }

  [[nodiscard]] bool ramanujan_verified() const { return data_->ramanujan_verified; }
  [[nodiscard]] bool real_coefficients() const { return data_->real_coefficients; }

  /// Periodic factors whose product is this L-series; empty when the
  /// stream has no critical-strip evaluator (ramanujan_tau and products
  /// involving it).
  [[nodiscard]] const std::vector<PeriodicFactor>& factors() const { return data_->factors; }
  [[nodiscard]] bool evaluable() const { return !data_->factors.empty(); }

  /// Quadratic discriminant for dirichlet_quadratic and dedekind_quadratic
  /// streams; 0 otherwise.
  [[nodiscard]] std::int64_t discriminant() const { return data_->discriminant; }

  struct Data {
    StreamKind kind = StreamKind::zeta;
    std::string spec;
    LSeriesDescriptor descriptor;
    std::vector<cplx> coeffs;
    std::vector<PeriodicFactor> factors;
    bool ramanujan_verified = true;
    bool real_coefficients = true;
    std::int64_t discriminant = 0;
  };
  explicit CoefficientStream(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

 private:
  std::shared_ptr<const Data> data_;
};

inline constexpr std::int64_t kDefaultNMax = 20000;

/// Validates that d is a fundamental discriminant; throws DomainError naming
/// the failed condition.
void require_fundamental_discriminant(std::int64_t d);
[[nodiscard]] bool is_fundamental_discriminant(std::int64_t d);

/// Kronecker symbol (d/n) for a fundamental discriminant d and n >= 1.
int kronecker_symbol(std::int64_t d, std::int64_t n);

/// Number of ordered factorizations of n into m positive factors.
std::int64_t divisor_tau(int m, std::int64_t n);

/// L(1, chi) for a nonprincipal character given by its value table, from
/// the digamma closed form -(1/q) sum chi(a) psi(a/q).
cplx dirichlet_L1(const PeriodicFactor& chi);

CoefficientStream make_zeta(std::int64_t n_max = kDefaultNMax);
/// Primitive character from its value table on Z/q (values[a] for a = 0..q-1).
CoefficientStream make_dirichlet(std::int64_t q, const std::vector<cplx>& values, std::int64_t n_max = kDefaultNMax);
CoefficientStream make_dirichlet_quadratic(std::int64_t d, std::int64_t n_max = kDefaultNMax);
CoefficientStream make_dedekind_quadratic(std::int64_t d, std::int64_t n_max = kDefaultNMax);
CoefficientStream make_ramanujan_tau(std::int64_t n_max = 2000);
/// Dirichlet convolution. n_max defaults to the smaller operand truncation
/// and may not exceed either.
CoefficientStream make_product(const CoefficientStream& a, const CoefficientStream& b, std::int64_t n_max = -1);

/// Character table file: first line q, then lines "a value".
CoefficientStream load_character_table(const std::string& path, std::int64_t n_max = kDefaultNMax);

/// "zeta", "dirichlet:-4", "dedekind:-4", "tau", "character:<path>",
/// "product:<spec>,<spec>". Throws DomainError on unknown specs.
CoefficientStream parse_stream(const std::string& spec, std::int64_t n_max = kDefaultNMax);

}  // namespace tate
