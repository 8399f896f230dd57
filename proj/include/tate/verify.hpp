#pragma once

// Registry of checkable claims, compiled to pass/fail reports with explicit
// margins, plus envelope-exponent fits and the growth scan over zeros.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tate/coefficients.hpp"
#include "tate/numerics.hpp"

namespace tate {

struct ClaimParams {
  std::string stream = "zeta";
  int zero_index = 1;
  std::optional<double> gamma;  // zero ordinate; overrides zero_index
  double T = 2000.0;
  double X = 5000.0;
  std::optional<double> line_re;  // single line for P31/P32
  std::optional<cplx> w;          // MELLIN point, default 1/2
  std::optional<double> xi;       // FOURIER point, default 1.5
  std::optional<int> q;           // NU_Q modulus
};

enum class ClaimKind { inequality, identity };

struct ClaimReport {
  std::string claim_id;
  ClaimKind kind = ClaimKind::inequality;
  std::vector<std::pair<std::string, std::string>> inputs;
  double lhs = 0.0;
  double bound_or_rhs = 0.0;
  double margin = 0.0;  // lhs - bound, or |lhs - rhs| (relative where the tolerance is)
  double tolerance = 0.0;
  double error_budget = 0.0;
  bool pass = false;
  std::string status = "fail";  // pass | fail | inapplicable
  std::string note;
  double runtime_seconds = 0.0;

  /// Deterministic JSON; runtime_seconds only when asked for.
  [[nodiscard]] std::string to_json(bool with_runtime = false) const;
};

/// Claim IDs in registry order.
const std::vector<std::string>& claim_ids();
std::string claim_description(const std::string& claim_id);

/// Evaluates one claim. Unknown IDs raise DomainError; a zero whose residual
/// exceeds 1e-6 raises PreconditionError; streams the claim does not apply to
/// come back with status "inapplicable".
ClaimReport check_claim(const std::string& claim_id, const ClaimParams& params);

/// Every registered claim against params, ordered by registry position.
std::vector<ClaimReport> check_all(const ClaimParams& params);

std::string reports_to_json(const std::vector<ClaimReport>& reports, bool with_runtime = false);

struct EnvelopeFit {
  bool defined = false;
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<std::pair<double, double>> bin_maxima;  // (geometric bin centre, max)
};

/// Fits log max|A_0(x) - kappa x| per log-bin against log x over [x_lo, x_hi].
EnvelopeFit landau_exponent(const CoefficientStream& stream, double x_lo, double x_hi, int bins = 16);

/// Same fit for |H_s(x)|.
EnvelopeFit kernel_envelope_exponent(const CoefficientStream& stream, cplx s, double x_lo, double x_hi,
                                     int bins = 16);

struct GrowthRow {
  int index = 0;
  double ordinate = 0.0;
  double value = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  double error_budget = 0.0;
};

struct GrowthTable {
  std::vector<GrowthRow> rows;
  std::string note;  // shortfall note when fewer zeros were found
};

GrowthTable scan_zero_growth(const CoefficientStream& stream, int n_zeros, double T);

std::string growth_to_csv(const GrowthTable& table);

/// Least quadratic non-residue modulo an odd prime q.
int least_nonresidue(int q);

}  // namespace tate
