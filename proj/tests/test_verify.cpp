#include <cmath>

#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"
#include "tate/evaluator.hpp"
#include "tate/verify.hpp"

using namespace tate;

namespace {

// Least non-residue by Euler's criterion.
int nu_oracle(int q) {
  for (int n = 2; n < q; ++n) {
    long long r = 1;
    for (int k = 0; k < (q - 1) / 2; ++k) r = r * n % q;
    if (r != 1) return n;
  }
  return -1;
}

}  // namespace

TEST_CASE("registry") {
  const auto& ids = claim_ids();
  CHECK(ids.size() == 15);
  for (const char* id : {"T12", "TA", "TB2", "TC", "TD", "QF", "P31", "P32", "MELLIN", "FOURIER", "PARSEVAL1",
                         "PARSEVAL3", "PARSEVAL7", "VAR5", "NU_Q"}) {
    CHECK(std::find(ids.begin(), ids.end(), id) != ids.end());
  }
  CHECK_THROWS_AS(check_claim("T99", {}), DomainError);
}

TEST_CASE("least quadratic non-residue") {
  for (int q : {3, 5, 7, 11, 13, 23, 71, 311}) CHECK(least_nonresidue(q) == nu_oracle(q));
  CHECK(least_nonresidue(7) == 3);
  CHECK(least_nonresidue(23) == 5);
  CHECK_THROWS_AS(least_nonresidue(15), DomainError);
}

TEST_CASE("T12 at the first zeta zero") {
  ClaimParams p;
  const auto r = check_claim("T12", p);
  const double gamma1 = nth_zero(make_zeta(), 1, 1e-10).ordinate;
  CHECK(std::abs(oracle::zeta({0.5, gamma1})) < 1e-9);
  const double bound = kTwoPi * (std::log(2.0) - 2.0 / std::abs(1.0 - cplx(0.5, gamma1)));
  CHECK(std::abs(r.bound_or_rhs - bound) < 1e-12);
  CHECK(std::abs(r.bound_or_rhs - 3.4667) < 1e-4);
  CHECK(r.status == "pass");
  CHECK(r.margin - r.error_budget > 0.0);
}

TEST_CASE("preconditions and applicability") {
  ClaimParams p;
  p.gamma = 15.0;
  CHECK_THROWS_AS(check_claim("T12", p), PreconditionError);
  ClaimParams tau;
  tau.stream = "tau";
  const auto r = check_claim("TC", tau);
  CHECK(r.status == "inapplicable");
  CHECK_FALSE(r.pass);
  ClaimParams z;
  CHECK(check_claim("TC", z).status == "inapplicable");
  CHECK(check_claim("TA", z).status == "inapplicable");
  CHECK(check_claim("P32", z).status == "inapplicable");
  CHECK(check_claim("NU_Q", z).status == "inapplicable");
  ClaimParams gi;
  gi.stream = "dirichlet:-4";
  CHECK(check_claim("NU_Q", gi).status == "inapplicable");
}

TEST_CASE("TD bound and deterministic reports") {
  ClaimParams p;
  const auto a = check_claim("TD", p);
  CHECK(a.bound_or_rhs == kPi / 2.0);
  CHECK(a.pass);
  const auto b = check_claim("TD", p);
  CHECK(a.to_json() == b.to_json());
  const auto j = nlohmann::json::parse(a.to_json());
  CHECK_FALSE(j.contains("runtime_seconds"));
  CHECK(nlohmann::json::parse(a.to_json(true)).contains("runtime_seconds"));
}

TEST_CASE("NU_Q at q = 7") {
  ClaimParams p;
  p.q = 7;
  const auto r = check_claim("NU_Q", p);
  CHECK(std::abs(r.bound_or_rhs - (3.0 - 2.0 * std::log(3.0))) < 1e-15);
  CHECK(std::abs(r.bound_or_rhs - 0.8028) < 1e-4);
  CHECK(r.pass);
}

TEST_CASE("envelope fits") {
  const auto z = make_zeta(100000);
  const auto fit = landau_exponent(z, 1e3, 1e5);
  REQUIRE(fit.defined);
  CHECK(std::abs(fit.slope) <= 0.05);
  CHECK(fit.bin_maxima.size() == 16);
  CHECK_THROWS_AS(landau_exponent(z, 1e3, 1e6), TruncationError);
  CHECK_THROWS_AS(landau_exponent(z, 1e3, 1e5, 4), DomainError);
}

TEST_CASE("growth scan") {
  const auto table = scan_zero_growth(make_zeta(), 3, 500);
  REQUIRE(table.rows.size() == 3);
  for (const auto& row : table.rows) CHECK(row.value + row.error_budget >= row.bound);
  CHECK(table.note.empty());
  CHECK(growth_to_csv(table).rfind("index,ordinate,I_value,T12_bound,margin,error_budget\n", 0) == 0);
}

TEST_CASE("lower-bound claims do not charge the tail") {
  ClaimParams p;
  p.stream = "dedekind:-4";
  const auto r = check_claim("P32", p);
  CHECK(r.pass);
  CHECK(r.error_budget < 1e-6);
  CHECK(r.note.find("omitted tail estimate") != std::string::npos);
}
