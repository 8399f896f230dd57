#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "tate/evaluator.hpp"

using namespace tate;

TEST_CASE("zeta agrees with the 50-digit eta oracle in the strip") {
  const cplx points[] = {{0.5, 0.0}, {0.5, 14.0}, {0.3, 20.0}, {0.75, -7.5}, {2.0, 0.0}, {0.5, 37.0}, {1.5, 3.0}};
  for (const cplx s : points) {
    const cplx ref = oracle::zeta(s);
    CHECK(std::abs(zeta_value(s).value - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
  }
  CHECK(std::abs(zeta_value(0.0).value + 0.5) < 1e-14);
  CHECK(std::abs(zeta_value(-1.0).value + 1.0 / 12.0) < 1e-14);
  CHECK_THROWS_AS(zeta_value(1.0), PoleError);
}

TEST_CASE("L(s, chi_-4) agrees with the alternating-series oracle") {
  const auto chi = make_dirichlet_quadratic(-4);
  const cplx points[] = {{0.5, 0.0}, {0.5, 6.0}, {0.2, 25.0}, {1.0, 0.0}, {0.9, -12.0}};
  for (const cplx s : points) {
    const cplx ref = oracle::beta(s);
    CHECK(std::abs(l_value(chi, s).value - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
  }
  CHECK(std::abs(residue_of(chi)) == 0.0);
}

TEST_CASE("Dedekind zeta of Q(i) factors as zeta times L(chi_-4)") {
  const auto dq = make_dedekind_quadratic(-4);
  for (const cplx s : {cplx(0.5, 3.0), cplx(0.4, 17.0), cplx(2.0, 0.0)}) {
    const cplx ref = oracle::zeta(s) * oracle::beta(s);
    CHECK(std::abs(l_value(dq, s).value - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
  }
  CHECK(std::abs(residue_of(dq) - std::atan(1.0)) < 1e-14);
  CHECK_THROWS_AS(l_value(dq, 1.0), PoleError);
  CHECK_THROWS_AS(l_value(make_ramanujan_tau(), 0.5), UnsupportedError);
}

TEST_CASE("completed L-functions are symmetric under s -> 1 - s") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> sig(0.05, 0.95);
  std::uniform_real_distribution<double> t(-30.0, 30.0);
  for (const char* spec : {"zeta", "dirichlet:-4", "dirichlet:5", "dedekind:-3", "dedekind:5"}) {
    const auto stream = parse_stream(spec);
    for (int i = 0; i < 8; ++i) {
      const cplx s(sig(rng), t(rng));
      const cplx a = completed_l_value(stream, s);
      const cplx b = completed_l_value(stream, 1.0 - s);
      CHECK(std::abs(a - b) <= 1e-10 * std::max(1e-3, std::abs(a)));
    }
  }
}

TEST_CASE("Hardy Z is real for self-dual streams") {
  const auto z = make_zeta();
  for (double t : {3.0, 14.0, 100.0}) {
    const auto h = hardy_Z_detail(z, t);
    CHECK(std::abs(h.residual_imag) < 1e-10 * std::max(1.0, std::abs(h.value)));
  }
  std::vector<cplx> chi5 = {0.0, 1.0, cplx(0, 1), cplx(0, -1), -1.0};
  CHECK_THROWS_AS(hardy_Z(make_dirichlet(5, chi5), 3.0), UnsupportedError);
}

TEST_CASE("zeros of zeta below 50") {
  const auto zeros = find_zeros(make_zeta(), 0.0, 50.0, 1e-10);
  REQUIRE(zeros.size() == 10);
  // The first ordinate, and every located point is a zero of the oracle.
  CHECK(std::abs(zeros[0].ordinate - 14.134725141734693) < 1e-9);
  for (const auto& z : zeros) CHECK(std::abs(oracle::zeta({0.5, z.ordinate})) < 1e-8);
  for (std::size_t i = 1; i < zeros.size(); ++i) CHECK(zeros[i].ordinate > zeros[i - 1].ordinate);
  const auto csv = zeros_to_csv(zeros);
  CHECK(csv.rfind("label,ordinate,tol\n", 0) == 0);
}

TEST_CASE("first zero of L(chi_-4) and of the Q(i) Dedekind zeta coincide") {
  const auto a = nth_zero(make_dirichlet_quadratic(-4), 1);
  const auto b = nth_zero(make_dedekind_quadratic(-4), 1);
  CHECK(std::abs(a.ordinate - b.ordinate) < 1e-8);
  CHECK(std::abs(oracle::beta({0.5, a.ordinate})) < 1e-8);
}

TEST_CASE("tolerance clamping and central values") {
  const auto e = zeta_value(cplx(0.5, 10.0), 1e-20);
  CHECK(e.clamped);
  CHECK(e.tol == kMinTolerance);
  const auto chi = make_dirichlet_quadratic(-4);
  CHECK(std::abs(central_value(chi) - oracle::beta(0.5)) < 1e-13);
  CHECK(central_value(make_ramanujan_tau(), cplx(0.79)) == cplx(0.79));
  CHECK_THROWS_AS(central_value(make_ramanujan_tau()), UnsupportedError);
}
