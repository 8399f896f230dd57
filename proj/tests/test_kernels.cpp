#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "tate/evaluator.hpp"
#include "tate/kernels.hpp"

using namespace tate;

namespace {

const cplx kRho1(0.5, 14.134725141734693);

}  // namespace

TEST_CASE("interval constants of the power term on [1, 2]") {
  CHECK(std::abs(interval_square_integral(1.0, kRho1 - 1.0, 0.0, 0.0, 0.0, 1.0, 2.0) - std::log(2.0)) < 1e-12);
  for (double sigma : {0.3, 0.7}) {
    const cplx s(sigma, 21.0);
    const double expected = (std::pow(2.0, 2 * sigma - 1) - 1) / (2 * sigma - 1);
    CHECK(std::abs(interval_square_integral(1.0, s - 1.0, 0.0, 0.0, 0.0, 1.0, 2.0) - expected) < 1e-12);
  }
  CHECK(std::abs(interval_square_integral(1.0, 0.0, 0.0, 0.0, -2.0, 1.0, 2.0) - 0.5) < 1e-15);
}

TEST_CASE("partial sums and kernel values") {
  const auto z = make_zeta();
  CHECK(partial_sum_A(z, 0.0, 10.0) == cplx(10.0));
  CHECK_THROWS_AS(partial_sum_A(make_zeta(100), 0.0, 150.0), TruncationError);
  const auto H = build_tate_kernel(z, kRho1, 2000);
  CHECK(H.tail.kind == TailKind::closed_form_m1);
  CHECK(std::abs(H.value(0.5) + 1.0 / (1.0 - kRho1)) < 1e-15);
  for (double x : {1.0, 2.5, 10.3, 123.7, 1999.5}) {
    const cplx direct = std::exp((kRho1 - 1.0) * std::log(x)) * partial_sum_A(z, kRho1, x) - 1.0 / (1.0 - kRho1);
    CHECK(std::abs(H.value(x) - direct) < 1e-13);
  }
  CHECK_THROWS_AS((void)H.value(2001.0), DomainError);
  // Right-continuity at a jump.
  CHECK(std::abs(H.value(3.0) - (std::exp((kRho1 - 1.0) * std::log(3.0)) * partial_sum_A(z, kRho1, 3.0) -
                                 1.0 / (1.0 - kRho1))) < 1e-14);
}

TEST_CASE("sawtooth closed form matches the kernel at a zeta zero") {
  const auto H = build_tate_kernel(make_zeta(), kRho1, 500);
  for (double x : {1.5, 2.25, 7.9, 42.42, 499.5}) {
    CHECK(std::abs(closed_form_H_zeta(kRho1, x) - H.value(x)) < 1e-10);
  }
  CHECK_THROWS_AS(closed_form_H_zeta(cplx(0.5, 14.0), 2.5), PreconditionError);
  CHECK_THROWS_AS(closed_form_H_zeta(kRho1, 3.0), DomainError);
}

TEST_CASE("kernels off a zero fit a power-law tail") {
  const auto H = build_tate_kernel(make_dirichlet_quadratic(-4), cplx(0.5, 6.020948904), 5000);
  CHECK(H.tail.kind == TailKind::exponent_fit);
  CHECK(H.tail.beta < -0.5);
}

TEST_CASE("scaling multiplies every piece") {
  const auto H = build_tate_kernel(make_zeta(), kRho1, 100);
  const auto H2 = H.scaled(2.0);
  for (double x : {0.3, 1.7, 55.5}) CHECK(std::abs(H2.value(x) - 2.0 * H.value(x)) < 1e-15);
  CHECK(H.to_csv().rfind("x_left,x_right,coeff_re,coeff_im\n", 0) == 0);
}

TEST_CASE("inverse-different kernels") {
  const auto K1 = build_inverse_different_kernel(1, kRho1, 200);
  const auto H = build_tate_kernel(make_zeta(), kRho1, 200);
  for (double x : {0.5, 3.3, 150.1}) CHECK(K1.value(x) == H.value(x));
  const auto K = build_inverse_different_kernel(-4, cplx(0.5, 6.020948904), 100);
  CHECK(K.denominator == 4);
  // Jumps at n/4 for the ideal norms n: at x = 1/4 the first term enters.
  CHECK(K.value(0.24) == -K.offset_d);
  CHECK(K.value(0.26) != K.value(0.24));
  CHECK_THROWS_AS(build_inverse_different_kernel(-12, kRho1, 100), DomainError);
}

TEST_CASE("appendix kernels") {
  const auto chi = make_dirichlet_quadratic(-4);
  const cplx L = central_value(chi);
  const auto H = build_variance_kernel(chi, L, 100, VarianceWeight::sqrt_n);
  CHECK(H.value(0.9) == 0.0);
  CHECK(std::abs(H.value(3.5) - (1.0 - 1.0 / std::sqrt(3.0) - L)) < 1e-15);
  const auto Kz = build_variance_kernel(make_zeta(), 0.0, 100, VarianceWeight::unit);
  CHECK(std::abs(Kz.value(3.5).real() - (3.0 - 3.5) / std::sqrt(3.5)) < 1e-15);
  CHECK(std::abs(Kz.value(3.5).real() + 0.2673) < 1e-4);
  CHECK(std::abs(Kz.value(0.25) + 0.5) < 1e-15);
  const auto Kc = build_variance_kernel(chi, 0.3, 100, VarianceWeight::unit);
  CHECK(Kc.value(0.5) == 0.0);
  CHECK(std::abs(Kc.value(2.0) - (1.0 - 0.3) / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(Kc.value(4.0) + 0.3 / 2.0) < 1e-15);
}

TEST_CASE("mollifier support, range and symmetry") {
  for (double eps : {0.1, 0.01}) {
    const Mollifier m(eps);
    CHECK(m.J(m.lower_edge()) == 1.0);
    CHECK(m.J(m.upper_edge()) == 0.0);
    double previous = 1.0;
    for (int i = 0; i <= 400; ++i) {
      const double x = std::exp(eps * (-0.5 + i / 400.0));
      const double j = m.J(x);
      CHECK(j >= 0.0);
      CHECK(j <= 1.0);
      CHECK(j <= previous);
      previous = j;
      // phi even: J(x) + J(1/x) = 1.
      CHECK(std::abs(j + m.J(1.0 / x) - 1.0) < 1e-13);
    }
  }
  CHECK_THROWS_AS(Mollifier(0.0), DomainError);
  CHECK_THROWS_AS((void)Mollifier(0.01).mellin(0.0), PoleError);
}

TEST_CASE("mollifier transform: pole at 0 with residue 1") {
  const Mollifier m(0.1);
  for (double r : {1e-3, 1e-5}) {
    const cplx s(r, 0.0);
    CHECK(std::abs(s * m.mellin(s) - 1.0) < 10 * r * r);
  }
  CHECK(std::abs(m.phi_hat_i_eps(0.0) - 1.0) < 1e-13);
}

TEST_CASE("smoothed kernel equals the limit kernel away from integer ratios") {
  const auto chi = make_dirichlet_quadratic(-4);
  const cplx L = central_value(chi);
  const auto H = build_variance_kernel(chi, L, 100, VarianceWeight::sqrt_n);
  for (double x : {1.2, 1.5, 1.8, 7.5, 20.5}) {
    CHECK(smoothed_kernel_H_eps(chi, L, 0.01, x) == H.value(x));
  }
  // Inside a transition band the two differ.
  CHECK(smoothed_kernel_H_eps(chi, L, 0.01, 3.001) != H.value(3.001));
}
