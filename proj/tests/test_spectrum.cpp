#include <doctest.h>

#include <boost/math/special_functions/gamma.hpp>

#include "qw/spectrum.hpp"

using namespace qw;

namespace {
ModelParams P(int s2, int w, int N = 1) { return make_params(Rational(s2, 2), Rational(w), N); }
}

TEST_SUITE("spectrum1d") {
  TEST_CASE("Gaussian moments against the Gamma function") {
    for (int s2 : {3, 5, 7})
      for (int w : {1, 2, 3}) {
        GaussianMoments mom(Rational(s2, 2), Rational(w));
        for (long j = -1; j <= 12; ++j) {
          double a = (s2 + j + 1) / 2.0;
          double expect = 0.5 * std::pow(double(w), -a) * boost::math::tgamma(a);
          CHECK(mom(j).to_double() == doctest::Approx(expect).epsilon(1e-13));
        }
      }
  }

  TEST_CASE("normalized moments sigma") {
    CHECK(moments(Rational(3, 2), Rational(1), 1).sigma[1] == 2);
    CHECK(moments(Rational(3, 2), Rational(1), 2).sigma[2] == 6);
    CHECK(moments(Rational(3, 2), Rational(2), 1).sigma[1] == 1);
  }

  TEST_CASE("eigenvalues") {
    CHECK(eigenvalue(0, P(3, 1)) == 4);
    CHECK(eigenvalue(2, P(3, 2)) == 24);
    for (long n = 0; n < 20; ++n) CHECK(eigenvalue(n + 1, P(5, 3)) - eigenvalue(n, P(5, 3)) == 12);
  }

  TEST_CASE("eigenstate coefficients") {
    auto s1 = eigenstate(1, P(3, 1));
    CHECK(s1.poly[1] == 1);
    CHECK(s1.poly[0] == -2);
    auto s2 = eigenstate(2, P(3, 1));
    CHECK(s2.a[2] / s2.a[1] == Rational(-1, 6));
    auto s0 = eigenstate(0, P(3, 1));
    CHECK(s0.poly.size() == 1);
    CHECK(s0.poly[0] == 1);
    CHECK(s0.mu == 4);
    for (long n = 0; n <= 40; ++n) CHECK(first_row_residual(eigenstate(n, P(7, 2))) == 0);
  }

  TEST_CASE("eigenfunction values") {
    CHECK(static_cast<double>(evaluate_xi(eigenstate(0, P(3, 1)), HiPrec(1))) ==
          doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
    CHECK(abs(evaluate_xi(eigenstate(1, P(3, 1)), sqrt(HiPrec(2)))) < HiPrec(1e-70));
    auto st = eigenstate(6, P(5, 1));
    // beyond the last node the sign is that of the leading coefficient
    CHECK((evaluate_xi(st, HiPrec(8)) > 0) == (st.poly.back() > 0));
  }

  TEST_CASE("eigenfunctions solve the ODE (finite-difference oracle)") {
    // -xi'' + q/z^2 xi + w^2 z^2 xi = mu xi at sample points, central differences in HiPrec
    for (long n : {0L, 1L, 3L, 7L}) {
      ModelParams p = P(5, 2);
      auto st = eigenstate(n, p);
      HiPrec h("1e-20"), q = to_hiprec(p.q), w = to_hiprec(p.w);
      for (double zd : {0.3, 0.9, 1.7, 2.6}) {
        HiPrec z(zd);
        HiPrec f0 = evaluate_xi(st, z), fp = evaluate_xi(st, HiPrec(z + h)), fm = evaluate_xi(st, HiPrec(z - h));
        HiPrec lhs = -(fp - 2 * f0 + fm) / (h * h) + q / (z * z) * f0 + w * w * z * z * f0;
        HiPrec scale = abs(to_hiprec(st.mu) * f0) + 1;
        CHECK(static_cast<double>(abs(lhs - to_hiprec(st.mu) * f0) / scale) < 1e-20);
      }
    }
  }

  TEST_CASE("binomial identities") {
    for (long u = 1; u <= 200; ++u) CHECK(binomial_identity_residual(u) == 0);
    for (long u = 1; u <= 500; ++u) CHECK(alternating_binomial_sum(u) == 0);
    CHECK(alternating_binomial_sum(0) == 1);
  }

  TEST_CASE("finite-difference oracle") {
    auto ev = fd_oracle_spectrum(P(3, 1), 4000, 1e-3, 10, 2);
    CHECK(std::abs(ev[0] - 4) < 1e-3);
    CHECK(std::abs(ev[1] - 8) < 1e-2);
    ModelParams bad = P(3, 1);
    bad.w = 0;
    CHECK_THROWS_AS(fd_eigenvalues(bad, 1000, 1e-3, 10, 2), ValidationError);
  }
}
