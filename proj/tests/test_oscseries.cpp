#include <doctest.h>

#include "qw/oscseries.hpp"

using namespace qw;

namespace {
// Reference sums written out term by term.
Rational ref_s1(long u, long t, bool times_k) {
  Rational acc = 0;
  for (long k = 0; k <= u; ++k) {
    Rational term = Rational(binomial(u, k)) * Rational(factorial(2 * t + 2 * k)) /
                    Rational(factorial(t + k) * factorial(t + k)) / Rational(Integer(1) << (2 * k));
    if (times_k) term *= k;
    acc += k % 2 ? -term : term;
  }
  return acc;
}

Rational ref_s3(long u, long t) {
  Rational acc = 0;
  for (long j = 0; j <= u; ++j)
    for (long k = 0; k <= u; ++k) {
      Rational term = Rational(binomial(u, j) * binomial(u, k)) * Rational(factorial(t + j + k)) /
                      Rational(factorial(t + j) * factorial(t + k));
      acc += (j + k) % 2 ? -term : term;
    }
  return acc;
}

const Rational s32(3, 2);
}  // namespace

TEST_SUITE("oscseries") {
  TEST_CASE("documented small values") {
    CHECK(s1_direct(0, s32).exact == 2);
    CHECK(s1_direct(1, s32).exact == Rational(1, 2));
    CHECK(s2_direct(0, s32).exact == 0);
    CHECK(s2_direct(1, s32).exact == Rational(-3, 2));
    CHECK(s3_direct(0, 1) == 1);
    CHECK(s3_direct(1, 1) == Rational(1, 2));
    HiPrec tol(1e-30);
    CHECK(abs(s1_integral(0, s32, Base::two, tol) - 2) < HiPrec(1e-30));
    CHECK(abs(s1_integral(1, s32, Base::two, tol) - HiPrec(0.5)) < HiPrec(1e-30));
    CHECK(abs(s3_integral(0, 1, tol) - 1) < HiPrec(1e-30));
    CHECK(abs(s3_integral(1, 1, tol) - HiPrec(0.5)) < HiPrec(1e-30));
  }

  TEST_CASE("direct sums match term-by-term references") {
    for (long t = 1; t <= 3; ++t) {
      Rational s = Rational(t) + Rational(1, 2);
      for (long u : {0L, 3L, 17L, 60L}) {
        CHECK(s1_direct(u, s).exact == ref_s1(u, t, false));
        CHECK(s2_direct(u, s).exact == ref_s1(u, t, true));
      }
      for (long u : {0L, 2L, 9L, 25L}) CHECK(s3_direct(u, t) == ref_s3(u, t));
    }
  }

  TEST_CASE("direct equals integral") {
    for (long u : {5L, 20L, 100L}) {
      for (auto k : {SeriesKind::S1, SeriesKind::S2}) {
        auto r = evaluate_series(k, u, s32, Base::two, HiPrec(1e-30));
        CHECK(static_cast<double>(r.abs_diff / abs(r.direct.value)) < 1e-10);
      }
    }
    for (long t : {1L, 2L})
      for (long u : {5L, 20L}) {
        auto r = evaluate_series(SeriesKind::S3, u, Rational(t), Base::two, HiPrec(1e-20));
        CHECK(static_cast<double>(r.abs_diff / abs(r.direct.value)) < 1e-6);
      }
  }

  TEST_CASE("base e sums agree between forms") {
    auto r = evaluate_series(SeriesKind::S1, 12, s32, Base::e, HiPrec(1e-30));
    CHECK(static_cast<double>(r.abs_diff / abs(r.direct.value)) < 1e-20);
  }

  TEST_CASE("S3 bound and decay") {
    for (long t = 1; t <= 4; ++t)
      for (long u = 0; u <= 300; u += 23) CHECK(abs(s3_direct(u, t)) < (1 << t));
    Rational a = s3_direct(50, 2), b = s3_direct(100, 2), c = s3_direct(200, 2);
    CHECK(a > b);
    CHECK(b > c);
    CHECK(c > 0);
    // S3(u, t) = u!/(u+t)!
    for (long u : {1L, 7L, 40L}) CHECK(s3_direct(u, 3) == Rational(factorial(u)) / Rational(factorial(u + 3)));
  }

  TEST_CASE("S1 and S2 decay as u^-s") {
    for (auto k : {SeriesKind::S1, SeriesKind::S2}) {
      std::vector<double> x, y;
      for (long u : {100L, 200L, 400L, 800L}) {
        x.push_back(u);
        y.push_back(static_cast<double>(k == SeriesKind::S1 ? s1_direct(u, s32).value : s2_direct(u, s32).value));
      }
      CHECK(loglog_slope(x, y) == doctest::Approx(-1.5).epsilon(0.05));
    }
  }

  TEST_CASE("iterated integral") {
    auto one = [](const HiPrec&) { return HiPrec(1); };
    auto r1 = iterated_integral_check(1, one, HiPrec(0));
    CHECK(abs(r1.lhs - 1) < HiPrec(1e-40));
    CHECK(abs(r1.rhs - 1) < HiPrec(1e-40));
    auto r2 = iterated_integral_check(2, one, HiPrec(1));
    CHECK(abs(r2.lhs - 2) < HiPrec(1e-40));
    CHECK(abs(r2.rhs - 2) < HiPrec(1e-40));
    // int_{-1}^0 dz1 int_{-1}^{z1} x dx at z = 0 equals -1/3
    auto r3 = iterated_integral_check(2, [](const HiPrec& x) { return x; }, HiPrec(0));
    CHECK(abs(r3.lhs - r3.rhs) < HiPrec(1e-40));
    CHECK(abs(r3.lhs + HiPrec(1) / 3) < HiPrec(1e-40));
  }

  TEST_CASE("product identity") {
    for (int s2 : {3, 5, 7})
      for (long k = 1; k <= 10; ++k) CHECK(product_identity_residual_exact(k, Rational(s2, 2)) == 0);
    CHECK(abs(product_identity_check(2, s32, Base::e)) > HiPrec(1e-2));
    // both sides equal 7/6 at k = 2, s = 3/2
    CHECK((1 + s32 + 1) / (Rational(1, 2) + s32 + 1) == Rational(7, 6));
  }

  TEST_CASE("log-log slope of exact power laws") {
    std::vector<double> x{1, 2, 4, 8}, y{3, 0.75, 0.1875, 0.046875};
    CHECK(loglog_slope(x, y) == doctest::Approx(-2).epsilon(1e-12));
  }
}
