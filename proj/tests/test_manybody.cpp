#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>

#include <set>

#include "qw/manybody.hpp"
#include "qw/oscseries.hpp"

using namespace qw;

namespace {
ModelParams P(int N = 1) { return make_params(Rational(3, 2), Rational(1), N); }
}

TEST_SUITE("manybody") {
  TEST_CASE("basis enumeration") {
    CHECK(enumerate_basis(P(), 3, BasisMode::special).size() == 4);
    auto b = enumerate_basis(P(1), 1, BasisMode::full);
    REQUIRE(b.size() == 3);
    CHECK(b[0].to_string() == "(0|0)");
    CHECK(b[1].to_string() == "(1|0)");
    CHECK(b[2].to_string() == "(0|1)");
    CHECK(enumerate_basis(P(2), 2, BasisMode::full).size() == 15);
    for (int N = 1; N <= 3; ++N)
      for (long n = 0; n <= 4; ++n) {
        auto full = enumerate_basis(P(N), n, BasisMode::full);
        CHECK(full.size() == full_basis_count(N, n));
        std::set<std::string> seen;
        for (auto& a : full) seen.insert(a.to_string());
        CHECK(seen.size() == full.size());
      }
    CHECK_THROWS_AS(enumerate_basis(P(8), 10, BasisMode::full), SizeError);
    CHECK_THROWS_AS(enumerate_basis(P(), -1, BasisMode::full), ValidationError);
  }

  TEST_CASE("many-body eigenvalue") {
    auto p = make_params(Rational(5, 2), Rational(2), 3);
    for (auto& a : enumerate_basis(p, 3, BasisMode::full)) {
      Rational acc = 0;
      for (int i = 0; i < a.slots(); ++i) acc += eigenvalue(a.slot(i), p);
      CHECK(acc == lambda_of(a, p));
    }
  }

  TEST_CASE("X elements") {
    auto p = P(1);
    auto g = ground_index(1), s1 = special_index(1, 1);
    CHECK(x_matrix_element(g, g, p) == 0);
    double Y = to_double(heavy_factor(p));
    double expect = -Y * 3.0 / 16 * std::sqrt(M_PI) / std::sqrt(0.5);
    CHECK(x_matrix_element(g, s1, p) == doctest::Approx(expect).epsilon(1e-14));
    ManyBodyIndex two{{1}, {1}};
    CHECK(x_matrix_element(g, two, p) == 0);
    CHECK(x_matrix_element(s1, g, p) == x_matrix_element(g, s1, p));
  }

  TEST_CASE("S and S^2 against brute-force quadrature at N = 1") {
    // two-variable integral of phi_a (zL - zR)^k phi_b with separable double quadrature
    auto p = P(1);
    double s = 1.5, w = 1;
    auto xi = [&](long n, double z) {
      auto st = eigenstate(n, p);
      double acc = 0;
      for (long k = st.n; k >= 0; --k) acc = acc * z * z + to_double(st.poly[k]);
      return std::pow(z, s) * std::exp(-w * z * z / 2) * acc / std::sqrt(to_double(norm_squared(n, p)));
    };
    boost::math::quadrature::exp_sinh<double> es;
    auto one = [&](long a, long b, int power) {
      return es.integrate([&](double z) { return z > 40 ? 0.0 : xi(a, z) * xi(b, z) * std::pow(z, power); });
    };
    ManyBodyOperators ops(p, 3);
    auto basis = enumerate_basis(p, 3, BasisMode::full);
    for (auto& a : basis)
      for (auto& b : basis) {
        long aL = a.L[0], aR = a.R[0], bL = b.L[0], bR = b.R[0];
        double s1 = one(aL, bL, 1) * one(aR, bR, 0) - one(aL, bL, 0) * one(aR, bR, 1);
        double s2 = one(aL, bL, 2) * one(aR, bR, 0) - 2 * one(aL, bL, 1) * one(aR, bR, 1) +
                    one(aL, bL, 0) * one(aR, bR, 2);
        CHECK(ops.s_element(a, b) == doctest::Approx(s1).scale(1).epsilon(1e-9));
        CHECK(ops.s2_element(a, b) == doctest::Approx(s2).scale(1).epsilon(1e-9));
      }
  }

  TEST_CASE("selection rule at N = 2") {
    auto p = P(2);
    ManyBodyOperators ops(p, 2);
    auto basis = enumerate_basis(p, 2, BasisMode::full);
    for (auto& a : basis)
      for (auto& b : basis) {
        if (differing_slots(a, b).size() >= 2) CHECK(ops.x_element(a, b) == 0);
        if (differing_slots(a, b).size() >= 3) CHECK(ops.s2_element(a, b) == 0);
        CHECK(ops.x_element(a, b) == ops.x_element(b, a));
      }
  }

  TEST_CASE("ensembles") {
    auto p = P(1);
    auto spec = enumerate_basis(p, 10, BasisMode::special);
    auto d = make_ensemble(spec, Profile::special_loglog, 0, 1, p);
    CHECK(std::abs(d.c[0]) == 0);
    CHECK(std::abs(d.c[1]) == 0);
    CHECK(std::abs(d.c[2]) / std::abs(d.c[3]) == doctest::Approx(3 * std::log(3) / (2 * std::log(2))).epsilon(1e-14));
    auto full = enumerate_basis(P(2), 2, BasisMode::full);
    auto g1 = make_ensemble(full, Profile::gibbs_gaussian, 0, 42, P(2));
    auto g2 = make_ensemble(full, Profile::gibbs_gaussian, 0, 42, P(2));
    auto g3 = make_ensemble(full, Profile::gibbs_gaussian, 0, 43, P(2));
    CHECK(g1.c == g2.c);
    CHECK(g1.c != g3.c);
    auto cold = make_ensemble(full, Profile::gibbs_gaussian, 1e6, 42, P(2));
    CHECK(std::abs(cold.c[0]) == doctest::Approx(1).epsilon(1e-12));
    for (const auto* e : {&d, &g1, &cold}) {
      double n = 0;
      for (auto c : e->c) n += std::norm(c);
      CHECK(std::abs(n - 1) < 1e-14);
    }
    CHECK_THROWS_AS(make_ensemble(full, Profile::gibbs_gaussian, -1, 42, P(2)), ValidationError);
    CHECK_THROWS_AS(make_ensemble({}, Profile::gibbs_gaussian, 1, 42, P(2)), ValidationError);
  }

  TEST_CASE("named sub-streams are independent and reproducible") {
    auto a = make_stream(5, "ensemble/0"), b = make_stream(5, "ensemble/0"), c = make_stream(5, "ensemble/1");
    auto x = a(), y = b(), z = c();
    CHECK(x == y);
    CHECK(x != z);
  }

  TEST_CASE("BML partial sums") {
    auto p = P(1);
    auto spec = enumerate_basis(p, 5, BasisMode::special);
    std::vector<std::complex<double>> c(spec.size(), 0.0);
    c[1] = 1;
    auto one = make_custom_ensemble(spec, c);
    auto ps = bml_partial_sums(one, p, {1, 5});
    double M1 = 3.0 / 16 * std::sqrt(M_PI) / std::sqrt(0.5);
    CHECK(ps[0].value == doctest::Approx(M1 * 4).epsilon(1e-14));
    CHECK(ps[1].value == ps[0].value);

    auto big = enumerate_basis(p, 10000, BasisMode::special, 20000);
    auto ll = make_ensemble(big, Profile::special_loglog, 0, 1, p);
    auto sums = bml_partial_sums(ll, p, {100, 1000, 10000});
    CHECK(sums[0].value < sums[1].value);
    CHECK(sums[1].value < sums[2].value);
    auto pw = power_law_ensemble(big, 2);
    auto psum = bml_partial_sums(pw, p, {100, 10000});
    CHECK(std::abs(psum[1].value - psum[0].value) < 0.01 * psum[1].value);
    CHECK_THROWS_AS(bml_partial_sums(ll, p, {20000}), ValidationError);
  }

  TEST_CASE("dispersion") {
    auto p = P(1);
    auto basis = enumerate_basis(p, 2, BasisMode::full);
    ManyBodyOperators ops(p, 2);
    std::vector<std::complex<double>> c(basis.size(), 0.0);
    c[0] = 1;
    double d0 = state_dispersion_over_Y2(ops, basis, c);
    const auto& t = ops.table();
    CHECK(d0 > 0);
    CHECK(d0 == doctest::Approx(2 * (t.z2(0, 0) - t.z(0, 0) * t.z(0, 0))).epsilon(1e-13));
    // cold limit: every draw collapses on the ground state
    auto cold = dispersion_report(p, basis, 1e6, 20, 3);
    CHECK(cold.dispersion_over_Y2 == doctest::Approx(d0).epsilon(1e-10));
    CHECK(cold.paired_over_Y2 == doctest::Approx(d0).epsilon(1e-10));
    auto warm = dispersion_report(P(2), enumerate_basis(P(2), 2, BasisMode::full), 0.5, 300, 11);
    CHECK(warm.dispersion >= 0);
    CHECK(std::abs(warm.dispersion_over_Y2 - warm.paired_over_Y2) < 5 * warm.dispersion_stderr);
    auto again = dispersion_report(P(2), enumerate_basis(P(2), 2, BasisMode::full), 0.5, 300, 11);
    CHECK(again.dispersion_over_Y2 == warm.dispersion_over_Y2);
  }

  TEST_CASE("cat verdicts") {
    auto v = cat_check(0, 1e-5, 100, 1e-12, 1e-6, 1);
    CHECK(v.cat_free);
    auto far = cat_check(1e-20, 1e-5, 100, 1e-12, 1e10, 1);
    CHECK(far.cat_free);
    CHECK(!far.visible_motion);
    CHECK(!far.joint);
    auto both = cat_check(1e-14, 1e-5, 2, 1e-10, 1e-6, 1);
    CHECK(both.joint);
    CHECK(both.f_est == doctest::Approx(1e-14 / (1e-10 * 4)));
    CHECK_THROWS_AS(cat_check(1, 1, 1, 1, 0, 1), ValidationError);
  }
}
