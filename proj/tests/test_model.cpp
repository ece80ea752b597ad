#include <doctest.h>

#include "qw/model.hpp"

using namespace qw;

TEST_SUITE("model_core") {
  TEST_CASE("derived strength and index") {
    auto p = make_params(Rational(3, 2), Rational(1));
    CHECK(p.q == Rational(3, 4));
    CHECK(p.p == 1);
    auto p5 = make_params(Rational(5, 2), Rational(1));
    CHECK(p5.q == Rational(15, 4));
    CHECK(p5.p == 2);
    CHECK_THROWS_AS(make_params(Rational(1), Rational(1)), ValidationError);
    CHECK_THROWS_AS(make_params(Rational(1, 2), Rational(1)), ValidationError);
    CHECK_THROWS_AS(make_params(Rational(3, 2), Rational(0)), ValidationError);
    CHECK_THROWS_AS(make_params(Rational(3, 2), Rational(1), 0), ValidationError);
  }

  TEST_CASE("physical energy is linear") {
    PhysicalConstants c;
    c.hbar = 1e-34;
    c.m_light = 3e-26;
    CHECK(physical_energy(0, c) == 0);
    CHECK(physical_energy(1, c) == doctest::Approx(1e-68 / 6e-26).epsilon(1e-12));
    CHECK(physical_energy(1, c) == doctest::Approx(1.6667e-43).epsilon(1e-4));
    CHECK(physical_energy(2, c) == doctest::Approx(2 * physical_energy(1, c)).epsilon(1e-15));
  }

  TEST_CASE("JSON round trip") {
    auto p = make_params(Rational(5, 2), Rational(3, 7), 4, Rational(1, 1000), Rational(2));
    auto q = params_from_json(to_json(p));
    CHECK(q.s == p.s);
    CHECK(q.w == p.w);
    CHECK(q.N == 4);
    CHECK(q.r == p.r);
    CHECK(q.beta == p.beta);
    auto j = nlohmann::json::parse(R"({"s":"3/2","w":"1","N":4,"r":"1/100000","beta":"1"})");
    CHECK(params_from_json(j).N == 4);
    CHECK_THROWS_AS(params_from_json(nlohmann::json::parse(R"({"s":"2"})")), ValidationError);
    CHECK_THROWS_AS(params_from_json(nlohmann::json::parse(R"({"N":1.5})")), ValidationError);
    PhysicalConstants c;
    c.temperature_tau = 300;
    CHECK(constants_from_json(to_json(c)).temperature_tau == 300);
  }

  TEST_CASE("heavy factor") {
    CHECK(heavy_factor(make_params(Rational(3, 2), Rational(1), 2, Rational(1, 4))) == Rational(1, 8));
  }
}
