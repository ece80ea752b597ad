#include "qw/model.hpp"

namespace qw {

ModelParams make_params(const Rational& s, const Rational& w, int N, const Rational& r,
                        const Rational& beta) {
  ModelParams p;
  p.s = s;
  p.w = w;
  p.N = N;
  p.r = r;
  p.beta = beta;
  if (!is_half_odd(s) || s < Rational(3, 2))
    throw ValidationError("s must be a half-odd-integer >= 3/2, got " + to_string(s));
  p.q = s * (s - 1);
  p.p = to_long(s - Rational(1, 2));
  validate(p);
  return p;
}

void validate(const ModelParams& params) {
  if (!is_half_odd(params.s) || params.s < Rational(3, 2))
    throw ValidationError("s must be a half-odd-integer >= 3/2, got " + to_string(params.s));
  if (params.q != params.s * (params.s - 1))
    throw ValidationError("q must equal s(s-1)");
  if (Rational(params.p) != params.s - Rational(1, 2)) throw ValidationError("p must equal s - 1/2");
  if (params.q != Rational(params.p * params.p) - Rational(1, 4))
    throw ValidationError("q must equal p^2 - 1/4");
  if (params.w <= 0) throw ValidationError("w must be positive, got " + to_string(params.w));
  if (params.N < 1) throw ValidationError("N must be at least 1");
  if (params.r <= 0 || params.r >= 1)
    throw ValidationError("r must satisfy 0 < r < 1, got " + to_string(params.r));
  if (params.beta < 0) throw ValidationError("beta must be nonnegative");
}

Rational heavy_factor(const ModelParams& params) {
  return params.r / (1 + 2 * params.r * params.N);
}

void validate(const PhysicalConstants& c) {
  if (!(c.hbar > 0) || !(c.m_light > 0) || !(c.boltzmann_K > 0) || !(c.temperature_tau > 0))
    throw ValidationError("physical constants must be strictly positive");
}

double physical_energy(double lambda_mod, const PhysicalConstants& consts) {
  return consts.hbar * consts.hbar / (2 * consts.m_light) * lambda_mod;
}

nlohmann::json to_json(const ModelParams& p) {
  return {{"s", to_string(p.s)}, {"q", to_string(p.q)}, {"p", p.p},
          {"w", to_string(p.w)}, {"N", p.N},            {"r", to_string(p.r)},
          {"beta", to_string(p.beta)}};
}

namespace {
Rational rational_field(const nlohmann::json& j, const char* key, const Rational& fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(Integer(std::to_string(v.get<long long>())));
  throw ValidationError(std::string("config field '") + key +
                        "' must be a rational string such as \"3/2\"");
}
}  // namespace

ModelParams params_from_json(const nlohmann::json& j) {
  ModelParams d;
  int N = d.N;
  if (j.contains("N")) {
    if (!j.at("N").is_number_integer()) throw ValidationError("config field 'N' must be an integer");
    N = j.at("N").get<int>();
  }
  return make_params(rational_field(j, "s", d.s), rational_field(j, "w", d.w), N,
                     rational_field(j, "r", d.r), rational_field(j, "beta", d.beta));
}

nlohmann::json to_json(const PhysicalConstants& c) {
  return {{"hbar", c.hbar},
          {"m_light", c.m_light},
          {"boltzmann_K", c.boltzmann_K},
          {"temperature_tau", c.temperature_tau}};
}

PhysicalConstants constants_from_json(const nlohmann::json& j) {
  PhysicalConstants c;
  if (j.contains("hbar")) c.hbar = j.at("hbar").get<double>();
  if (j.contains("m_light")) c.m_light = j.at("m_light").get<double>();
  if (j.contains("boltzmann_K")) c.boltzmann_K = j.at("boltzmann_K").get<double>();
  if (j.contains("temperature_tau")) c.temperature_tau = j.at("temperature_tau").get<double>();
  validate(c);
  return c;
}

}  // namespace qw
