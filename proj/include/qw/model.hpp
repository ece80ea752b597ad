#pragma once

#include <json.hpp>

#include "qw/numerics.hpp"

namespace qw {

// Rational q-w model: inverse-square strength q = s(s-1) with s half-odd,
// harmonic confinement w^2, N light bodies per side, mass ratio r = m/M.
struct ModelParams {
  Rational s{3, 2};
  Rational q{3, 4};
  long p = 1;  // s - 1/2
  Rational w{1};
  int N = 1;
  Rational r{1, 100000};
  Rational beta{1};
};

ModelParams make_params(const Rational& s, const Rational& w, int N = 1,
                        const Rational& r = Rational(1, 100000), const Rational& beta = Rational(1));
void validate(const ModelParams& params);

// Heavy-coordinate prefactor Y = r / (1 + 2rN) in X = -Y * sum(z^L - z^R).
Rational heavy_factor(const ModelParams& params);

struct PhysicalConstants {
  double hbar = 1.054571817e-34;    // J s
  double m_light = 3e-26;           // kg
  double boltzmann_K = 1.380649e-23;  // J/K
  double temperature_tau = 293.0;   // K
};

void validate(const PhysicalConstants& consts);

// (hbar^2 / 2m) * lambda for a modified-unit eigenvalue lambda (m^-2).
double physical_energy(double lambda_mod, const PhysicalConstants& consts);

nlohmann::json to_json(const ModelParams& params);
ModelParams params_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PhysicalConstants& consts);
PhysicalConstants constants_from_json(const nlohmann::json& j);

}  // namespace qw
