#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qw/manybody.hpp"

namespace qw {

double hbar_over_m(const PhysicalConstants& consts);

struct FrequencyTable {
  std::vector<ManyBodyIndex> basis;
  std::vector<double> omega;  // (hbar / 2m) lambda, rad/s
  Eigen::MatrixXd nu;         // omega_n - omega_n'
  Eigen::MatrixXd mu;         // T nu
  double T = 0;
  double cutoff = 1e-3;       // pairs with |nu| T below this are dropped
  bool dropped(long n, long np) const { return n == np || std::abs(mu(n, np)) < cutoff; }
};

FrequencyTable frequency_table(const std::vector<ManyBodyIndex>& basis, const ModelParams& params,
                               const PhysicalConstants& consts, double T, double cutoff = 1e-3);

struct MsdFit {
  double a = 0, slope_2D = 0, curvature_c = 0;
  double D = 0;
  bool criterion_met = false;
};

struct TrajectoryResult {
  std::vector<double> times;
  std::vector<double> x;
  double max_imag = 0;  // largest |Im X(t)| before discarding
  std::vector<double> lags;
  std::vector<double> msd;
  MsdFit fit;
  bool criterion_met = false;
  double D_est = 0;
};

// X(t) = sum conj(c_n) c_n' X_nn' exp(-i (omega_n' - omega_n) t). The MSD is
// lag-averaged on the uniform grid up to half its span and fitted on that range.
TrajectoryResult synthesize_trajectory(const EnsembleDraw& draw, const ModelParams& params,
                                       const PhysicalConstants& consts, const std::vector<double>& t_grid);

// Lag-averaged squared increments of a uniformly sampled signal, lags 0..max_lag.
std::vector<double> lag_msd(const std::vector<double>& x, long max_lag);

// Least squares msd ~ a + 2D lag + c lag^2. criterion_met iff c <= 0 up to a
// relative rounding allowance. FitError below four points.
MsdFit fit_msd(const std::vector<double>& lags, const std::vector<double>& msd);

enum class KernelMode { empirical, pluggable };

struct KernelSpec {
  KernelMode mode = KernelMode::empirical;
  std::function<double(double)> H, G;
};

struct DiffusionResult {
  KernelMode mode = KernelMode::empirical;
  double D = 0;
  double curvature = 0;   // empirical: fitted c
  double gamma_star = 0;  // pluggable
  bool criterion_met = false;
  double T = 0;
  double cutoff = 0;
};

// Empirical: refit the trajectory's MSD on lags <= T.
DiffusionResult diffusion_analysis(const TrajectoryResult& traj, double T);
// Pluggable: gamma* = (40/T^2) sum a H(mu), D = (12/T) sum a G(mu) over
// undropped pairs, a_nn' = |X_nn'|^2 |c_n|^2 |c_n'|^2.
DiffusionResult diffusion_analysis(const EnsembleDraw& draw, const ModelParams& params,
                                   const FrequencyTable& freq, const KernelSpec& kernels);

struct Scenario {
  double N = 0;   // light bodies
  double r = 0;   // m / M
  double rN = 0;  // V / M in CGS with unit density
};

// volume in cm^3, grain mass in g, water density 1 g/cm^3.
Scenario scenario(double volume_cm3, double grain_mass_g, const PhysicalConstants& consts);

enum class DropletShape { sphere, cube };
DropletShape parse_droplet_shape(const std::string& text);
double droplet_volume_cm3(double diameter_cm, DropletShape shape);

// K tau / (6 pi nu P)
double einstein_D(const PhysicalConstants& consts, double viscosity, double grain_radius);

// Free particle when trap_omega <= 0, otherwise the underdamped trapped form.
std::vector<double> langevin_msd(const PhysicalConstants& consts, double M, double gamma, double trap_omega,
                                 const std::vector<double>& T_grid);

// n(h) = n0 exp(-3 phi (Delta - delta) g h / 2W) with W = (3/2) K tau.
std::vector<double> perrin_profile(const PhysicalConstants& consts, double phi_volume, double density_excess,
                                   double g, const std::vector<double>& h_grid, double n0);
double perrin_half_height(const PhysicalConstants& consts, double phi_volume, double density_excess, double g);

}  // namespace qw
