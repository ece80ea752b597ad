#include "qw/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace qw {

double hbar_over_m(const PhysicalConstants& consts) {
  validate(consts);
  return consts.hbar / consts.m_light;
}

FrequencyTable frequency_table(const std::vector<ManyBodyIndex>& basis, const ModelParams& params,
                               const PhysicalConstants& consts, double T, double cutoff) {
  if (!(T > 0)) throw ValidationError("observation time T must be positive");
  if (basis.empty()) throw ValidationError("frequency table: empty basis");
  FrequencyTable f;
  f.basis = basis;
  f.T = T;
  f.cutoff = cutoff;
  const long B = static_cast<long>(basis.size());
  const double half = hbar_over_m(consts) / 2;
  for (const auto& a : basis) f.omega.push_back(half * to_double(lambda_of(a, params)));
  f.nu.resize(B, B);
  for (long n = 0; n < B; ++n)
    for (long np = 0; np < B; ++np) f.nu(n, np) = f.omega[n] - f.omega[np];
  f.mu = T * f.nu;
  return f;
}

std::vector<double> lag_msd(const std::vector<double>& x, long max_lag) {
  const long n = static_cast<long>(x.size());
  if (max_lag < 0 || max_lag >= n) throw ValidationError("lag_msd: max_lag outside the sample range");
  std::vector<double> out(max_lag + 1, 0.0);
  for (long l = 1; l <= max_lag; ++l) {
    double acc = 0;
    for (long i = 0; i + l < n; ++i) {
      double d = x[i + l] - x[i];
      acc += d * d;
    }
    out[l] = acc / static_cast<double>(n - l);
  }
  return out;
}

MsdFit fit_msd(const std::vector<double>& lags, const std::vector<double>& msd) {
  const long n = static_cast<long>(lags.size());
  if (n != static_cast<long>(msd.size())) throw FitError("lag and msd lengths differ");
  if (n < 4) throw FitError("MSD fit needs at least four points, got " + std::to_string(n));
  double tmax = 0, ymax = 0;
  for (long i = 0; i < n; ++i) {
    tmax = std::max(tmax, std::abs(lags[i]));
    ymax = std::max(ymax, std::abs(msd[i]));
  }
  if (!(tmax > 0)) throw FitError("MSD lags are all zero");
  Eigen::MatrixXd A(n, 3);
  Eigen::VectorXd y(n);
  for (long i = 0; i < n; ++i) {
    double s = lags[i] / tmax;
    A(i, 0) = 1;
    A(i, 1) = s;
    A(i, 2) = s * s;
    y(i) = msd[i];
  }
  Eigen::Vector3d coef = A.colPivHouseholderQr().solve(y);
  MsdFit f;
  f.a = coef(0);
  f.slope_2D = coef(1) / tmax;
  f.curvature_c = coef(2) / (tmax * tmax);
  f.D = f.slope_2D / 2;
  f.criterion_met = f.curvature_c <= 1e-9 * ymax / (tmax * tmax);
  return f;
}

TrajectoryResult synthesize_trajectory(const EnsembleDraw& draw, const ModelParams& params,
                                       const PhysicalConstants& consts, const std::vector<double>& t_grid) {
  if (draw.basis.empty()) throw ValidationError("trajectory: empty basis");
  if (draw.basis.size() != draw.c.size()) throw ValidationError("trajectory: coefficient count mismatch");
  if (t_grid.empty()) throw ValidationError("trajectory: empty time grid");
  long mx = 0;
  for (const auto& a : draw.basis)
    for (int i = 0; i < a.slots(); ++i) mx = std::max<long>(mx, a.slot(i));
  ManyBodyOperators ops(params, mx);
  FrequencyTable freq = frequency_table(draw.basis, params, consts, 1.0);

  struct Term {
    std::complex<double> amp;
    double rate;  // omega_n' - omega_n
  };
  std::vector<Term> terms;
  const long B = static_cast<long>(draw.basis.size());
  for (long n = 0; n < B; ++n) {
    if (draw.c[n] == 0.0) continue;
    for (long np = 0; np < B; ++np) {
      if (draw.c[np] == 0.0) continue;
      double x = ops.x_element(draw.basis[n], draw.basis[np]);
      if (x == 0) continue;
      terms.push_back({std::conj(draw.c[n]) * draw.c[np] * x, freq.omega[np] - freq.omega[n]});
    }
  }

  TrajectoryResult r;
  r.times = t_grid;
  r.x.reserve(t_grid.size());
  for (double t : t_grid) {
    std::complex<double> acc = 0;
    for (const auto& term : terms) acc += term.amp * std::polar(1.0, -term.rate * t);
    r.x.push_back(acc.real());
    r.max_imag = std::max(r.max_imag, std::abs(acc.imag()));
  }

  const long n = static_cast<long>(t_grid.size());
  if (n >= 8) {
    double dt = t_grid[1] - t_grid[0];
    for (long i = 1; i < n; ++i)
      if (std::abs((t_grid[i] - t_grid[i - 1]) - dt) > 1e-9 * std::abs(dt))
        throw ValidationError("trajectory: MSD needs a uniform time grid");
    long max_lag = (n - 1) / 2;
    r.msd = lag_msd(r.x, max_lag);
    for (long l = 0; l <= max_lag; ++l) r.lags.push_back(l * dt);
    r.fit = fit_msd(r.lags, r.msd);
    r.criterion_met = r.fit.criterion_met;
    r.D_est = r.fit.D;
  }
  return r;
}

DiffusionResult diffusion_analysis(const TrajectoryResult& traj, double T) {
  if (!(T > 0)) throw ValidationError("diffusion: T must be positive");
  if (traj.lags.empty() || T > traj.lags.back() * (1 + 1e-12))
    throw ValidationError("diffusion: T beyond the available MSD lags");
  std::vector<double> lags, msd;
  for (size_t i = 0; i < traj.lags.size(); ++i)
    if (traj.lags[i] <= T * (1 + 1e-12)) {
      lags.push_back(traj.lags[i]);
      msd.push_back(traj.msd[i]);
    }
  MsdFit f = fit_msd(lags, msd);
  DiffusionResult d;
  d.mode = KernelMode::empirical;
  d.D = f.D;
  d.curvature = f.curvature_c;
  d.criterion_met = f.criterion_met;
  d.T = T;
  return d;
}

DiffusionResult diffusion_analysis(const EnsembleDraw& draw, const ModelParams& params,
                                   const FrequencyTable& freq, const KernelSpec& kernels) {
  if (kernels.mode != KernelMode::pluggable || !kernels.H || !kernels.G)
    throw ValidationError("pluggable diffusion needs both H and G");
  if (freq.basis.size() != draw.basis.size()) throw ValidationError("frequency table does not match the draw");
  long mx = 0;
  for (const auto& a : draw.basis)
    for (int i = 0; i < a.slots(); ++i) mx = std::max<long>(mx, a.slot(i));
  ManyBodyOperators ops(params, mx);
  const long B = static_cast<long>(draw.basis.size());
  double hsum = 0, gsum = 0;
  for (long n = 0; n < B; ++n)
    for (long np = 0; np < B; ++np) {
      if (freq.dropped(n, np)) continue;
      double x = ops.x_element(draw.basis[n], draw.basis[np]);
      double a = x * x * std::norm(draw.c[n]) * std::norm(draw.c[np]);
      if (a == 0) continue;
      hsum += a * kernels.H(freq.mu(n, np));
      gsum += a * kernels.G(freq.mu(n, np));
    }
  DiffusionResult d;
  d.mode = KernelMode::pluggable;
  d.T = freq.T;
  d.cutoff = freq.cutoff;
  d.gamma_star = 40 / (freq.T * freq.T) * hsum;
  d.D = 12 / freq.T * gsum;
  d.criterion_met = d.gamma_star <= 0;
  return d;
}

Scenario scenario(double volume_cm3, double grain_mass_g, const PhysicalConstants& consts) {
  if (!(volume_cm3 > 0) || !(grain_mass_g > 0)) throw ValidationError("scenario inputs must be positive");
  validate(consts);
  double m_g = consts.m_light * 1e3;
  Scenario s;
  s.N = volume_cm3 / m_g;
  s.r = m_g / grain_mass_g;
  s.rN = volume_cm3 / grain_mass_g;
  return s;
}

DropletShape parse_droplet_shape(const std::string& text) {
  if (text == "sphere") return DropletShape::sphere;
  if (text == "cube") return DropletShape::cube;
  throw ValidationError("droplet shape must be sphere or cube");
}

double droplet_volume_cm3(double diameter_cm, DropletShape shape) {
  if (!(diameter_cm > 0)) throw ValidationError("droplet diameter must be positive");
  double d3 = diameter_cm * diameter_cm * diameter_cm;
  return shape == DropletShape::cube ? d3 : M_PI * d3 / 6;
}

double einstein_D(const PhysicalConstants& consts, double viscosity, double grain_radius) {
  if (!(viscosity > 0) || !(grain_radius > 0)) throw ValidationError("einstein_D inputs must be positive");
  if (consts.temperature_tau < 0) throw ValidationError("temperature must be nonnegative");
  return consts.boltzmann_K * consts.temperature_tau / (6 * M_PI * viscosity * grain_radius);
}

std::vector<double> langevin_msd(const PhysicalConstants& consts, double M, double gamma, double trap_omega,
                                 const std::vector<double>& T_grid) {
  if (!(M > 0) || !(gamma > 0)) throw ValidationError("langevin_msd: M and gamma must be positive");
  const double kt = consts.boltzmann_K * consts.temperature_tau;
  std::vector<double> out;
  for (double T : T_grid) {
    if (trap_omega > 0) {
      double w = trap_omega;
      double e = std::exp(-T * gamma / (2 * M));
      out.push_back(2 * kt / (M * w * w) * (1 - e * (std::cos(w * T) + gamma * std::sin(w * T) / (2 * w * M))));
    } else {
      double g = gamma / M * T;
      // expm1 keeps the ballistic regime accurate
      out.push_back(2 * kt * M / (gamma * gamma) * (g - (-std::expm1(-g))));
    }
  }
  return out;
}

std::vector<double> perrin_profile(const PhysicalConstants& consts, double phi_volume, double density_excess,
                                   double g, const std::vector<double>& h_grid, double n0) {
  if (!(phi_volume > 0) || !(g > 0) || !(n0 > 0)) throw ValidationError("perrin_profile inputs must be positive");
  const double W = 1.5 * consts.boltzmann_K * consts.temperature_tau;
  if (!(W > 0)) throw ValidationError("perrin_profile: temperature must be positive");
  std::vector<double> out;
  for (double h : h_grid) out.push_back(n0 * std::exp(-3 * phi_volume * density_excess * g * h / (2 * W)));
  return out;
}

double perrin_half_height(const PhysicalConstants& consts, double phi_volume, double density_excess, double g) {
  const double W = 1.5 * consts.boltzmann_K * consts.temperature_tau;
  return 2.0 / 3.0 * W * std::log(2.0) / (phi_volume * density_excess * g);
}

}  // namespace qw
