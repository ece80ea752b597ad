#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qw/matelem.hpp"

namespace qw {

// Product eigenstate of H0: excitation indices of the N left and N right
// one-body factors.
struct ManyBodyIndex {
  std::vector<int> L, R;

  long total() const;
  int slots() const { return static_cast<int>(L.size() + R.size()); }
  int slot(int i) const { return i < static_cast<int>(L.size()) ? L[i] : R[i - L.size()]; }
  bool is_left(int i) const { return i < static_cast<int>(L.size()); }
  std::string to_string() const;
  friend bool operator==(const ManyBodyIndex& a, const ManyBodyIndex& b) {
    return a.L == b.L && a.R == b.R;
  }
};

ManyBodyIndex ground_index(int N);
ManyBodyIndex special_index(int N, int u);
bool is_special(const ManyBodyIndex& a);
// Slots at which a and b differ.
std::vector<int> differing_slots(const ManyBodyIndex& a, const ManyBodyIndex& b);

// 4w * total + 2N w (1 + 2s)
Rational lambda_of(const ManyBodyIndex& a, const ModelParams& params);

enum class BasisMode { special, full };
BasisMode parse_basis_mode(const std::string& text);

constexpr size_t kDefaultBasisCap = 20000;

// special: ground, then L(1) = u for u = 1..n_max.
// full: every index with total <= n_max, by total and then descending
// lexicographic order of (L, R).
std::vector<ManyBodyIndex> enumerate_basis(const ModelParams& params, long n_max, BasisMode mode,
                                           size_t cap = kDefaultBasisCap);
size_t full_basis_count(int N, long n_max);

// Normalized one-body tables plus the many-body operators built from them.
class ManyBodyOperators {
 public:
  ManyBodyOperators(const ModelParams& params, long one_body_max);

  const ModelParams& params() const { return params_; }
  const ElementTable& table() const { return tab_; }
  double Y() const { return Y_; }

  // <a| sum_k (z^L_k - z^R_k) |b>
  double s_element(const ManyBodyIndex& a, const ManyBodyIndex& b) const;
  // <a| (sum_k (z^L_k - z^R_k))^2 |b>, exact (not truncated to a basis).
  double s2_element(const ManyBodyIndex& a, const ManyBodyIndex& b) const;
  // <a|X|b> with X = -Y sum_k (z^L_k - z^R_k).
  double x_element(const ManyBodyIndex& a, const ManyBodyIndex& b) const { return -Y_ * s_element(a, b); }
  // <a|J|b>, J = -sum_{j != k}(dL_j dL_k + dR_j dR_k) + 2 sum_{j,k} dL_j dR_k.
  double j_element(const ManyBodyIndex& a, const ManyBodyIndex& b) const;

 private:
  void check_range(const ManyBodyIndex& a) const;
  ModelParams params_;
  ElementTable tab_;
  double Y_;
};

double x_matrix_element(const ManyBodyIndex& a, const ManyBodyIndex& b, const ModelParams& params);

// ---- ensembles

// Independent generator for a named sub-stream of a master seed.
std::mt19937_64 make_stream(std::uint64_t seed, const std::string& name);

enum class Profile { special_loglog, gibbs_gaussian, custom };
std::string to_string(Profile p);
Profile parse_profile(const std::string& text);

struct EnsembleDraw {
  std::vector<ManyBodyIndex> basis;
  std::vector<std::complex<double>> c;
  Profile profile = Profile::custom;
  double beta = 0;
  std::uint64_t seed = 0;
};

// special_loglog: c_u = 1/(u log u) for u >= 2 (u = total excitation).
// gibbs_gaussian: complex Gaussian with variance exp(-beta (lambda - lambda_min)),
// then projected to the unit sphere.
EnsembleDraw make_ensemble(const std::vector<ManyBodyIndex>& basis, Profile profile, double beta,
                           std::uint64_t seed, const ModelParams& params,
                           const std::string& stream = "ensemble/0");
EnsembleDraw make_custom_ensemble(const std::vector<ManyBodyIndex>& basis,
                                  std::vector<std::complex<double>> c);
// c_u = u^(-p) for u >= 1 over a special basis.
EnsembleDraw power_law_ensemble(const std::vector<ManyBodyIndex>& basis, double p);

// ---- BML criterion

struct PartialSum {
  long U;
  double value;
};

// Partial sums over u = 1..U of |c_u| |<phi_u|S|phi_0>| |lambda_u - lambda_0|
// for a draw over the special basis.
std::vector<PartialSum> bml_partial_sums(const EnsembleDraw& draw, const ModelParams& params,
                                         const std::vector<long>& U_list);
// Same from explicit per-u coefficient magnitudes (index u, entry 0 unused)
// and per-u element magnitudes.
std::vector<PartialSum> bml_partial_sums(const std::vector<double>& c_abs,
                                         const std::vector<double>& element_abs,
                                         const ModelParams& params, const std::vector<long>& U_list);

// ---- dispersion

struct DispersionTerms {
  double mean_s2 = 0;          // E sum_n |c_n|^2 (S^2)_nn
  double mean_diag_pairs = 0;  // E sum_{n,n'} |c_n|^2 |c_n'|^2 S_nn S_n'n'
  double mean_offdiag = 0;     // E sum_{n != n'} |c_n|^2 |c_n'|^2 S_nn'^2
};

struct DispersionReport {
  int N = 0;
  double beta = 0;
  double Y = 0;
  long n_draws = 0;
  DispersionTerms terms;
  double dispersion_over_Y2 = 0;   // Monte Carlo E D(S)
  double dispersion_stderr = 0;    // of the above
  double paired_over_Y2 = 0;       // mean_s2 - mean_diag_pairs - mean_offdiag
  double dispersion = 0;           // Y^2 * dispersion_over_Y2
  double scaling_exponent = 0;     // filled by dispersion_scaling
};

// Variance of S (times Y^2 for X) in a normalized state over `basis`.
double state_dispersion_over_Y2(const ManyBodyOperators& ops, const std::vector<ManyBodyIndex>& basis,
                                const std::vector<std::complex<double>>& c);

DispersionReport dispersion_report(const ModelParams& params, const std::vector<ManyBodyIndex>& basis,
                                   double beta, long n_draws, std::uint64_t seed);

struct DispersionScaling {
  std::vector<DispersionReport> reports;
  double exponent = 0;  // fitted slope of log E D(X)/Y^2 against log N
};

DispersionScaling dispersion_scaling(const ModelParams& base, const std::vector<int>& N_list,
                                     long n_max, double beta, long n_draws, std::uint64_t seed);

struct CatVerdict {
  bool cat_free = false;        // sqrt(D(X)) < P
  bool visible_motion = false;  // sqrt(D_diff T) > P
  bool joint = false;
  double f_est = 0;  // D(X) / (Y^2 N^2)
  double g_est = 0;  // D_diff T / Y^2
  bool n2f_below_g = false;
};

CatVerdict cat_check(double dispersion_X, double Y, int N, double D_diff, double grain_diameter_P,
                     double T);

}  // namespace qw
