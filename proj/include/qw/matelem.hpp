#pragma once

#include <Eigen/Dense>

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qw/spectrum.hpp"

namespace qw {

enum class Kernel { identity, z, z2, z_inverse, d_dz };
std::string to_string(Kernel k);
Kernel parse_kernel(const std::string& text);

// sign * sqrt(square * pi^pi_power): a raw element divided by the two
// exact norms.
struct NormalizedElement {
  int sign = 0;
  Rational square;
  int pi_power = 0;

  HiPrec value() const;
  std::string to_string() const;
  friend bool operator==(const NormalizedElement& a, const NormalizedElement& b) {
    if (a.sign == 0 || b.sign == 0) return a.sign == b.sign;
    return a.sign == b.sign && a.square == b.square && a.pi_power == b.pi_power;
  }
};

// Caches eigenstates and moment rows for one (s, w). Not thread-safe.
class ElementEngine {
 public:
  explicit ElementEngine(const ModelParams& params);

  const ModelParams& params() const { return params_; }
  const OneVarState& state(long n);
  GaussianMoments& moments() { return mom_; }

  ExactElement raw(Kernel k, long u, long v);
  Rational norm_squared(long u);
  NormalizedElement normalized(Kernel k, long u, long v);

 private:
  // R[m] = sum_k c_u[k] mu(2k + 2m + e), m = 0..len-1 (coefficients only).
  const std::vector<Rational>& row(long u, int e, long len);

  ModelParams params_;
  GaussianMoments mom_;
  std::vector<std::unique_ptr<OneVarState>> states_;
  std::map<std::pair<long, int>, std::vector<Rational>> rows_;
  std::map<long, Rational> norms_;
};

Rational inner_product(long u, long v, const ModelParams& params);
ExactElement z_matrix_element(long u, long v, const ModelParams& params);
ExactElement z2_matrix_element(long u, long v, const ModelParams& params);
ExactElement z_inverse_matrix_element(long u, long v, const ModelParams& params);
ExactElement ddz_matrix_element(long u, long v, const ModelParams& params);
Rational norm_squared(long u, const ModelParams& params);

// <xi_u|xi_u> = mu(0) t! u!/(u+t)! ((1+2s)/(2wu))^2 for u >= 1, t = s - 1/2.
Rational norm_squared_closed_form(long u, const ModelParams& params);

struct MatrixElementReport {
  long u = 0, v = 0;
  Kernel kernel = Kernel::identity;
  std::string method;  // "moment_algebra" or "quadrature"
  HiPrec raw;
  HiPrec normalized;
  std::string raw_exact;  // empty for quadrature
};

MatrixElementReport matrix_element_report(Kernel k, long u, long v, const ModelParams& params,
                                          const std::string& method, int target_digits = 30);
HiPrec quadrature_element(Kernel k, long u, long v, const ModelParams& params, int target_digits);

struct Theorem2Row {
  long u;
  HiPrec value;
  HiPrec u_times_value;
};

// Normalized <xi_u|z|xi_0> by exact moment algebra.
std::vector<Theorem2Row> theorem2_sequence(const ModelParams& params, const std::vector<long>& u_list);

// Closed form of the normalized <xi_u|z|xi_0> for u >= 1:
// -(mu(1)/mu(0)) (-1/2)_u/(s+1/2)_u sqrt((u+t)!/(t! u!)).
NormalizedElement ground_z_closed_form(long u, const ModelParams& params);
// Same sequence for u = 0..U by its two-term ratio, in HiPrec.
std::vector<HiPrec> ground_z_sequence(const ModelParams& params, long U);

struct DenominatorAssembly {
  long u = 0;
  Rational s3;             // S3(u, t)
  Rational prefactor;      // mu(0) t! ((1+2s)/(2wu))^2
  Rational s3_part;        // prefactor * S3
  Rational J0, J1;         // row sums of the j = 0 and j = 1 terms
  Rational constant_part;  // d0^-1 ((1+2s)/2w)^2 / (s+1/2), the claimed limit
  Rational value;          // assembled norm
};

// Throws InternalConsistencyError if J0 != 0, or J1 != 0 for u >= 2
// (at u = 1 the first-moment binomial sum is -1, so J1 = 2/(t+1)!).
DenominatorAssembly denominator_assembly(const ModelParams& params, long u);

struct NumeratorAssembly {
  long u = 0;
  ExactElement shifted_moments;  // mu(1) sum_k a_2k [sigma_2k(s+1/2) - sigma_2k(s)]
  ExactElement closed_form;      // -mu(1) (1+2s)/(2wu) (-1/2)_u/(s+1/2)_u
  Rational bracket;              // 2w d0(s+1/2) <xi_u|z|xi_0>
};

NumeratorAssembly numerator_assembly(const ModelParams& params, long u);

// The u^-1 coefficient claimed for the numerator bracket:
// 4(1+s) C(s) (2s-1)!/(s-1/2)!^2 - 1 - 2s with the base-2 C(s).
Rational claimed_inverse_u_coefficient(const ModelParams& params);

// Normalized one-body tables for indices 0..n_max (doubles).
struct ElementTable {
  long n_max = 0;
  Eigen::MatrixXd z, z2, ddz;
};

ElementTable element_table(const ModelParams& params, long n_max);

}  // namespace qw
