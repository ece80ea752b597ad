#pragma once

#include <string>
#include <vector>

#include "qw/model.hpp"

namespace qw {

// coeff * sqrt(pi * w)^root, root in {0, 1}. Every Gaussian moment
// integral of the model has this shape.
struct ExactElement {
  Rational coeff{0};
  int root = 0;
  Rational w{1};

  HiPrec value() const;
  double to_double() const;
  std::string to_string() const;
  bool is_zero() const { return coeff == 0; }

  ExactElement& operator+=(const ExactElement& o);
  friend ExactElement operator+(ExactElement a, const ExactElement& b) { return a += b; }
  friend ExactElement operator*(const Rational& a, ExactElement e) {
    e.coeff *= a;
    return e;
  }
  friend bool operator==(const ExactElement& a, const ExactElement& b) {
    if (a.coeff == 0 || b.coeff == 0) return a.coeff == b.coeff;
    return a.coeff == b.coeff && a.root == b.root && (a.root == 0 || a.w == b.w);
  }
};

// Integrals mu(j) = int_0^inf exp(-w z^2) z^(2s + j) dz for j >= -1, computed
// from mu(0) and mu(-1) by mu(j+2) = (2s + j + 1)/(2w) mu(j).
class GaussianMoments {
 public:
  GaussianMoments(const Rational& s, const Rational& w);
  const ExactElement& operator()(long j);
  const Rational& s() const { return s_; }
  const Rational& w() const { return w_; }

 private:
  Rational s_, w_;
  std::vector<ExactElement> even_;  // j = 0, 2, 4, ...
  std::vector<ExactElement> odd_;   // j = -1, 1, 3, ...
};

struct MomentTable {
  Rational s_eff;
  Rational w;
  std::vector<Rational> sigma;  // sigma[k] = sigma_{2k}, sigma[0] = 1
  ExactElement gamma_mass;      // int_0^inf exp(-w z^2) z^(2 s_eff) dz; d0 is its reciprocal
};

MomentTable moments(const Rational& s_eff, const Rational& w, long k_max);

Rational eigenvalue(long n, const ModelParams& params);

struct OneVarState {
  long n = 0;
  Rational s, w;
  std::vector<Rational> a;     // a[k] = a_{2k;n}, k = 1..n (a[0] unused, a[1] = 1)
  std::vector<Rational> poly;  // monomial coefficients of P_n in z^(2k), k = 0..n
  Rational mu;
};

OneVarState eigenstate(long n, const ModelParams& params);

// 2(1+2s) a_2 - 4wn sum_k a_2k sigma_2k; zero for every eigenstate.
Rational first_row_residual(const OneVarState& state);
// (1 - u) - sum_{k=2}^u (-1)^(k-1) C(u,k); zero for u >= 1.
Integer binomial_identity_residual(long u);
// sum_{k=0}^u (-1)^k C(u,k).
Integer alternating_binomial_sum(long u);

HiPrec evaluate_xi(const OneVarState& state, const HiPrec& z);
HiPrec evaluate_poly(const OneVarState& state, const HiPrec& z);

// Lowest k_eigs eigenvalues of -d^2/dz^2 + q/z^2 + w^2 z^2 on [z_min, z_max]
// with Dirichlet ends, second-order central differences. The run is repeated
// at half the grid; a relative move above `tolerance` is a ConvergenceError.
std::vector<double> fd_oracle_spectrum(const ModelParams& params, int grid_points, double z_min,
                                       double z_max, int k_eigs, double tolerance = 1e-2);
// Single solve with no refinement check.
std::vector<double> fd_eigenvalues(const ModelParams& params, int grid_points, double z_min,
                                   double z_max, int k_eigs);

}  // namespace qw
