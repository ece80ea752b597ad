#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qw/numerics.hpp"

namespace qw {

enum class SeriesKind { S1, S2, S3 };
std::string to_string(SeriesKind k);
SeriesKind parse_series_kind(const std::string& text);

// Direct sum. `exact` is meaningful only for base two; `value` always holds
// the high-precision sum (for base e the k-th term carries e^(-2k)).
struct SeriesValue {
  Base base = Base::two;
  Rational exact;
  HiPrec value;
};

// sum_k base^(-2k) (-1)^k C(u,k) (2s+2k-1)! / (s+k-1/2)!^2
SeriesValue s1_direct(long u, const Rational& s, Base base = Base::two);
// Same summand times k.
SeriesValue s2_direct(long u, const Rational& s, Base base = Base::two);
// sum_{j,k} (-1)^(j+k) C(u,j) C(u,k) (t+j+k)! / ((t+j)! (t+k)!)
Rational s3_direct(long u, long t);

// Circle-mean forms; the imaginary part of the mean must stay below `tol`.
HiPrec s1_integral(long u, const Rational& s, Base base, const HiPrec& tol);
HiPrec s2_integral(long u, const Rational& s, Base base, const HiPrec& tol);
// Circle mean of the t-fold tensor Gauss-Legendre integral over [-1,0]^t.
// nodes_per_axis <= 0 picks a count from the polynomial degree.
HiPrec s3_integral(long u, long t, const HiPrec& tol, int nodes_per_axis = 0);

struct SeriesResult {
  SeriesKind which = SeriesKind::S1;
  long u = 0;
  Rational s_or_t;
  Base base = Base::two;
  SeriesValue direct;
  HiPrec integral;
  HiPrec abs_diff;
};

SeriesResult evaluate_series(SeriesKind which, long u, const Rational& s_or_t, Base base,
                             const HiPrec& tol);

struct IteratedIntegral {
  HiPrec lhs;  // nested quadrature of I_n[g](z)
  HiPrec rhs;  // change-of-variables form over [-1,0]^n
};

IteratedIntegral iterated_integral_check(int n, const std::function<HiPrec(const HiPrec&)>& g,
                                         const HiPrec& z, const HiPrec& tol = HiPrec(1e-30));

// prod_{j=1}^{k-1} (1+s+j)/(1/2+s+j) - C(s) base^(-2k) (2s+2k)!/(s+k-1/2)!^2
// with C(s) = base^2 (s+1/2)!^2 / (2s+2)!.
Rational product_identity_residual_exact(long k, const Rational& s);
HiPrec product_identity_check(long k, const Rational& s, Base base);

// Location of the maximum of |integrand of S1| on (0, pi): formula versus
// grid search.
struct CriticalPoint {
  double theta_formula;
  double theta_grid;
  double grid_step;
};
CriticalPoint critical_point_check(long u, const Rational& s, Base base, int grid = 200000);

// Least-squares slope of log|y| against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace qw
