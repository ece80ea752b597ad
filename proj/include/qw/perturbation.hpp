#pragma once

#include <Eigen/Dense>

#include <vector>

#include "qw/manybody.hpp"

namespace qw {

// <phi_a|J|phi_b> between normalized product states.
double j_matrix_element(const ManyBodyIndex& a, const ManyBodyIndex& b, const ModelParams& params);

// Indices with total excitation n, in enumeration order.
std::vector<ManyBodyIndex> level_basis(const ModelParams& params, long n, size_t cap = kDefaultBasisCap);

struct KMatrix {
  long level_n = 0;
  std::vector<ManyBodyIndex> basis;
  Eigen::MatrixXd entries;
  long sparsity = 0;  // pairs (t, p) differing in exactly two slots
};

KMatrix build_k_matrix(long level_n, const ModelParams& params, size_t cap = kDefaultBasisCap);
// Same, reusing operators whose one-body table covers level_n.
KMatrix build_k_matrix(long level_n, const ManyBodyOperators& ops, size_t cap = kDefaultBasisCap);

struct SplitLevel {
  Rational lambda0;
  std::vector<double> corrections;  // ascending
  Eigen::MatrixXd vectors;          // column p belongs to corrections[p]
  double lhg_bound = 0;             // max row sum of off-diagonal |K|
  double c_entry = 0;               // max |K| entry
  double coarse_bound = 0;          // n (2N - 1) c_entry
};

SplitLevel split_level(const KMatrix& k, const ModelParams& params);

struct FirstOrderVector {
  long level_n = 0;
  int correction_index = 0;
  long cutoff = 0;
  double lambda1 = 0;
  std::vector<ManyBodyIndex> basis;  // full basis up to cutoff
  std::vector<double> zeroth;        // b coefficients placed on E_n
  std::vector<double> a;             // first-order coefficients, zero inside E_n
  double norm = 0;
  double tail_norm = 0;  // part of `a` on the outermost shell total == cutoff
};

// Throws CutoffError when tail_norm > tail_tolerance.
FirstOrderVector first_order_vector(long level_n, int correction_index, const ModelParams& params,
                                    long cutoff, double tail_tolerance = 1e-2);

// ||(H0 + rJ - lambda0 - r lambda1)(phi0 + r phi1)|| inside the truncated basis.
struct ResidualPoint {
  double r;
  double residual;
};

std::vector<ResidualPoint> first_order_residuals(const FirstOrderVector& f, const ModelParams& params,
                                                 const std::vector<double>& r_values);

struct RobustnessRow {
  double r = 0;
  long U = 0;
  double unperturbed = 0;
  double perturbed = 0;
  double relative_change = 0;
  bool monotone = true;  // perturbed partial sums nondecreasing up to U
};

// Partial BML sums with the first-order corrected special-state element
// <phi_u + r phi_u1|S|phi_0 + r phi_01>; eigenvalue corrections vanish for the
// special states and the ground state. One-body sums run to one_body_cutoff.
std::vector<RobustnessRow> bml_robustness_check(const ModelParams& params, const std::vector<double>& r_values,
                                                const EnsembleDraw& draw, const std::vector<long>& U_list,
                                                long one_body_cutoff = 60);

}  // namespace qw
