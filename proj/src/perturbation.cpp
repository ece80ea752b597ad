#include "qw/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace qw {

namespace {
long max_slot(const ManyBodyIndex& a) {
  int mx = 0;
  for (int i = 0; i < a.slots(); ++i) mx = std::max(mx, a.slot(i));
  return mx;
}
}  // namespace

double j_matrix_element(const ManyBodyIndex& a, const ManyBodyIndex& b, const ModelParams& params) {
  return ManyBodyOperators(params, std::max(max_slot(a), max_slot(b))).j_element(a, b);
}

std::vector<ManyBodyIndex> level_basis(const ModelParams& params, long n, size_t cap) {
  auto all = enumerate_basis(params, n, BasisMode::full, cap);
  std::vector<ManyBodyIndex> out;
  for (auto& a : all)
    if (a.total() == n) out.push_back(std::move(a));
  return out;
}

KMatrix build_k_matrix(long level_n, const ManyBodyOperators& ops, size_t cap) {
  if (level_n < 0) throw ValidationError("level_n must be nonnegative");
  if (ops.table().n_max < level_n) throw ValidationError("operator table does not cover the level");
  KMatrix k;
  k.level_n = level_n;
  k.basis = level_basis(ops.params(), level_n, cap);
  const long m = static_cast<long>(k.basis.size());
  k.entries = Eigen::MatrixXd::Zero(m, m);
  for (long t = 0; t < m; ++t)
    for (long p = 0; p < m; ++p) {
      if (differing_slots(k.basis[t], k.basis[p]).size() == 2) ++k.sparsity;
      k.entries(t, p) = ops.j_element(k.basis[t], k.basis[p]);
    }
  return k;
}

KMatrix build_k_matrix(long level_n, const ModelParams& params, size_t cap) {
  return build_k_matrix(level_n, ManyBodyOperators(params, std::max(level_n, 0L)), cap);
}

SplitLevel split_level(const KMatrix& k, const ModelParams& params) {
  const long m = k.entries.rows();
  if (m == 0 || k.entries.cols() != m) throw ValidationError("K matrix must be square and nonempty");
  SplitLevel out;
  out.lambda0 = 4 * params.w * k.level_n + 2 * params.N * params.w * (1 + 2 * params.s);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k.entries);
  if (es.info() != Eigen::Success) throw EigensolveError("K eigensolve did not converge");
  out.vectors = es.eigenvectors();
  for (long p = 0; p < m; ++p) {
    out.corrections.push_back(es.eigenvalues()(p));
    // sign convention: first component of largest magnitude is positive
    Eigen::Index pivot;
    out.vectors.col(p).cwiseAbs().maxCoeff(&pivot);
    if (out.vectors(pivot, p) < 0) out.vectors.col(p) *= -1;
  }
  for (long t = 0; t < m; ++t) {
    double row = 0;
    for (long p = 0; p < m; ++p)
      if (p != t) row += std::abs(k.entries(p, t));
    out.lhg_bound = std::max(out.lhg_bound, row);
  }
  out.c_entry = k.entries.cwiseAbs().maxCoeff();
  out.coarse_bound = static_cast<double>(k.level_n) * (2 * params.N - 1) * out.c_entry;
  return out;
}

FirstOrderVector first_order_vector(long level_n, int correction_index, const ModelParams& params,
                                    long cutoff, double tail_tolerance) {
  if (cutoff <= level_n) throw ValidationError("cutoff must exceed the level");
  ManyBodyOperators ops(params, cutoff);
  KMatrix k = build_k_matrix(level_n, ops);
  SplitLevel split = split_level(k, params);
  if (correction_index < 0 || correction_index >= static_cast<int>(split.corrections.size()))
    throw ValidationError("correction index out of range");
  FirstOrderVector f;
  f.level_n = level_n;
  f.correction_index = correction_index;
  f.cutoff = cutoff;
  f.lambda1 = split.corrections[correction_index];
  f.basis = enumerate_basis(params, cutoff, BasisMode::full);
  const size_t B = f.basis.size();
  f.zeroth.assign(B, 0.0);
  f.a.assign(B, 0.0);
  Eigen::VectorXd b = split.vectors.col(correction_index);
  const double w4 = 4 * to_double(params.w);
  std::vector<long> level_pos;
  for (size_t i = 0; i < B; ++i)
    if (f.basis[i].total() == level_n) level_pos.push_back(static_cast<long>(i));
  for (size_t p = 0; p < level_pos.size(); ++p) f.zeroth[level_pos[p]] = b(p);
  double tail2 = 0, norm2 = 0;
  for (size_t i = 0; i < B; ++i) {
    long tk = f.basis[i].total();
    if (tk == level_n) continue;
    double acc = 0;
    for (size_t p = 0; p < level_pos.size(); ++p) acc += b(p) * ops.j_element(f.basis[i], k.basis[p]);
    f.a[i] = -acc / (w4 * (tk - level_n));
    norm2 += f.a[i] * f.a[i];
    if (tk == cutoff) tail2 += f.a[i] * f.a[i];
  }
  f.norm = std::sqrt(norm2);
  f.tail_norm = std::sqrt(tail2);
  if (f.tail_norm > tail_tolerance * std::max(f.norm, 1e-300) && f.norm > 0)
    throw CutoffError("first-order tail " + std::to_string(f.tail_norm) + " above tolerance at cutoff " +
                      std::to_string(cutoff));
  return f;
}

std::vector<ResidualPoint> first_order_residuals(const FirstOrderVector& f, const ModelParams& params,
                                                 const std::vector<double>& r_values) {
  const long B = static_cast<long>(f.basis.size());
  ManyBodyOperators ops(params, f.cutoff);
  Eigen::Map<const Eigen::VectorXd> phi0(f.zeroth.data(), B), phi1(f.a.data(), B);
  Eigen::VectorXd Jphi0 = Eigen::VectorXd::Zero(B), Jphi1 = Eigen::VectorXd::Zero(B);
  for (long i = 0; i < B; ++i)
    for (long j = i + 1; j < B; ++j) {
      double v = ops.j_element(f.basis[i], f.basis[j]);
      if (v == 0) continue;
      Jphi0(i) += v * phi0(j);
      Jphi0(j) += v * phi0(i);
      Jphi1(i) += v * phi1(j);
      Jphi1(j) += v * phi1(i);
    }
  Eigen::VectorXd shift(B);
  const double w4 = 4 * to_double(params.w);
  for (long i = 0; i < B; ++i) shift(i) = w4 * (f.basis[i].total() - f.level_n);
  std::vector<ResidualPoint> out;
  for (double r : r_values) {
    Eigen::VectorXd v = phi0 + r * phi1;
    Eigen::VectorXd res = shift.cwiseProduct(v) + r * (Jphi0 + r * Jphi1) - r * f.lambda1 * v;
    out.push_back({r, res.norm()});
  }
  return out;
}

std::vector<RobustnessRow> bml_robustness_check(const ModelParams& params, const std::vector<double>& r_values,
                                                const EnsembleDraw& draw, const std::vector<long>& U_list,
                                                long one_body_cutoff) {
  long top = 0;
  for (const auto& b : draw.basis) {
    if (!is_special(b)) throw ValidationError("robustness check needs a draw over the special basis");
    top = std::max(top, b.total());
  }
  for (long U : U_list)
    if (U > top) throw ValidationError("U beyond the draw's basis");
  std::vector<double> c_abs(top + 1, 0.0);
  for (size_t i = 0; i < draw.basis.size(); ++i) c_abs[draw.basis[i].total()] += std::abs(draw.c[i]);

  ElementEngine eng(params);
  auto el = [&](Kernel k, long u, long v) { return static_cast<double>(eng.normalized(k, u, v).value()); };
  const long V = one_body_cutoff;
  std::vector<double> zv0(V + 1), dv0(V + 1), z0q(V + 1);
  for (long v = 1; v <= V; ++v) {
    zv0[v] = el(Kernel::z, v, 0);
    z0q[v] = el(Kernel::z, 0, v);
    dv0[v] = el(Kernel::d_dz, v, 0);
  }
  const double w4 = 4 * to_double(params.w);
  const double slots = 2.0 * params.N - 1;
  std::vector<double> M(top + 1, 0.0), delta(top + 1, 0.0);
  for (long u = 1; u <= top; ++u) {
    M[u] = el(Kernel::z, u, 0);
    double d0u = el(Kernel::d_dz, 0, u), du0 = el(Kernel::d_dz, u, 0);
    double t1 = 0, t2 = 0;
    for (long v = 1; v <= V; ++v) {
      if (v != u) t1 += 2 * d0u * dv0[v] * zv0[v] / (w4 * (v - u));
      t2 += 2 * du0 * dv0[v] * z0q[v] / (w4 * (u + v));
    }
    delta[u] = slots * (t1 + t2);
  }
  std::vector<double> base_abs(top + 1);
  for (long u = 0; u <= top; ++u) base_abs[u] = std::abs(M[u]);
  auto base = bml_partial_sums(c_abs, base_abs, params, U_list);

  std::vector<RobustnessRow> out;
  for (double r : r_values) {
    std::vector<double> pert_abs(top + 1);
    for (long u = 0; u <= top; ++u) pert_abs[u] = std::abs(M[u] + r * delta[u]);
    std::vector<long> all_U;
    for (long U = 0; U <= top; ++U) all_U.push_back(U);
    auto full = bml_partial_sums(c_abs, pert_abs, params, all_U);
    for (size_t i = 0; i < U_list.size(); ++i) {
      RobustnessRow row;
      row.r = r;
      row.U = U_list[i];
      row.unperturbed = base[i].value;
      row.perturbed = full[U_list[i]].value;
      row.relative_change =
          row.unperturbed != 0 ? std::abs(row.perturbed - row.unperturbed) / row.unperturbed : 0;
      for (long U = 1; U <= row.U; ++U)
        if (full[U].value < full[U - 1].value) row.monotone = false;
      out.push_back(row);
    }
  }
  return out;
}

}  // namespace qw
