#include "qw/manybody.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "qw/oscseries.hpp"

namespace qw {

long ManyBodyIndex::total() const {
  long t = 0;
  for (int v : L) t += v;
  for (int v : R) t += v;
  return t;
}

std::string ManyBodyIndex::to_string() const {
  std::ostringstream os;
  os << '(';
  for (size_t i = 0; i < L.size(); ++i) os << (i ? "," : "") << L[i];
  os << '|';
  for (size_t i = 0; i < R.size(); ++i) os << (i ? "," : "") << R[i];
  os << ')';
  return os.str();
}

ManyBodyIndex ground_index(int N) {
  if (N < 1) throw ValidationError("N must be at least 1");
  return {std::vector<int>(N, 0), std::vector<int>(N, 0)};
}

ManyBodyIndex special_index(int N, int u) {
  ManyBodyIndex a = ground_index(N);
  a.L[0] = u;
  return a;
}

bool is_special(const ManyBodyIndex& a) {
  for (size_t i = 1; i < a.L.size(); ++i)
    if (a.L[i]) return false;
  for (int v : a.R)
    if (v) return false;
  return true;
}

std::vector<int> differing_slots(const ManyBodyIndex& a, const ManyBodyIndex& b) {
  if (a.L.size() != b.L.size() || a.R.size() != b.R.size())
    throw ValidationError("many-body indices with different N");
  std::vector<int> d;
  for (int i = 0; i < a.slots(); ++i)
    if (a.slot(i) != b.slot(i)) d.push_back(i);
  return d;
}

Rational lambda_of(const ManyBodyIndex& a, const ModelParams& params) {
  return 4 * params.w * a.total() + 2 * params.N * params.w * (1 + 2 * params.s);
}

BasisMode parse_basis_mode(const std::string& text) {
  if (text == "special") return BasisMode::special;
  if (text == "full") return BasisMode::full;
  throw ValidationError("basis mode must be special or full, got '" + text + "'");
}

size_t full_basis_count(int N, long n_max) {
  // weak compositions of 0..n_max into 2N parts: C(n_max + 2N, 2N)
  Integer c = binomial(static_cast<unsigned long>(n_max + 2 * N), static_cast<unsigned long>(2 * N));
  if (!c.fits_ulong_p()) return static_cast<size_t>(-1);
  return c.get_ui();
}

std::vector<ManyBodyIndex> enumerate_basis(const ModelParams& params, long n_max, BasisMode mode,
                                           size_t cap) {
  if (n_max < 0) throw ValidationError("n_max must be nonnegative");
  const int N = params.N;
  std::vector<ManyBodyIndex> out;
  if (mode == BasisMode::special) {
    if (static_cast<size_t>(n_max) + 1 > cap) throw SizeError("special basis exceeds the size cap");
    for (long u = 0; u <= n_max; ++u) out.push_back(special_index(N, static_cast<int>(u)));
    return out;
  }
  size_t count = full_basis_count(N, n_max);
  if (count > cap)
    throw SizeError("full basis has " + std::to_string(count) + " states, above the cap of " +
                    std::to_string(cap));
  out.reserve(count);
  std::vector<int> slots(2 * N, 0);
  std::function<void(int, long)> fill = [&](int i, long remaining) {
    if (i == 2 * N - 1) {
      slots[i] = static_cast<int>(remaining);
      ManyBodyIndex a;
      a.L.assign(slots.begin(), slots.begin() + N);
      a.R.assign(slots.begin() + N, slots.end());
      out.push_back(std::move(a));
      return;
    }
    for (long v = remaining; v >= 0; --v) {
      slots[i] = static_cast<int>(v);
      fill(i + 1, remaining - v);
    }
  };
  for (long n = 0; n <= n_max; ++n) fill(0, n);
  return out;
}

ManyBodyOperators::ManyBodyOperators(const ModelParams& params, long one_body_max)
    : params_(params), tab_(element_table(params, one_body_max)), Y_(to_double(heavy_factor(params))) {}

void ManyBodyOperators::check_range(const ManyBodyIndex& a) const {
  if (static_cast<int>(a.L.size()) != params_.N || static_cast<int>(a.R.size()) != params_.N)
    throw ValidationError("many-body index " + a.to_string() + " does not match N");
  for (int i = 0; i < a.slots(); ++i)
    if (a.slot(i) < 0 || a.slot(i) > tab_.n_max)
      throw ValidationError("one-body index outside the precomputed table in " + a.to_string());
}

double ManyBodyOperators::s_element(const ManyBodyIndex& a, const ManyBodyIndex& b) const {
  check_range(a);
  check_range(b);
  auto d = differing_slots(a, b);
  if (d.size() > 1) return 0;
  if (d.size() == 1) {
    int i = d[0];
    double z = tab_.z(a.slot(i), b.slot(i));
    return a.is_left(i) ? z : -z;
  }
  double acc = 0;
  for (int i = 0; i < a.slots(); ++i) acc += (a.is_left(i) ? 1 : -1) * tab_.z(a.slot(i), a.slot(i));
  return acc;
}

double ManyBodyOperators::s2_element(const ManyBodyIndex& a, const ManyBodyIndex& b) const {
  check_range(a);
  check_range(b);
  auto d = differing_slots(a, b);
  auto eps = [&](int i) { return a.is_left(i) ? 1.0 : -1.0; };
  if (d.size() > 2) return 0;
  if (d.size() == 2) {
    int i = d[0], j = d[1];
    return 2 * eps(i) * eps(j) * tab_.z(a.slot(i), b.slot(i)) * tab_.z(a.slot(j), b.slot(j));
  }
  if (d.size() == 1) {
    int i = d[0];
    double zi = tab_.z(a.slot(i), b.slot(i));
    double others = 0;
    for (int j = 0; j < a.slots(); ++j)
      if (j != i) others += eps(j) * tab_.z(a.slot(j), a.slot(j));
    return tab_.z2(a.slot(i), b.slot(i)) + 2 * eps(i) * zi * others;
  }
  double lin = 0, sq = 0, z2 = 0;
  for (int i = 0; i < a.slots(); ++i) {
    double z = tab_.z(a.slot(i), a.slot(i));
    lin += eps(i) * z;
    sq += z * z;
    z2 += tab_.z2(a.slot(i), a.slot(i));
  }
  return lin * lin - sq + z2;
}

double ManyBodyOperators::j_element(const ManyBodyIndex& a, const ManyBodyIndex& b) const {
  check_range(a);
  check_range(b);
  auto d = differing_slots(a, b);
  // Each term differentiates two distinct coordinates and <xi|d/dz|xi> = 0,
  // so only pairs differing in exactly two slots couple.
  if (d.size() != 2) return 0;
  int i = d[0], j = d[1];
  double prod = tab_.ddz(a.slot(i), b.slot(i)) * tab_.ddz(a.slot(j), b.slot(j));
  bool same_side = a.is_left(i) == a.is_left(j);
  return same_side ? -2 * prod : 2 * prod;
}

double x_matrix_element(const ManyBodyIndex& a, const ManyBodyIndex& b, const ModelParams& params) {
  int mx = 0;
  for (int i = 0; i < a.slots(); ++i) mx = std::max(mx, a.slot(i));
  for (int i = 0; i < b.slots(); ++i) mx = std::max(mx, b.slot(i));
  return ManyBodyOperators(params, mx).x_element(a, b);
}

// ---- ensembles

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void normalize(std::vector<std::complex<double>>& c) {
  double n2 = 0;
  for (const auto& x : c) n2 += std::norm(x);
  if (!(n2 > 0)) throw ValidationError("ensemble coefficients are all zero");
  double inv = 1 / std::sqrt(n2);
  for (auto& x : c) x *= inv;
}
}  // namespace

std::mt19937_64 make_stream(std::uint64_t seed, const std::string& name) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ fnv1a(name)));
}

std::string to_string(Profile p) {
  switch (p) {
    case Profile::special_loglog: return "special_loglog";
    case Profile::gibbs_gaussian: return "gibbs_gaussian";
    case Profile::custom: return "custom";
  }
  return "?";
}

Profile parse_profile(const std::string& text) {
  if (text == "special_loglog" || text == "loglog") return Profile::special_loglog;
  if (text == "gibbs_gaussian" || text == "gibbs") return Profile::gibbs_gaussian;
  if (text == "custom") return Profile::custom;
  throw ValidationError("unknown profile '" + text + "'");
}

EnsembleDraw make_ensemble(const std::vector<ManyBodyIndex>& basis, Profile profile, double beta,
                           std::uint64_t seed, const ModelParams& params, const std::string& stream) {
  if (basis.empty()) throw ValidationError("ensemble basis is empty");
  if (beta < 0 || std::isnan(beta)) throw ValidationError("beta must be nonnegative");
  EnsembleDraw d;
  d.basis = basis;
  d.profile = profile;
  d.beta = beta;
  d.seed = seed;
  d.c.assign(basis.size(), 0.0);
  if (profile == Profile::special_loglog) {
    for (size_t i = 0; i < basis.size(); ++i) {
      long u = basis[i].total();
      if (u >= 2) d.c[i] = 1.0 / (u * std::log(static_cast<double>(u)));
    }
  } else if (profile == Profile::gibbs_gaussian) {
    std::vector<double> lam(basis.size());
    for (size_t i = 0; i < basis.size(); ++i) lam[i] = to_double(lambda_of(basis[i], params));
    double lmin = *std::min_element(lam.begin(), lam.end());
    auto gen = make_stream(seed, stream);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (size_t i = 0; i < basis.size(); ++i) {
      double dl = lam[i] - lmin;
      double var = dl == 0 ? 1.0 : std::exp(-beta * dl);
      double sd = std::sqrt(var / 2);
      double re = normal(gen), im = normal(gen);
      d.c[i] = {sd * re, sd * im};
    }
  } else {
    throw ValidationError("custom profile needs explicit coefficients");
  }
  normalize(d.c);
  return d;
}

EnsembleDraw make_custom_ensemble(const std::vector<ManyBodyIndex>& basis,
                                  std::vector<std::complex<double>> c) {
  if (basis.empty() || basis.size() != c.size())
    throw ValidationError("custom ensemble needs one coefficient per basis state");
  EnsembleDraw d;
  d.basis = basis;
  d.c = std::move(c);
  d.profile = Profile::custom;
  normalize(d.c);
  return d;
}

EnsembleDraw power_law_ensemble(const std::vector<ManyBodyIndex>& basis, double p) {
  std::vector<std::complex<double>> c(basis.size(), 0.0);
  for (size_t i = 0; i < basis.size(); ++i) {
    long u = basis[i].total();
    if (u >= 1) c[i] = std::pow(static_cast<double>(u), -p);
  }
  return make_custom_ensemble(basis, std::move(c));
}

// ---- BML

std::vector<PartialSum> bml_partial_sums(const std::vector<double>& c_abs,
                                         const std::vector<double>& element_abs,
                                         const ModelParams& params, const std::vector<long>& U_list) {
  const double w = to_double(params.w);
  std::vector<PartialSum> out;
  double acc = 0;
  long u = 0;
  long top = static_cast<long>(std::min(c_abs.size(), element_abs.size())) - 1;
  for (long U : U_list) {
    if (U > top) throw ValidationError("partial-sum index U=" + std::to_string(U) + " beyond the basis");
    if (U < u) throw ValidationError("U_list must be nondecreasing");
    for (; u < U; ++u) {
      long k = u + 1;
      acc += c_abs[k] * element_abs[k] * 4 * w * k;
    }
    out.push_back({U, acc});
  }
  return out;
}

std::vector<PartialSum> bml_partial_sums(const EnsembleDraw& draw, const ModelParams& params,
                                         const std::vector<long>& U_list) {
  long top = 0;
  for (const auto& b : draw.basis) {
    if (!is_special(b)) throw ValidationError("BML partial sums need a draw over the special basis");
    top = std::max(top, b.total());
  }
  std::vector<double> c_abs(top + 1, 0.0);
  for (size_t i = 0; i < draw.basis.size(); ++i) c_abs[draw.basis[i].total()] += std::abs(draw.c[i]);
  auto seq = ground_z_sequence(params, top);
  std::vector<double> el(top + 1);
  for (long u = 0; u <= top; ++u) el[u] = std::abs(static_cast<double>(seq[u]));
  return bml_partial_sums(c_abs, el, params, U_list);
}

// ---- dispersion

namespace {
long max_slot(const std::vector<ManyBodyIndex>& basis) {
  long mx = 0;
  for (const auto& b : basis)
    for (int i = 0; i < b.slots(); ++i) mx = std::max<long>(mx, b.slot(i));
  return mx;
}

struct DenseOps {
  Eigen::MatrixXd S, S2;
};

DenseOps dense_ops(const ManyBodyOperators& ops, const std::vector<ManyBodyIndex>& basis) {
  const long B = static_cast<long>(basis.size());
  DenseOps d;
  d.S.resize(B, B);
  d.S2.resize(B, B);
  for (long i = 0; i < B; ++i)
    for (long j = i; j < B; ++j) {
      d.S(i, j) = d.S(j, i) = ops.s_element(basis[i], basis[j]);
      d.S2(i, j) = d.S2(j, i) = ops.s2_element(basis[i], basis[j]);
    }
  return d;
}

double dispersion_of(const DenseOps& d, const Eigen::VectorXcd& c) {
  std::complex<double> m1 = c.dot(d.S * c);  // dot conjugates its first argument
  std::complex<double> m2 = c.dot(d.S2 * c);
  return m2.real() - std::norm(m1);
}
}  // namespace

double state_dispersion_over_Y2(const ManyBodyOperators& ops, const std::vector<ManyBodyIndex>& basis,
                                const std::vector<std::complex<double>>& c) {
  if (basis.size() != c.size()) throw ValidationError("coefficient count does not match basis");
  DenseOps d = dense_ops(ops, basis);
  Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(c.data(), static_cast<long>(c.size()));
  return dispersion_of(d, v);
}

DispersionReport dispersion_report(const ModelParams& params, const std::vector<ManyBodyIndex>& basis,
                                   double beta, long n_draws, std::uint64_t seed) {
  if (basis.empty()) throw ValidationError("dispersion: empty basis");
  if (n_draws < 1) throw ValidationError("dispersion: need at least one draw");
  ManyBodyOperators ops(params, max_slot(basis));
  DenseOps d = dense_ops(ops, basis);
  const long B = static_cast<long>(basis.size());
  DispersionReport r;
  r.N = params.N;
  r.beta = beta;
  r.Y = ops.Y();
  r.n_draws = n_draws;
  double sum = 0, sumsq = 0;
  Eigen::VectorXd Sdiag = d.S.diagonal();
  for (long k = 0; k < n_draws; ++k) {
    EnsembleDraw draw = make_ensemble(basis, Profile::gibbs_gaussian, beta, seed, params,
                                      "dispersion/" + std::to_string(k));
    Eigen::VectorXcd c = Eigen::Map<const Eigen::VectorXcd>(draw.c.data(), B);
    double D = dispersion_of(d, c);
    sum += D;
    sumsq += D * D;
    Eigen::VectorXd p = c.cwiseAbs2();
    r.terms.mean_s2 += p.dot(d.S2.diagonal());
    double diag = p.dot(Sdiag);
    r.terms.mean_diag_pairs += diag * diag;
    double off = p.dot(d.S.cwiseAbs2() * p) - p.cwiseAbs2().dot(Sdiag.cwiseAbs2());
    r.terms.mean_offdiag += off;
  }
  double n = static_cast<double>(n_draws);
  r.terms.mean_s2 /= n;
  r.terms.mean_diag_pairs /= n;
  r.terms.mean_offdiag /= n;
  r.dispersion_over_Y2 = sum / n;
  r.dispersion_stderr = n > 1 ? std::sqrt(std::max(0.0, sumsq / n - (sum / n) * (sum / n)) / (n - 1)) : 0;
  r.paired_over_Y2 = r.terms.mean_s2 - r.terms.mean_diag_pairs - r.terms.mean_offdiag;
  r.dispersion = r.Y * r.Y * r.dispersion_over_Y2;
  return r;
}

DispersionScaling dispersion_scaling(const ModelParams& base, const std::vector<int>& N_list,
                                     long n_max, double beta, long n_draws, std::uint64_t seed) {
  DispersionScaling out;
  std::vector<double> xs, ys;
  for (int N : N_list) {
    ModelParams p = make_params(base.s, base.w, N, base.r, base.beta);
    auto basis = enumerate_basis(p, n_max, BasisMode::full);
    DispersionReport r = dispersion_report(p, basis, beta, n_draws, seed);
    xs.push_back(N);
    ys.push_back(r.dispersion_over_Y2);
    out.reports.push_back(r);
  }
  if (xs.size() >= 2) out.exponent = loglog_slope(xs, ys);
  for (auto& r : out.reports) r.scaling_exponent = out.exponent;
  return out;
}

CatVerdict cat_check(double dispersion_X, double Y, int N, double D_diff, double P, double T) {
  if (!(P > 0) || !(T > 0) || dispersion_X < 0 || D_diff < 0 || N < 1)
    throw ValidationError("cat_check: inputs must be positive");
  CatVerdict v;
  v.cat_free = std::sqrt(dispersion_X) < P;
  v.visible_motion = std::sqrt(D_diff * T) > P;
  v.joint = v.cat_free && v.visible_motion;
  if (Y > 0) {
    v.f_est = dispersion_X / (Y * Y * double(N) * N);
    v.g_est = D_diff * T / (Y * Y);
    v.n2f_below_g = double(N) * N * v.f_est < v.g_est;
  }
  return v;
}

}  // namespace qw
