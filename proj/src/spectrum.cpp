#include "qw/spectrum.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace qw {

HiPrec ExactElement::value() const {
  HiPrec v = to_hiprec(coeff);
  if (root == 1 && coeff != 0) v *= sqrt(hp_pi() * to_hiprec(w));
  return v;
}

double ExactElement::to_double() const { return static_cast<double>(value()); }

std::string ExactElement::to_string() const {
  std::string c = qw::to_string(coeff);
  if (root == 0 || coeff == 0) return c;
  return c + (w == 1 ? "*sqrt(pi)" : "*sqrt(pi*" + qw::to_string(w) + ")");
}

ExactElement& ExactElement::operator+=(const ExactElement& o) {
  if (o.coeff == 0) return *this;
  if (coeff == 0) {
    *this = o;
    return *this;
  }
  if (root != o.root || (root == 1 && w != o.w))
    throw InternalConsistencyError("adding Gaussian integrals of different surd classes");
  coeff += o.coeff;
  return *this;
}

namespace {
// (1/2) w^(-a) Gamma(a) for a > 0 integer or half-odd.
ExactElement half_gamma_moment(const Rational& a, const Rational& w) {
  GammaValue g = gamma_exact(a);
  ExactElement e;
  e.w = w;
  if (is_integer(a)) {
    e.coeff = Rational(1, 2) * power(w, -to_long(a)) * g.rational_part;
    e.root = 0;
  } else {
    // w^(-a) = w^(-(a + 1/2)) sqrt(w)
    e.coeff = Rational(1, 2) * power(w, -to_long(a + Rational(1, 2))) * g.rational_part;
    e.root = 1;
  }
  return e;
}
}  // namespace

GaussianMoments::GaussianMoments(const Rational& s, const Rational& w) : s_(s), w_(w) {
  if (w <= 0) throw DomainError("moments: w must be positive");
  if (!is_integer(2 * s) || 2 * s <= -1) throw DomainError("moments: 2s must be an integer");
}

const ExactElement& GaussianMoments::operator()(long j) {
  if (j < -1) throw DomainError("moments: exponent shift below -1 is not integrable here");
  auto& table = (j % 2 == 0) ? even_ : odd_;
  size_t idx = static_cast<size_t>((j % 2 == 0) ? j / 2 : (j + 1) / 2);
  while (table.size() <= idx) {
    long jj = (j % 2 == 0) ? 2 * static_cast<long>(table.size())
                           : 2 * static_cast<long>(table.size()) - 1;
    Rational a = (2 * s_ + jj + 1) / 2;
    if (a <= 0) throw DomainError("moments: integral diverges at the origin");
    if (table.empty()) {
      table.push_back(half_gamma_moment(a, w_));
    } else {
      ExactElement next = table.back();
      next.coeff *= (2 * s_ + (jj - 2) + 1) / (2 * w_);
      table.push_back(std::move(next));
    }
  }
  return table[idx];
}

MomentTable moments(const Rational& s_eff, const Rational& w, long k_max) {
  if (!is_integer(2 * s_eff) || s_eff < Rational(1, 2))
    throw DomainError("moments: s_eff must be an integer or half-integer >= 1/2");
  if (w <= 0) throw DomainError("moments: w must be positive");
  if (k_max < 0) throw DomainError("moments: k_max must be nonnegative");
  MomentTable t;
  t.s_eff = s_eff;
  t.w = w;
  t.sigma.reserve(static_cast<size_t>(k_max) + 1);
  t.sigma.emplace_back(1);
  Rational inv2w = 1 / (2 * w);
  for (long k = 1; k <= k_max; ++k) t.sigma.push_back(t.sigma.back() * inv2w * (1 + 2 * s_eff + 2 * (k - 1)));
  t.gamma_mass = half_gamma_moment(s_eff + Rational(1, 2), w);
  return t;
}

Rational eigenvalue(long n, const ModelParams& params) {
  if (n < 0) throw DomainError("eigenvalue: n must be nonnegative");
  return 4 * params.w * n + params.w * (1 + 2 * params.s);
}

OneVarState eigenstate(long n, const ModelParams& params) {
  if (n < 0) throw DomainError("eigenstate: n must be nonnegative");
  OneVarState st;
  st.n = n;
  st.s = params.s;
  st.w = params.w;
  st.mu = eigenvalue(n, params);
  st.a.assign(static_cast<size_t>(n) + 1, Rational(0));
  st.poly.assign(static_cast<size_t>(n) + 1, Rational(0));
  if (n == 0) {
    st.poly[0] = 1;
    return st;
  }
  const Rational& s = params.s;
  const Rational& w = params.w;
  st.a[1] = 1;
  for (long k = 1; k < n; ++k)
    st.a[k + 1] = st.a[k] * (2 * w * (k - n)) / ((k + 1) * (1 + 2 * s + 2 * k));
  MomentTable m = moments(s, w, n);
  Rational c0 = 0;
  for (long k = 1; k <= n; ++k) {
    st.poly[k] = st.a[k];
    c0 -= st.a[k] * m.sigma[k];
  }
  st.poly[0] = c0;
  if (first_row_residual(st) != 0)
    throw InternalConsistencyError("eigenstate " + std::to_string(n) +
                                   ": constant-term consistency equation fails");
  return st;
}

Rational first_row_residual(const OneVarState& st) {
  if (st.n == 0) return 0;
  MomentTable m = moments(st.s, st.w, st.n);
  Rational sum = 0;
  for (long k = 1; k <= st.n; ++k) sum += st.a[k] * m.sigma[k];
  return 2 * (1 + 2 * st.s) * st.a[1] - 4 * st.w * st.n * sum;
}

Integer binomial_identity_residual(long u) {
  Integer rhs = 0;
  for (long k = 2; k <= u; ++k) {
    Integer c = binomial(u, k);
    rhs += (k % 2 == 1) ? c : Integer(-c);
  }
  return Integer(1 - u) - rhs;
}

Integer alternating_binomial_sum(long u) {
  Integer sum = 0;
  for (long k = 0; k <= u; ++k) {
    Integer c = binomial(u, k);
    if (k % 2) sum -= c;
    else sum += c;
  }
  return sum;
}

HiPrec evaluate_poly(const OneVarState& st, const HiPrec& z) {
  HiPrec z2 = z * z, acc = 0;
  for (long k = st.n; k >= 0; --k) acc = acc * z2 + to_hiprec(st.poly[k]);
  return acc;
}

HiPrec evaluate_xi(const OneVarState& st, const HiPrec& z) {
  if (z <= 0) throw DomainError("evaluate_xi: z must be positive");
  return exp(-to_hiprec(st.w) * z * z / 2) * pow(z, to_hiprec(st.s)) * evaluate_poly(st, z);
}

std::vector<double> fd_eigenvalues(const ModelParams& params, int grid_points, double z_min,
                                   double z_max, int k_eigs) {
  if (params.w <= 0) throw ValidationError("fd oracle: w must be positive");
  if (grid_points < 200) throw ValidationError("fd oracle: need at least 200 grid points");
  if (!(z_min > 0) || !(z_max > z_min)) throw ValidationError("fd oracle: need 0 < z_min < z_max");
  if (k_eigs < 1 || k_eigs > grid_points) throw ValidationError("fd oracle: bad eigenvalue count");
  const double q = to_double(params.q), w = to_double(params.w);
  const double h = (z_max - z_min) / (grid_points + 1);
  Eigen::VectorXd diag(grid_points), sub(grid_points - 1);
  for (int i = 0; i < grid_points; ++i) {
    double z = z_min + (i + 1) * h;
    diag(i) = 2.0 / (h * h) + q / (z * z) + w * w * z * z;
  }
  sub.setConstant(-1.0 / (h * h));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw ConvergenceError("fd oracle: tridiagonal eigensolve failed");
  const auto& ev = solver.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + k_eigs);
}

std::vector<double> fd_oracle_spectrum(const ModelParams& params, int grid_points, double z_min,
                                       double z_max, int k_eigs, double tolerance) {
  auto fine = fd_eigenvalues(params, grid_points, z_min, z_max, k_eigs);
  auto coarse = fd_eigenvalues(params, std::max(200, grid_points / 2), z_min, z_max, k_eigs);
  for (int i = 0; i < k_eigs; ++i) {
    if (std::abs(fine[i] - coarse[i]) > tolerance * std::abs(fine[i]))
      throw ConvergenceError("fd oracle: eigenvalue " + std::to_string(i) +
                             " moved by more than the tolerance between refinements");
  }
  return fine;
}

}  // namespace qw
