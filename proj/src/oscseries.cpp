#include "qw/oscseries.hpp"

#include <algorithm>
#include <cmath>

namespace qw {

std::string to_string(SeriesKind k) {
  switch (k) {
    case SeriesKind::S1: return "s1";
    case SeriesKind::S2: return "s2";
    case SeriesKind::S3: return "s3";
  }
  return "?";
}

SeriesKind parse_series_kind(const std::string& text) {
  if (text == "s1" || text == "S1") return SeriesKind::S1;
  if (text == "s2" || text == "S2") return SeriesKind::S2;
  if (text == "s3" || text == "S3") return SeriesKind::S3;
  throw ValidationError("series must be one of s1, s2, s3; got '" + text + "'");
}

namespace {

long half_odd_to_t(const Rational& s) {
  if (!is_half_odd(s) || s < Rational(3, 2))
    throw DomainError("series: s must be a half-odd-integer >= 3/2");
  return to_long(s - Rational(1, 2));
}

HiPrec ipow(HiPrec x, unsigned long e) {
  HiPrec r = 1;
  while (e) {
    if (e & 1u) r *= x;
    e >>= 1;
    if (e) x *= x;
  }
  return r;
}

// sum_k weight(k) (-1)^k C(u,k) C(2t+2k, t+k) base^(-2k); (2s+2k-1)!/(s+k-1/2)!^2
// is the central binomial coefficient C(2t+2k, t+k).
template <class Weight>
SeriesValue s12_direct(long u, const Rational& s, Base base, Weight weight) {
  if (u < 0) throw DomainError("series: u must be nonnegative");
  long t = half_odd_to_t(s);
  SeriesValue out;
  out.base = base;
  if (base == Base::two) {
    // Scale by 4^u to stay in the integers.
    Integer acc = 0;
    for (long k = 0; k <= u; ++k) {
      Integer term = binomial(u, k) * binomial(2 * t + 2 * k, t + k) * weight(k);
      Integer scale;
      mpz_ui_pow_ui(scale.get_mpz_t(), 4, static_cast<unsigned long>(u - k));
      term *= scale;
      if (k % 2) acc -= term;
      else acc += term;
    }
    Integer four_u;
    mpz_ui_pow_ui(four_u.get_mpz_t(), 4, static_cast<unsigned long>(u));
    out.exact = make_rational(acc, four_u);
    out.exact.canonicalize();
    out.value = to_hiprec(out.exact);
  } else {
    HiPrec e2 = exp(HiPrec(-2)), f = 1, acc = 0;
    for (long k = 0; k <= u; ++k) {
      Integer term = binomial(u, k) * binomial(2 * t + 2 * k, t + k) * weight(k);
      HiPrec v = HiPrec(term.get_mpz_t()) * f;
      if (k % 2) acc -= v;
      else acc += v;
      f *= e2;
    }
    out.value = acc;
  }
  return out;
}

void check_imaginary(const Complex<HiPrec>& z, const HiPrec& tol, const char* what) {
  HiPrec scale = abs(z.re) < 1 ? HiPrec(1) : HiPrec(abs(z.re));
  if (abs(z.im) > tol * scale)
    throw ImaginaryResidueError(std::string(what) + ": imaginary residue " +
                                HiPrec(abs(z.im)).str(6, std::ios_base::scientific) +
                                " exceeds tolerance");
}

}  // namespace

SeriesValue s1_direct(long u, const Rational& s, Base base) {
  return s12_direct(u, s, base, [](long) { return Integer(1); });
}

SeriesValue s2_direct(long u, const Rational& s, Base base) {
  return s12_direct(u, s, base, [](long k) { return Integer(k); });
}

Rational s3_direct(long u, long t) {
  if (u < 0 || t < 1) throw DomainError("s3: need u >= 0 and t >= 1");
  // Scale every term by ((t+u)!)^2 so the sum is an integer.
  Integer F = factorial(t + u);
  std::vector<Integer> A(u + 1);
  for (long j = 0; j <= u; ++j) {
    A[j] = binomial(u, j) * (F / factorial(t + j));
    if (j % 2) A[j] = -A[j];
  }
  Integer acc = 0, fact = factorial(t);
  for (long n = 0; n <= 2 * u; ++n) {
    if (n > 0) fact *= (t + n);  // (t+n)!
    Integer conv = 0;
    for (long j = std::max(0L, n - u); j <= std::min(n, u); ++j) conv += A[j] * A[n - j];
    acc += conv * fact;
  }
  Rational r(acc, F * F);
  r.canonicalize();
  return r;
}

HiPrec s1_integral(long u, const Rational& s, Base base, const HiPrec& tol) {
  if (u < 0) throw DomainError("series: u must be nonnegative");
  long t = half_odd_to_t(s);
  using C = Complex<HiPrec>;
  const HiPrec b2 = base_value(base) * base_value(base);
  auto g = [&](const HiPrec& th) {
    C x = C::cis(th);
    C one_xb = C(HiPrec(1)) + x.conj();
    C bracket = C(HiPrec(1)) - one_xb * one_xb * x / b2;
    return C::cis(HiPrec(t * th)) * ipow(one_xb, 2 * t) * ipow(bracket, u);
  };
  C mean = circle_mean<HiPrec>(g, 64, tol);
  check_imaginary(mean, tol, "s1_integral");
  return mean.re;
}

HiPrec s2_integral(long u, const Rational& s, Base base, const HiPrec& tol) {
  if (u < 0) throw DomainError("series: u must be nonnegative");
  long t = half_odd_to_t(s);
  if (u == 0) return 0;
  using C = Complex<HiPrec>;
  const HiPrec b2 = base_value(base) * base_value(base);
  auto g = [&](const HiPrec& th) {
    C x = C::cis(th);
    C one_xb = C(HiPrec(1)) + x.conj();
    C bracket = C(HiPrec(1)) - one_xb * one_xb * x / b2;
    // phase exponent s + 1/2 = t + 1
    return C::cis(HiPrec((t + 1) * th)) * ipow(one_xb, 2 * t + 2) * ipow(bracket, u - 1);
  };
  C mean = circle_mean<HiPrec>(g, 64, tol);
  check_imaginary(mean, tol, "s2_integral");
  return HiPrec(-HiPrec(u) / b2 * mean.re);
}

namespace {

struct TensorRule {
  std::vector<HiPrec> V;       // product of (1 + v_i)
  std::vector<HiPrec> weight;  // Gauss weight * prod (1+v_i)^(n-i) * extra
};

// Tensor Gauss-Legendre rule on [-1,0]^n carrying the iterated-integral
// weights [v_1+1]^(n-1) ... [v_(n-1)+1] and, if vpow > 0, a factor V^vpow.
TensorRule iterated_rule(int n, int nodes, int vpow) {
  const auto& gl = gauss_legendre<HiPrec>(nodes);
  std::vector<HiPrec> x(nodes), w(nodes);
  for (int i = 0; i < nodes; ++i) {
    x[i] = (gl.x[i] - 1) / 2;
    w[i] = gl.w[i] / 2;
  }
  TensorRule rule;
  size_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<size_t>(nodes);
  rule.V.reserve(total);
  rule.weight.reserve(total);
  std::vector<int> idx(n, 0);
  for (size_t c = 0; c < total; ++c) {
    HiPrec V = 1, wt = 1;
    for (int i = 0; i < n; ++i) {
      HiPrec one_v = 1 + x[idx[i]];
      V *= one_v;
      wt *= w[idx[i]] * ipow(one_v, static_cast<unsigned long>(n - 1 - i));
    }
    if (vpow > 0) wt *= ipow(V, static_cast<unsigned long>(vpow));
    rule.V.push_back(std::move(V));
    rule.weight.push_back(std::move(wt));
    for (int i = n - 1; i >= 0; --i) {
      if (++idx[i] < nodes) break;
      idx[i] = 0;
    }
  }
  return rule;
}

HiPrec s3_integral_fixed(long u, long t, const HiPrec& tol, int nodes) {
  TensorRule rule = iterated_rule(static_cast<int>(t), nodes, static_cast<int>(t));
  // e^{itθ}(1+e^{-iθ})^{2t} = (2+2cosθ)^t and the two conjugate brackets
  // multiply to |1 - V(1+e^{iθ})|^2, so the integrand is real.
  auto g = [&](const HiPrec& th) {
    HiPrec c = cos(th), sn = sin(th);
    HiPrec sum = 0;
    for (size_t i = 0; i < rule.V.size(); ++i) {
      const HiPrec& V = rule.V[i];
      HiPrec re = 1 - V - V * c;
      HiPrec im = V * sn;
      sum += rule.weight[i] * ipow(HiPrec(re * re + im * im), static_cast<unsigned long>(u));
    }
    return HiPrec(ipow(HiPrec(2 + 2 * c), static_cast<unsigned long>(t)) * sum);
  };
  return circle_mean<HiPrec>(g, 16, tol);
}

}  // namespace

HiPrec s3_integral(long u, long t, const HiPrec& tol, int nodes_per_axis) {
  if (u < 0 || t < 1) throw DomainError("s3: need u >= 0 and t >= 1");
  // Degree in v_1 is (t-1) + t + 2u; Gauss with deg/2 + 1 nodes is exact.
  long exact_nodes = (2 * t - 1 + 2 * u) / 2 + 1;
  int cap = t == 1 ? 512 : (t == 2 ? 96 : 32);
  int nodes = nodes_per_axis > 0 ? nodes_per_axis : static_cast<int>(std::min<long>(exact_nodes, cap));
  HiPrec value = s3_integral_fixed(u, t, tol, nodes);
  if (nodes < exact_nodes) {
    HiPrec coarse = s3_integral_fixed(u, t, tol, nodes * 3 / 4);
    HiPrec scale = abs(value) < 1 ? HiPrec(1) : HiPrec(abs(value));
    if (abs(value - coarse) > HiPrec(1e-10) * scale)
      throw ConvergenceError("s3_integral: tensor rule not converged at " +
                             std::to_string(nodes) + " nodes per axis");
  }
  return value;
}

SeriesResult evaluate_series(SeriesKind which, long u, const Rational& s_or_t, Base base,
                             const HiPrec& tol) {
  SeriesResult r;
  r.which = which;
  r.u = u;
  r.s_or_t = s_or_t;
  r.base = base;
  switch (which) {
    case SeriesKind::S1:
      r.direct = s1_direct(u, s_or_t, base);
      r.integral = s1_integral(u, s_or_t, base, tol);
      break;
    case SeriesKind::S2:
      r.direct = s2_direct(u, s_or_t, base);
      r.integral = s2_integral(u, s_or_t, base, tol);
      break;
    case SeriesKind::S3: {
      if (base != Base::two) throw ValidationError("s3 has no base parameter");
      long t = to_long(s_or_t);
      r.direct.exact = s3_direct(u, t);
      r.direct.value = to_hiprec(r.direct.exact);
      r.integral = s3_integral(u, t, tol);
      break;
    }
  }
  r.abs_diff = abs(r.direct.value - r.integral);
  return r;
}

namespace {
HiPrec nested_quadrature(int level, const std::function<HiPrec(const HiPrec&)>& g,
                         const HiPrec& upper, const GaussRule<HiPrec>& gl) {
  if (level == 0) return g(upper);
  HiPrec half = (upper + 1) / 2, sum = 0;
  for (size_t i = 0; i < gl.x.size(); ++i) {
    HiPrec y = -1 + half * (gl.x[i] + 1);
    sum += gl.w[i] * nested_quadrature(level - 1, g, y, gl);
  }
  return half * sum;
}

HiPrec transformed_quadrature(int n, const std::function<HiPrec(const HiPrec&)>& g, const HiPrec& z,
                              int nodes) {
  TensorRule rule = iterated_rule(n, nodes, 0);
  HiPrec zp1 = z + 1, sum = 0;
  for (size_t i = 0; i < rule.V.size(); ++i) sum += rule.weight[i] * g(HiPrec(rule.V[i] * zp1 - 1));
  return ipow(zp1, static_cast<unsigned long>(n)) * sum;
}
}  // namespace

IteratedIntegral iterated_integral_check(int n, const std::function<HiPrec(const HiPrec&)>& g,
                                         const HiPrec& z, const HiPrec& tol) {
  if (n < 1 || n > 4) throw DomainError("iterated integral: n must be in 1..4");
  if (z < -1) throw DomainError("iterated integral: z must be >= -1");
  const auto& coarse = gauss_legendre<HiPrec>(16);
  const auto& fine = gauss_legendre<HiPrec>(24);
  IteratedIntegral out;
  HiPrec lhs_c = nested_quadrature(n, g, z, coarse);
  out.lhs = nested_quadrature(n, g, z, fine);
  HiPrec rhs_c = transformed_quadrature(n, g, z, 16);
  out.rhs = transformed_quadrature(n, g, z, 24);
  auto scale = [](const HiPrec& v) { return abs(v) < 1 ? HiPrec(1) : HiPrec(abs(v)); };
  if (abs(out.lhs - lhs_c) > tol * scale(out.lhs) || abs(out.rhs - rhs_c) > tol * scale(out.rhs))
    throw ConvergenceError("iterated integral: quadrature not converged");
  return out;
}

Rational product_identity_residual_exact(long k, const Rational& s) {
  if (k < 1) throw DomainError("product identity: k must be >= 1");
  long t = half_odd_to_t(s);  // s + 1/2 = t + 1
  Rational lhs = 1;
  for (long j = 1; j <= k - 1; ++j) lhs *= (1 + s + j) / (Rational(1, 2) + s + j);
  Rational C = 4 * make_rational(factorial(t + 1) * factorial(t + 1), factorial(2 * t + 3));
  Rational rhs = C * power(Rational(4), -k) *
                 make_rational(factorial(2 * t + 1 + 2 * k), factorial(t + k) * factorial(t + k));
  return lhs - rhs;
}

HiPrec product_identity_check(long k, const Rational& s, Base base) {
  if (base == Base::two) return to_hiprec(product_identity_residual_exact(k, s));
  if (k < 1) throw DomainError("product identity: k must be >= 1");
  long t = half_odd_to_t(s);
  Rational lhs = 1;
  for (long j = 1; j <= k - 1; ++j) lhs *= (1 + s + j) / (Rational(1, 2) + s + j);
  Rational ratio = make_rational(factorial(t + 1) * factorial(t + 1), factorial(2 * t + 3)) *
                   make_rational(factorial(2 * t + 1 + 2 * k), factorial(t + k) * factorial(t + k));
  HiPrec b = base_value(base);
  return to_hiprec(lhs) - to_hiprec(ratio) * pow(b, HiPrec(2 - 2 * k));
}

CriticalPoint critical_point_check(long u, const Rational& s, Base base, int grid) {
  long t = half_odd_to_t(s);
  double b = static_cast<double>(base_value(base));
  double D = b * b * t / 2.0;
  double c_star = D / (t + u);
  if (c_star >= 2) throw DomainError("critical point: u too small for an interior maximum");
  CriticalPoint cp;
  cp.theta_formula = std::acos(c_star - 1);
  cp.grid_step = M_PI / grid;
  double best = -INFINITY;
  for (int i = 1; i < grid; ++i) {
    double th = i * cp.grid_step;
    double c = 1 + std::cos(th);
    double br = std::abs(1 - 2 * c / (b * b));
    double logI = t * std::log(2 * c) + u * std::log(br);
    if (logI > best) {
      best = logI;
      cp.theta_grid = th;
    }
  }
  return cp;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("loglog_slope: need matching points");
  double n = static_cast<double>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    double lx = std::log(x[i]), ly = std::log(std::abs(y[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace qw
