#pragma once

#include <gmpxx.h>

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qw/errors.hpp"

namespace qw {

using Integer = mpz_class;
using Rational = mpq_class;
using HiPrec = boost::multiprecision::mpfr_float;

// Working precision of HiPrec values created after the call.
void set_precision_bits(unsigned bits);
unsigned precision_bits();
// QW_PRECISION_BITS if set and valid, otherwise `fallback`.
unsigned precision_bits_from_env(unsigned fallback = 256);

// Accepts "p/q", integers and decimal/scientific literals ("0.25", "1e-5").
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& x);
HiPrec to_hiprec(const Rational& x);
double to_double(const Rational& x);
HiPrec hp_pi();

bool is_integer(const Rational& x);
bool is_half_odd(const Rational& x);
long to_long(const Rational& x);  // x must be an integer that fits
Integer factorial(unsigned long n);
Integer binomial(unsigned long n, unsigned long k);
Rational power(const Rational& x, long k);
// n/d in lowest terms (the two-argument mpq_class constructor does not reduce).
inline Rational make_rational(const Integer& n, const Integer& d) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

template <class T>
struct Complex {
  T re{0};
  T im{0};

  Complex() = default;
  Complex(T r) : re(std::move(r)) {}
  Complex(T r, T i) : re(std::move(r)), im(std::move(i)) {}

  static Complex cis(const T& theta) {
    using std::cos;
    using std::sin;
    return {T(cos(theta)), T(sin(theta))};
  }

  Complex conj() const { return {re, T(-im)}; }
  T norm() const { return T(re * re + im * im); }
  T abs() const {
    using std::sqrt;
    return T(sqrt(norm()));
  }

  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Complex& operator*=(const Complex& o) {
    T r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  Complex& operator*=(const T& a) {
    re *= a;
    im *= a;
    return *this;
  }
  Complex& operator/=(const T& a) {
    re /= a;
    im /= a;
    return *this;
  }
  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
  friend Complex operator*(Complex a, const T& b) { return a *= b; }
  friend Complex operator*(const T& b, Complex a) { return a *= b; }
  friend Complex operator/(Complex a, const T& b) { return a /= b; }
};

template <class T>
Complex<T> ipow(Complex<T> base, unsigned long e) {
  Complex<T> result(T(1), T(0));
  while (e) {
    if (e & 1u) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

template <class T>
T magnitude(const T& x) {
  using std::abs;
  return T(abs(x));
}
template <class T>
T magnitude(const Complex<T>& z) {
  return z.abs();
}

// Exact value rational_part * sqrt(pi)^sqrtpi_power of Gamma at an integer
// or half-odd-integer argument.
struct GammaValue {
  Rational argument;
  Rational rational_part;
  int sqrtpi_power = 0;

  HiPrec value() const;
};

GammaValue gamma_exact(const Rational& x);

enum class Base { two, e };
std::string to_string(Base b);
Base parse_base(const std::string& text);
HiPrec base_value(Base b);

// Gamma(s)Gamma(s+1/2) - base^(1-2s) sqrt(pi) Gamma(2s).
HiPrec legendre_duplication_check(const Rational& s, Base base);
// Base-2 residual divided by sqrt(pi), computed in exact arithmetic.
Rational legendre_duplication_residual_exact(const Rational& s);

template <class T>
struct GaussRule {
  std::vector<T> x;  // nodes on [-1, 1]
  std::vector<T> w;
};

template <class T>
GaussRule<T> compute_gauss_legendre(int n) {
  using std::abs;
  using std::cos;
  GaussRule<T> rule;
  rule.x.resize(n);
  rule.w.resize(n);
  const T eps = std::numeric_limits<T>::epsilon();
  const double pi_d = 3.14159265358979323846;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    T x = T(std::cos(pi_d * (i + 0.75) / (n + 0.5)));
    T dp = 0;
    for (int it = 0; it < 200; ++it) {
      T p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        T p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = std::move(p1);
        p1 = std::move(p2);
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      T dx = p1 / dp;
      x -= dx;
      if (abs(dx) <= 4 * eps) break;
    }
    T p0 = 1, p1 = x;
    for (int k = 2; k <= n; ++k) {
      T p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = std::move(p1);
      p1 = std::move(p2);
    }
    dp = n * (x * p1 - p0) / (x * x - 1);
    T wt = 2 / ((1 - x * x) * dp * dp);
    rule.x[i] = -x;
    rule.x[n - 1 - i] = x;
    rule.w[i] = wt;
    rule.w[n - 1 - i] = wt;
  }
  if (n % 2 == 1) rule.x[n / 2] = 0;
  return rule;
}

// Cached per (n, precision) so HiPrec rules follow precision changes.
template <class T>
const GaussRule<T>& gauss_legendre(int n) {
  thread_local std::map<std::pair<int, unsigned>, GaussRule<T>> cache;
  unsigned key_prec = 0;
  if constexpr (std::is_same_v<T, HiPrec>) key_prec = precision_bits();
  auto key = std::make_pair(n, key_prec);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, compute_gauss_legendre<T>(n)).first;
  return it->second;
}

// Integral of exp(-w z^2) z^(2s) f(z) over (0, inf). Composite Gauss-Legendre
// on (0, z_max) with panel doubling; the stopping test is relative to the
// integral of |integrand| so that cancelling integrands still terminate.
HiPrec halfline_weighted_quadrature(const std::function<HiPrec(const HiPrec&)>& f,
                                    const Rational& s, const Rational& w, int target_reldigits,
                                    int degree_hint = 0);

// Mean of a 2pi-periodic g over a uniform grid, doubling M (reusing old nodes)
// until two successive means agree to tol * max(1, |mean|).
template <class T, class G>
auto circle_mean(G&& g, int M, const T& tol, int max_M = 1 << 20, int* used_M = nullptr) {
  using R = decltype(g(T()));
  if (M < 8) throw DomainError("circle_mean: grid size must be at least 8");
  const T two_pi = 2 * boost::math::constants::pi<T>();
  R sum = R(T(0));
  for (int j = 0; j < M; ++j) sum += g(T(two_pi * j / M));
  R mean = sum / T(M);
  while (M < max_M) {
    int M2 = 2 * M;
    for (int j = 1; j < M2; j += 2) sum += g(T(two_pi * j / M2));
    R next = sum / T(M2);
    T diff = magnitude(R(next - mean));
    T scale = magnitude(next);
    if (scale < 1) scale = 1;
    mean = next;
    M = M2;
    if (diff <= tol * scale) {
      if (used_M) *used_M = M;
      return mean;
    }
  }
  throw ConvergenceError("circle_mean: no agreement up to M=" + std::to_string(max_M));
}

HiPrec circle_mean(const std::function<HiPrec(const HiPrec&)>& g, int M, const HiPrec& tol);

}  // namespace qw
