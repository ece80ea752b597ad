#include "qw/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <regex>

namespace qw {

namespace {
std::atomic<unsigned> g_bits{0};

unsigned digits10_for_bits(unsigned bits) {
  return static_cast<unsigned>(std::floor((bits - 1) * 0.30102999566398120)) + 1;
}
}  // namespace

void set_precision_bits(unsigned bits) {
  if (bits < 64) throw DomainError("precision must be at least 64 bits");
  g_bits = bits;
  HiPrec::default_precision(digits10_for_bits(bits));
}

unsigned precision_bits() {
  if (g_bits == 0) set_precision_bits(256);
  return g_bits;
}

unsigned precision_bits_from_env(unsigned fallback) {
  const char* env = std::getenv("QW_PRECISION_BITS");
  if (!env || !*env) return fallback;
  char* end = nullptr;
  unsigned long v = std::strtoul(env, &end, 10);
  if (*end != '\0' || v < 64 || v > 1u << 20)
    throw ValidationError(std::string("QW_PRECISION_BITS: invalid value '") + env + "'");
  return static_cast<unsigned>(v);
}

Rational parse_rational(const std::string& text) {
  static const std::regex frac(R"(\s*([+-]?\d+)\s*/\s*(\d+)\s*)");
  static const std::regex dec(R"(\s*([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?\s*)");
  std::smatch m;
  if (std::regex_match(text, m, frac)) {
    Integer num(m[1].str(), 10), den(m[2].str(), 10);  // base 0 would read "010" as octal
    if (den == 0) throw ValidationError("zero denominator in '" + text + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  if (std::regex_match(text, m, dec) && (m[2].length() + m[3].length()) > 0) {
    std::string digits = m[2].str() + m[3].str();
    Integer num(digits, 10);
    long exp10 = -static_cast<long>(m[3].length());
    if (m[4].matched) exp10 += std::stol(m[4].str());
    if (m[1].str() == "-") num = -num;
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exp10)));
    Rational r = exp10 >= 0 ? Rational(num * scale) : make_rational(num, scale);
    r.canonicalize();
    return r;
  }
  throw ValidationError("not a rational number: '" + text + "'");
}

std::string to_string(const Rational& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

HiPrec to_hiprec(const Rational& x) {
  precision_bits();
  return HiPrec(x.get_mpq_t());
}

double to_double(const Rational& x) { return x.get_d(); }

HiPrec hp_pi() {
  precision_bits();
  return boost::math::constants::pi<HiPrec>();
}

bool is_integer(const Rational& x) { return x.get_den() == 1; }

bool is_half_odd(const Rational& x) { return x.get_den() == 2; }

long to_long(const Rational& x) {
  if (!is_integer(x) || !x.get_num().fits_slong_p())
    throw DomainError("expected a machine-size integer, got " + to_string(x));
  return x.get_num().get_si();
}

Integer factorial(unsigned long n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

Integer binomial(unsigned long n, unsigned long k) {
  if (k > n) return 0;
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

Rational power(const Rational& x, long k) {
  Integer num, den;
  unsigned long e = static_cast<unsigned long>(std::labs(k));
  mpz_pow_ui(num.get_mpz_t(), x.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), x.get_den_mpz_t(), e);
  if (k >= 0) return make_rational(num, den);
  if (num == 0) throw DomainError("zero to a negative power");
  Rational r(den, num);
  r.canonicalize();
  return r;
}

HiPrec GammaValue::value() const {
  HiPrec v = to_hiprec(rational_part);
  if (sqrtpi_power == 1) v *= sqrt(hp_pi());
  return v;
}

GammaValue gamma_exact(const Rational& x_in) {
  Rational x = x_in;
  x.canonicalize();
  Rational twice = 2 * x;
  if (x <= 0 || !is_integer(twice))
    throw DomainError("gamma_exact: argument must be a positive integer or half-odd-integer, got " +
                      to_string(x));
  GammaValue g;
  g.argument = x;
  if (is_integer(x)) {
    g.rational_part = factorial(to_long(x) - 1);
    g.sqrtpi_power = 0;
  } else {
    // Gamma(k + 1/2) = (2k)! / (4^k k!) sqrt(pi)
    long k = to_long(x - Rational(1, 2));
    Integer four_k;
    mpz_ui_pow_ui(four_k.get_mpz_t(), 4, static_cast<unsigned long>(k));
    g.rational_part = make_rational(factorial(2 * k), four_k * factorial(k));
    g.rational_part.canonicalize();
    g.sqrtpi_power = 1;
  }
  return g;
}

std::string to_string(Base b) { return b == Base::two ? "2" : "e"; }

Base parse_base(const std::string& text) {
  if (text == "2" || text == "two") return Base::two;
  if (text == "e") return Base::e;
  throw ValidationError("base must be '2' or 'e', got '" + text + "'");
}

HiPrec base_value(Base b) {
  precision_bits();
  return b == Base::two ? HiPrec(2) : HiPrec(exp(HiPrec(1)));
}

namespace {
void check_duplication_arg(const Rational& s) {
  if (s <= 0 || !is_integer(2 * s))
    throw DomainError("duplication check: s must be a positive integer or half-odd-integer");
}
}  // namespace

HiPrec legendre_duplication_check(const Rational& s, Base base) {
  check_duplication_arg(s);
  if (base == Base::two) return to_hiprec(legendre_duplication_residual_exact(s)) * sqrt(hp_pi());
  HiPrec lhs = gamma_exact(s).value() * gamma_exact(s + Rational(1, 2)).value();
  HiPrec rhs = pow(base_value(base), to_hiprec(1 - 2 * s)) * sqrt(hp_pi()) *
               gamma_exact(2 * s).value();
  return lhs - rhs;
}

Rational legendre_duplication_residual_exact(const Rational& s) {
  check_duplication_arg(s);
  GammaValue a = gamma_exact(s), b = gamma_exact(s + Rational(1, 2)), c = gamma_exact(2 * s);
  // Exactly one of s, s + 1/2 is half-odd, so the left side is (rational) sqrt(pi).
  if (a.sqrtpi_power + b.sqrtpi_power != 1 || c.sqrtpi_power != 0)
    throw InternalConsistencyError("duplication check: unexpected sqrt(pi) powers");
  long e = to_long(2 * s) - 1;
  return a.rational_part * b.rational_part - power(Rational(2), -e) * c.rational_part;
}

HiPrec halfline_weighted_quadrature(const std::function<HiPrec(const HiPrec&)>& f,
                                    const Rational& s, const Rational& w, int target_reldigits,
                                    int degree_hint) {
  if (w <= 0) throw DomainError("halfline quadrature: w must be positive");
  if (target_reldigits < 1) throw DomainError("halfline quadrature: target digits must be >= 1");
  precision_bits();
  const double wd = to_double(w);
  const double p = 2 * to_double(s) + std::max(degree_hint, 0);
  const double log_target = -(target_reldigits + 5) * std::log(10.0);
  double zmax = std::max(1.0, std::sqrt(std::max(p, 1.0) / (2 * wd)));
  while (-wd * zmax * zmax + p * std::log(zmax) > log_target) zmax *= 1.05;

  const auto& rule = gauss_legendre<HiPrec>(24);
  const HiPrec whp = to_hiprec(w);
  const HiPrec two_s = to_hiprec(2 * s);
  const HiPrec tol = pow(HiPrec(10), -target_reldigits);
  auto integrate = [&](int panels, HiPrec& l1) {
    HiPrec total = 0;
    l1 = 0;
    HiPrec h = HiPrec(zmax) / panels;
    for (int pnl = 0; pnl < panels; ++pnl) {
      HiPrec mid = h * (pnl + HiPrec(0.5));
      for (size_t i = 0; i < rule.x.size(); ++i) {
        HiPrec z = mid + h / 2 * rule.x[i];
        HiPrec v = exp(-whp * z * z) * pow(z, two_s) * f(z) * rule.w[i] * h / 2;
        total += v;
        l1 += abs(v);
      }
    }
    return total;
  };
  HiPrec l1;
  int panels = 4;
  HiPrec prev = integrate(panels, l1);
  for (; panels <= (1 << 14); panels *= 2) {
    HiPrec next = integrate(2 * panels, l1);
    if (abs(next - prev) <= tol * l1) return next;
    prev = next;
  }
  throw ConvergenceError("halfline quadrature: refinement stalled before tolerance");
}

HiPrec circle_mean(const std::function<HiPrec(const HiPrec&)>& g, int M, const HiPrec& tol) {
  return circle_mean<HiPrec>(g, M, tol);
}

}  // namespace qw
