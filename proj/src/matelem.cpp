#include "qw/matelem.hpp"

#include "qw/oscseries.hpp"

namespace qw {

std::string to_string(Kernel k) {
  switch (k) {
    case Kernel::identity: return "identity";
    case Kernel::z: return "z";
    case Kernel::z2: return "z2";
    case Kernel::z_inverse: return "z_inverse";
    case Kernel::d_dz: return "d_dz";
  }
  return "?";
}

Kernel parse_kernel(const std::string& text) {
  if (text == "identity") return Kernel::identity;
  if (text == "z") return Kernel::z;
  if (text == "z2") return Kernel::z2;
  if (text == "z_inverse") return Kernel::z_inverse;
  if (text == "d_dz") return Kernel::d_dz;
  throw ValidationError("unknown kernel '" + text + "' (identity, z, z2, z_inverse, d_dz)");
}

HiPrec NormalizedElement::value() const {
  if (sign == 0) return HiPrec(0);
  HiPrec v = to_hiprec(square);
  if (pi_power == 1) v *= hp_pi();
  return sign * sqrt(v);
}

std::string NormalizedElement::to_string() const {
  if (sign == 0) return "0";
  std::string inner = qw::to_string(square) + (pi_power ? "*pi" : "");
  return std::string(sign < 0 ? "-" : "") + "sqrt(" + inner + ")";
}

ElementEngine::ElementEngine(const ModelParams& params) : params_(params), mom_(params.s, params.w) {
  validate(params_);
}

const OneVarState& ElementEngine::state(long n) {
  if (n < 0) throw DomainError("state index must be nonnegative");
  if (states_.size() <= static_cast<size_t>(n)) states_.resize(n + 1);
  if (!states_[n]) states_[n] = std::make_unique<OneVarState>(eigenstate(n, params_));
  return *states_[n];
}

const std::vector<Rational>& ElementEngine::row(long u, int e, long len) {
  auto& r = rows_[{u, e}];
  if (static_cast<long>(r.size()) >= len) return r;
  const auto& c = state(u).poly;
  for (long m = static_cast<long>(r.size()); m < len; ++m) {
    Rational acc = 0;
    for (long k = 0; k <= u; ++k) {
      if (c[k] == 0) continue;
      acc += c[k] * mom_(2 * k + 2 * m + e).coeff;
    }
    r.push_back(std::move(acc));
  }
  return r;
}

ExactElement ElementEngine::raw(Kernel k, long u, long v) {
  if (u < 0 || v < 0) throw DomainError("matrix element indices must be nonnegative");
  if ((k == Kernel::z_inverse || k == Kernel::d_dz) && params_.s < Rational(3, 2))
    throw DomainError("z_inverse and d_dz kernels need s >= 3/2");
  const auto& cv = state(v).poly;
  ExactElement out;
  out.w = params_.w;
  if (k == Kernel::d_dz) {
    // d/dz (e^{-wz^2/2} z^s P_v) = e^{-wz^2/2} z^s [(-wz + s/z) P_v + P_v']
    // so the integrand against xi_u is gamma(z) P_u Q_v with odd Laurent
    // powers z^(2m-1), m = 0..v+1.
    std::vector<Rational> q(v + 2, Rational(0));
    for (long m = 0; m <= v + 1; ++m) {
      if (m <= v) q[m] += (params_.s + 2 * m) * cv[m];
      if (m >= 1) q[m] -= params_.w * cv[m - 1];
    }
    const auto& R = row(u, -1, v + 2);
    for (long m = 0; m <= v + 1; ++m) out.coeff += q[m] * R[m];
    out.root = 1;
    return out;
  }
  int e = 0;
  switch (k) {
    case Kernel::identity: e = 0; break;
    case Kernel::z: e = 1; break;
    case Kernel::z2: e = 2; break;
    case Kernel::z_inverse: e = -1; break;
    default: break;
  }
  const auto& R = row(u, e, v + 1);
  for (long l = 0; l <= v; ++l) out.coeff += cv[l] * R[l];
  out.root = (e % 2 != 0) ? 1 : 0;
  return out;
}

Rational ElementEngine::norm_squared(long u) {
  auto it = norms_.find(u);
  if (it != norms_.end()) return it->second;
  // Orthogonality: <P_u, P_u> = a_2u <P_u, z^2u> under the weight.
  const auto& st = state(u);
  Rational acc = 0;
  for (long k = 0; k <= u; ++k) acc += st.poly[k] * mom_(2 * k + 2 * u).coeff;
  acc *= st.poly[u];
  norms_.emplace(u, acc);
  return acc;
}

NormalizedElement ElementEngine::normalized(Kernel k, long u, long v) {
  ExactElement r = raw(k, u, v);
  NormalizedElement n;
  n.sign = sgn(r.coeff);
  if (n.sign == 0) return n;
  n.square = r.coeff * r.coeff / (norm_squared(u) * norm_squared(v));
  if (r.root) n.square *= params_.w;
  n.pi_power = r.root;
  return n;
}

Rational inner_product(long u, long v, const ModelParams& params) {
  return ElementEngine(params).raw(Kernel::identity, u, v).coeff;
}

ExactElement z_matrix_element(long u, long v, const ModelParams& params) {
  return ElementEngine(params).raw(Kernel::z, u, v);
}

ExactElement z2_matrix_element(long u, long v, const ModelParams& params) {
  return ElementEngine(params).raw(Kernel::z2, u, v);
}

ExactElement z_inverse_matrix_element(long u, long v, const ModelParams& params) {
  return ElementEngine(params).raw(Kernel::z_inverse, u, v);
}

ExactElement ddz_matrix_element(long u, long v, const ModelParams& params) {
  return ElementEngine(params).raw(Kernel::d_dz, u, v);
}

Rational norm_squared(long u, const ModelParams& params) { return ElementEngine(params).norm_squared(u); }

namespace {
long t_of(const ModelParams& p) { return to_long(p.s - Rational(1, 2)); }
}  // namespace

Rational norm_squared_closed_form(long u, const ModelParams& params) {
  GaussianMoments mom(params.s, params.w);
  Rational mu0 = mom(0).coeff;
  if (u == 0) return mu0;
  long t = t_of(params);
  Rational f = (1 + 2 * params.s) / (2 * params.w * u);
  return mu0 * make_rational(factorial(t) * factorial(u), factorial(u + t)) * f * f;
}

namespace {
HiPrec element_integrand(Kernel k, const OneVarState& su, const OneVarState& sv, const HiPrec& z,
                         const HiPrec& w, const HiPrec& s) {
  HiPrec pu = evaluate_poly(su, z), pv = evaluate_poly(sv, z);
  switch (k) {
    case Kernel::identity: return pu * pv;
    case Kernel::z: return pu * pv * z;
    case Kernel::z2: return pu * pv * z * z;
    case Kernel::z_inverse: return pu * pv / z;
    case Kernel::d_dz: {
      HiPrec dp = 0, z2 = z * z;
      for (long m = sv.n; m >= 1; --m) dp = dp * z2 + 2 * m * to_hiprec(sv.poly[m]);
      dp *= z;  // P_v' = sum 2m c_m z^(2m-1)
      return pu * ((-w * z + s / z) * pv + dp);
    }
  }
  return 0;
}
}  // namespace

HiPrec quadrature_element(Kernel k, long u, long v, const ModelParams& params, int target_digits) {
  OneVarState su = eigenstate(u, params), sv = eigenstate(v, params);
  HiPrec w = to_hiprec(params.w), s = to_hiprec(params.s);
  auto f = [&](const HiPrec& z) { return element_integrand(k, su, sv, z, w, s); };
  return halfline_weighted_quadrature(f, params.s, params.w, target_digits,
                                      static_cast<int>(2 * (u + v) + 2));
}

MatrixElementReport matrix_element_report(Kernel k, long u, long v, const ModelParams& params,
                                          const std::string& method, int target_digits) {
  ElementEngine eng(params);
  MatrixElementReport r;
  r.u = u;
  r.v = v;
  r.kernel = k;
  r.method = method;
  HiPrec norms = sqrt(to_hiprec(eng.norm_squared(u) * eng.norm_squared(v)));
  if (method == "moment_algebra") {
    ExactElement e = eng.raw(k, u, v);
    r.raw = e.value();
    r.raw_exact = e.to_string();
  } else if (method == "quadrature") {
    r.raw = quadrature_element(k, u, v, params, target_digits);
  } else {
    throw ValidationError("method must be moment_algebra or quadrature");
  }
  r.normalized = r.raw / norms;
  return r;
}

std::vector<Theorem2Row> theorem2_sequence(const ModelParams& params, const std::vector<long>& u_list) {
  std::vector<Theorem2Row> rows;
  ElementEngine eng(params);
  GaussianMoments& mom = eng.moments();
  Rational n0 = eng.norm_squared(0);
  long prev = 0;
  for (long u : u_list) {
    if (u <= prev) throw ValidationError("theorem2_sequence: u_list must be increasing positive integers");
    prev = u;
    // <xi_u|z|xi_0> = sum_k c_u[k] mu(2k+1); norms by orthogonality.
    OneVarState st = eigenstate(u, params);
    Rational num = 0;
    for (long k = 0; k <= u; ++k) num += st.poly[k] * mom(2 * k + 1).coeff;
    Rational nu = 0;
    for (long k = 0; k <= u; ++k) nu += st.poly[k] * mom(2 * k + 2 * u).coeff;
    nu *= st.poly[u];
    NormalizedElement ne;
    ne.sign = sgn(num);
    ne.square = num * num * params.w / (nu * n0);
    ne.pi_power = 1;
    HiPrec v = ne.value();
    rows.push_back({u, v, HiPrec(v * u)});
  }
  return rows;
}

NormalizedElement ground_z_closed_form(long u, const ModelParams& params) {
  if (u < 1) throw DomainError("ground_z_closed_form: u must be >= 1");
  GaussianMoments mom(params.s, params.w);
  long t = t_of(params);
  // mu(1)/mu(0) = coeff * sqrt(pi w)
  Rational ratio = mom(1).coeff / mom(0).coeff;
  Rational poch = 1;
  for (long j = 0; j < u; ++j) poch *= (Rational(-1, 2) + j) / (params.s + Rational(1, 2) + j);
  Rational val = -ratio * poch;
  NormalizedElement n;
  n.sign = sgn(val);
  n.square = val * val * params.w * make_rational(factorial(u + t), factorial(t) * factorial(u));
  n.pi_power = 1;
  return n;
}

std::vector<HiPrec> ground_z_sequence(const ModelParams& params, long U) {
  if (U < 0) throw DomainError("ground_z_sequence: U must be nonnegative");
  GaussianMoments mom(params.s, params.w);
  long t = t_of(params);
  HiPrec ratio = to_hiprec(mom(1).coeff / mom(0).coeff) * sqrt(hp_pi() * to_hiprec(params.w));
  HiPrec s = to_hiprec(params.s);
  std::vector<HiPrec> out;
  out.reserve(U + 1);
  out.push_back(ratio);
  if (U == 0) return out;
  HiPrec v = ratio / (2 * (s + HiPrec(0.5))) * sqrt(HiPrec(t + 1));
  out.push_back(v);
  for (long u = 1; u < U; ++u) {
    v *= (HiPrec(u) - HiPrec(0.5)) / (s + HiPrec(0.5) + u) * sqrt(HiPrec(u + t + 1) / (u + 1));
    out.push_back(v);
  }
  return out;
}

DenominatorAssembly denominator_assembly(const ModelParams& params, long u) {
  if (u < 1) throw DomainError("denominator_assembly: u must be >= 1");
  long t = t_of(params);
  GaussianMoments mom(params.s, params.w);
  Rational mu0 = mom(0).coeff;
  Rational f = (1 + 2 * params.s) / (2 * params.w * u);
  DenominatorAssembly d;
  d.u = u;
  d.s3 = s3_direct(u, t);
  d.prefactor = mu0 * Rational(factorial(t)) * f * f;
  d.s3_part = d.prefactor * d.s3;
  Integer sum0 = 0, sum1 = 0;
  for (long k = 0; k <= u; ++k) {
    Integer c = binomial(u, k);
    if (k % 2) c = -c;
    sum0 += c;
    sum1 += c * (t + k + 1);
  }
  d.J0 = Rational(2 * sum0, factorial(t));
  d.J1 = Rational(-u * 2 * sum1, factorial(t + 1));
  d.J0.canonicalize();
  d.J1.canonicalize();
  Rational g = (1 + 2 * params.s) / (2 * params.w);
  d.constant_part = mu0 * g * g / (params.s + Rational(1, 2));
  // Rows j = 0 and columns k = 0 of sum (t! f(j,k) - 1) vanish identically,
  // so the norm is the S3 term alone.
  d.value = d.s3_part;
  if (d.J0 != 0) throw InternalConsistencyError("denominator_assembly: J0 != 0");
  if (u >= 2 && d.J1 != 0) throw InternalConsistencyError("denominator_assembly: J1 != 0");
  return d;
}

NumeratorAssembly numerator_assembly(const ModelParams& params, long u) {
  if (u < 1) throw DomainError("numerator_assembly: u must be >= 1");
  OneVarState st = eigenstate(u, params);
  MomentTable m_s = moments(params.s, params.w, u);
  MomentTable m_h = moments(params.s + Rational(1, 2), params.w, u);
  GaussianMoments mom(params.s, params.w);
  const ExactElement& mu1 = mom(1);  // = 1 / d0(s + 1/2)
  NumeratorAssembly n;
  n.u = u;
  Rational sum = 0;
  for (long k = 1; k <= u; ++k) sum += st.a[k] * (m_h.sigma[k] - m_s.sigma[k]);
  n.shifted_moments = sum * mu1;
  Rational poch = 1;
  for (long j = 0; j < u; ++j) poch *= (Rational(-1, 2) + j) / (params.s + Rational(1, 2) + j);
  n.closed_form = (-(1 + 2 * params.s) / (2 * params.w * u) * poch) * mu1;
  n.bracket = 2 * params.w * sum;
  return n;
}

Rational claimed_inverse_u_coefficient(const ModelParams& params) {
  long t = t_of(params);
  Rational C = 4 * make_rational(factorial(t + 1) * factorial(t + 1), factorial(2 * t + 3));
  Rational central = make_rational(factorial(2 * t), factorial(t) * factorial(t));
  return 4 * (1 + params.s) * C * central - 1 - 2 * params.s;
}

ElementTable element_table(const ModelParams& params, long n_max) {
  if (n_max < 0) throw DomainError("element_table: n_max must be nonnegative");
  ElementEngine eng(params);
  ElementTable t;
  t.n_max = n_max;
  long n = n_max + 1;
  t.z.resize(n, n);
  t.z2.resize(n, n);
  t.ddz.resize(n, n);
  std::vector<HiPrec> inv_norm(n);
  for (long u = 0; u < n; ++u) inv_norm[u] = 1 / sqrt(to_hiprec(eng.norm_squared(u)));
  for (long u = 0; u < n; ++u) {
    for (long v = 0; v < n; ++v) {
      HiPrec scale = inv_norm[u] * inv_norm[v];
      if (v >= u) {
        HiPrec z = eng.raw(Kernel::z, u, v).value() * scale;
        HiPrec z2 = eng.raw(Kernel::z2, u, v).value() * scale;
        t.z(u, v) = t.z(v, u) = static_cast<double>(z);
        t.z2(u, v) = t.z2(v, u) = static_cast<double>(z2);
      }
      t.ddz(u, v) = static_cast<double>(eng.raw(Kernel::d_dz, u, v).value() * scale);
    }
  }
  return t;
}

}  // namespace qw
