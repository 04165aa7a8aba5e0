#include "prismflats/cyclotomic.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <utility>

namespace prismflats {

namespace {

// Polynomials are rational coefficient vectors by ascending power with no
// trailing zeros (the zero polynomial is the empty vector).

void poly_trim(std::vector<Rational>& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

int poly_deg(const std::vector<Rational>& p) { return static_cast<int>(p.size()) - 1; }

std::vector<Rational> poly_mul(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<Rational> out(a.size() + b.size() - 1, Rational(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  poly_trim(out);
  return out;
}

// Quotient and remainder of a by b, b nonzero.
std::pair<std::vector<Rational>, std::vector<Rational>> poly_divmod(
    std::vector<Rational> a, const std::vector<Rational>& b) {
  poly_trim(a);
  const int db = poly_deg(b);
  if (db < 0) throw FieldError("polynomial division by zero");
  const Rational lead = b.back();
  std::vector<Rational> q;
  while (poly_deg(a) >= db) {
    const int shift = poly_deg(a) - db;
    Rational c = a.back() / lead;
    if (static_cast<int>(q.size()) < shift + 1) q.resize(shift + 1, Rational(0));
    q[shift] += c;
    for (int i = 0; i <= db; ++i) a[shift + i] -= c * b[i];
    poly_trim(a);
  }
  poly_trim(q);
  return {std::move(q), std::move(a)};
}

std::vector<Rational> poly_divide_exact(const std::vector<Rational>& a,
                                        const std::vector<Rational>& b) {
  auto [q, r] = poly_divmod(a, b);
  if (!r.empty()) throw FieldError("inexact polynomial division in Phi_m construction");
  return q;
}

std::vector<Rational> x_pow_minus_one(int d) {
  std::vector<Rational> p(d + 1, Rational(0));
  p[0] = -1;
  p[d] = 1;
  return p;
}

}  // namespace

int euler_phi(int m) {
  if (m < 1) throw FieldError("euler_phi: m must be positive");
  int result = m;
  int rem = m;
  for (int p = 2; p * p <= rem; ++p) {
    if (rem % p == 0) {
      result -= result / p;
      while (rem % p == 0) rem /= p;
    }
  }
  if (rem > 1) result -= result / rem;
  return result;
}

FieldSpec::FieldSpec(int m) : m_(m), phi_(euler_phi(m)) {
  // Phi_d for every divisor d of m, ascending, by exact division of x^d - 1.
  std::map<int, std::vector<Rational>> table;
  for (int d = 1; d <= m; ++d) {
    if (m % d != 0) continue;
    std::vector<Rational> num = x_pow_minus_one(d);
    for (const auto& [e, phi_e] : table) {
      if (d % e == 0) num = poly_divide_exact(num, phi_e);
    }
    table[d] = std::move(num);
  }
  cyclo_ = table[m];
  if (poly_deg(cyclo_) != phi_ || cyclo_.back() != 1) {
    throw FieldError("Phi_m construction produced a wrong-degree polynomial");
  }

  // x^j mod Phi_m for 0 <= j < m, by repeated shift-and-reduce.
  zeta_powers_.resize(m_);
  std::vector<Rational> cur(phi_, Rational(0));
  cur[0] = 1;
  zeta_powers_[0] = cur;
  for (int j = 1; j < m_; ++j) {
    std::vector<Rational> next(phi_ + 1, Rational(0));
    for (int i = 0; i < phi_; ++i) next[i + 1] = cur[i];
    if (next[phi_] != 0) {
      const Rational top = next[phi_];
      for (int i = 0; i < phi_; ++i) next[i] -= top * cyclo_[i];
    }
    next.resize(phi_);
    zeta_powers_[j] = next;
    cur = std::move(next);
  }
}

std::shared_ptr<const FieldSpec> FieldSpec::get(int m) {
  if (m < 1) throw FieldError("FieldSpec: m must be positive");
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const FieldSpec>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  auto spec = std::shared_ptr<const FieldSpec>(new FieldSpec(m));
  cache[m] = spec;
  return spec;
}

const std::vector<Rational>& FieldSpec::zeta_power_coeffs(int j) const {
  if (j < 0 || j >= m_) throw FieldError("zeta_power_coeffs: exponent out of range");
  return zeta_powers_[j];
}

FieldElement::FieldElement(FieldSpecPtr spec, std::vector<Rational> coeffs)
    : spec_(std::move(spec)), coeffs_(std::move(coeffs)) {
  if (!spec_) throw FieldError("FieldElement: null spec");
  if (static_cast<int>(coeffs_.size()) != spec_->phi()) {
    throw FieldError("FieldElement: coefficient vector has wrong length");
  }
  // mpq_class comparisons require canonical form; callers may hand us
  // fractions like 4/2.
  for (Rational& c : coeffs_) c.canonicalize();
}

FieldElement FieldElement::zero(FieldSpecPtr spec) {
  if (!spec) throw FieldError("FieldElement::zero: null spec");
  std::vector<Rational> c(spec->phi(), Rational(0));
  return FieldElement(std::move(spec), std::move(c));
}

FieldElement FieldElement::one(FieldSpecPtr spec) {
  return from_rational(std::move(spec), Rational(1));
}

FieldElement FieldElement::from_rational(FieldSpecPtr spec, const Rational& q) {
  FieldElement x = zero(std::move(spec));
  x.coeffs_[0] = q;
  x.coeffs_[0].canonicalize();
  return x;
}

FieldElement FieldElement::zeta_power(FieldSpecPtr spec, long k) {
  if (!spec) throw FieldError("FieldElement::zeta_power: null spec");
  const int m = spec->m();
  long r = k % m;
  if (r < 0) r += m;
  std::vector<Rational> c = spec->zeta_power_coeffs(static_cast<int>(r));
  return FieldElement(std::move(spec), std::move(c));
}

void FieldElement::require_valid() const {
  if (!spec_) throw FieldError("operation on default-constructed FieldElement");
}

void FieldElement::require_same_spec(const FieldElement& o) const {
  require_valid();
  o.require_valid();
  if (spec_.get() != o.spec_.get()) {
    throw FieldMismatchError("mixing elements of Q(zeta_" + std::to_string(spec_->m()) +
                             ") and Q(zeta_" + std::to_string(o.spec_->m()) + ")");
  }
}

bool FieldElement::is_zero() const {
  require_valid();
  for (const auto& c : coeffs_) {
    if (c != 0) return false;
  }
  return true;
}

std::optional<Rational> FieldElement::as_rational() const {
  require_valid();
  for (size_t i = 1; i < coeffs_.size(); ++i) {
    if (coeffs_[i] != 0) return std::nullopt;
  }
  return coeffs_[0];
}

FieldElement FieldElement::conj() const {
  require_valid();
  FieldElement out = zero(spec_);
  const int m = spec_->m();
  for (int j = 0; j < spec_->phi(); ++j) {
    if (coeffs_[j] == 0) continue;
    const auto& pw = spec_->zeta_power_coeffs((m - j) % m);
    for (int i = 0; i < spec_->phi(); ++i) out.coeffs_[i] += coeffs_[j] * pw[i];
  }
  return out;
}

bool FieldElement::is_real() const { return *this == conj(); }

FieldElement FieldElement::inverse() const {
  require_valid();
  if (is_zero()) throw DivisionByZeroError("inverse of zero field element");
  // Extended Euclid in Q[x] against Phi_m; the gcd is a nonzero constant.
  std::vector<Rational> r0 = spec_->cyclotomic();
  std::vector<Rational> r1 = coeffs_;
  poly_trim(r1);
  std::vector<Rational> s0;                 // coefficient of *this in r0
  std::vector<Rational> s1 = {Rational(1)};  // coefficient of *this in r1
  while (!r1.empty()) {
    auto [q, rem] = poly_divmod(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(rem);
    std::vector<Rational> qs1 = poly_mul(q, s1);
    std::vector<Rational> s_new = s0;
    if (s_new.size() < qs1.size()) s_new.resize(qs1.size(), Rational(0));
    for (size_t i = 0; i < qs1.size(); ++i) s_new[i] -= qs1[i];
    poly_trim(s_new);
    s0 = std::move(s1);
    s1 = std::move(s_new);
  }
  if (poly_deg(r0) != 0) throw FieldError("inverse: gcd with Phi_m is not constant");
  const Rational g = r0[0];
  std::vector<Rational> inv(spec_->phi(), Rational(0));
  for (size_t i = 0; i < s0.size() && i < inv.size(); ++i) inv[i] = s0[i] / g;
  if (s0.size() > inv.size()) throw FieldError("inverse: Bezout coefficient too long");
  return FieldElement(spec_, std::move(inv));
}

FieldElement FieldElement::operator-() const {
  require_valid();
  FieldElement out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

FieldElement& FieldElement::operator+=(const FieldElement& o) {
  require_same_spec(o);
  for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& o) {
  require_same_spec(o);
  for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

FieldElement& FieldElement::operator*=(const FieldElement& o) {
  require_same_spec(o);
  const int phi = spec_->phi();
  std::vector<Rational> conv(2 * phi - 1, Rational(0));
  for (int i = 0; i < phi; ++i) {
    if (coeffs_[i] == 0) continue;
    for (int j = 0; j < phi; ++j) {
      if (o.coeffs_[j] == 0) continue;
      conv[i + j] += coeffs_[i] * o.coeffs_[j];
    }
  }
  const auto& cy = spec_->cyclotomic();
  for (int deg = 2 * phi - 2; deg >= phi; --deg) {
    if (conv[deg] == 0) continue;
    const Rational c = conv[deg];
    conv[deg] = 0;
    for (int i = 0; i < phi; ++i) conv[deg - phi + i] -= c * cy[i];
  }
  conv.resize(phi);
  coeffs_ = std::move(conv);
  return *this;
}

FieldElement& FieldElement::operator/=(const FieldElement& o) {
  require_same_spec(o);
  return *this *= o.inverse();
}

FieldElement& FieldElement::operator*=(const Rational& q) {
  require_valid();
  Rational qc = q;
  qc.canonicalize();
  for (auto& c : coeffs_) c *= qc;
  return *this;
}

bool FieldElement::operator==(const FieldElement& o) const {
  if (!spec_ && !o.spec_) return true;
  if (!spec_ || !o.spec_) return false;
  require_same_spec(o);
  return coeffs_ == o.coeffs_;
}

FieldElement trig_element(TrigKind kind, long k, long n, const FieldSpecPtr& spec) {
  if (!spec) throw FieldError("trig_element: null spec");
  const int m = spec->m();
  if (n < 1 || m % (2 * n) != 0 || m % 4 != 0) {
    throw FieldError("trig_element: field Q(zeta_" + std::to_string(m) +
                     ") does not contain zeta_" + std::to_string(2 * n) + " and zeta_4");
  }
  const long s = m / (2 * n);
  long kk = k % (2 * n);
  if (kk < 0) kk += 2 * n;
  const FieldElement zp = FieldElement::zeta_power(spec, kk * s);
  const FieldElement zm = FieldElement::zeta_power(spec, -kk * s);
  const Rational half(1, 2);
  const FieldElement cos_val = (zp + zm) * half;
  const FieldElement i_unit = FieldElement::zeta_power(spec, m / 4);
  const FieldElement sin_val = (zp - zm) * half / i_unit;
  switch (kind) {
    case TrigKind::kCos:
      return cos_val;
    case TrigKind::kSin:
      return sin_val;
    case TrigKind::kTan:
      if (cos_val.is_zero()) {
        throw TrigPoleError("tan(" + std::to_string(k) + "*pi/" + std::to_string(n) +
                            ") is undefined");
      }
      return sin_val / cos_val;
    case TrigKind::kCot:
      if (sin_val.is_zero()) {
        throw TrigPoleError("cot(" + std::to_string(k) + "*pi/" + std::to_string(n) +
                            ") is undefined");
      }
      return cos_val / sin_val;
  }
  throw FieldError("trig_element: unknown kind");
}

namespace {

mpfr_prec_t working_prec(const FieldElement& x, int digits) {
  size_t coeff_bits = 1;
  for (const auto& c : x.coeffs()) {
    if (c == 0) continue;
    const size_t b = mpz_sizeinbase(c.get_num().get_mpz_t(), 2) +
                     mpz_sizeinbase(c.get_den().get_mpz_t(), 2);
    coeff_bits = std::max(coeff_bits, b);
  }
  const double bits = 64.0 + digits * 3.3219280948873623 + static_cast<double>(coeff_bits) +
                      std::log2(static_cast<double>(x.coeffs().size()) + 2.0);
  return static_cast<mpfr_prec_t>(bits) + 8;
}

// Real part of x as sum_j c_j cos(2 pi j / m), into out (already initialized
// at the working precision).
void eval_real(const FieldElement& x, mpfr_t out) {
  const mpfr_prec_t prec = mpfr_get_prec(out);
  mpfr_t pi, angle, co, term;
  mpfr_inits2(prec, pi, angle, co, term, static_cast<mpfr_ptr>(nullptr));
  mpfr_const_pi(pi, MPFR_RNDN);
  mpfr_set_zero(out, 1);
  const int m = x.spec()->m();
  const auto& cs = x.coeffs();
  for (int j = 0; j < static_cast<int>(cs.size()); ++j) {
    if (cs[j] == 0) continue;
    mpfr_mul_si(angle, pi, 2L * j, MPFR_RNDN);
    mpfr_div_si(angle, angle, m, MPFR_RNDN);
    mpfr_cos(co, angle, MPFR_RNDN);
    mpfr_set_q(term, cs[j].get_mpq_t(), MPFR_RNDN);
    mpfr_mul(term, term, co, MPFR_RNDN);
    mpfr_add(out, out, term, MPFR_RNDN);
  }
  mpfr_clears(pi, angle, co, term, static_cast<mpfr_ptr>(nullptr));
}

}  // namespace

std::string approx(const FieldElement& x, int digits) {
  if (!x.valid()) throw FieldError("approx: default-constructed element");
  if (digits < 0) throw FieldError("approx: negative digit count");
  mpfr_t v;
  mpfr_init2(v, working_prec(x, digits));
  eval_real(x, v);
  char* str = nullptr;
  mpfr_asprintf(&str, "%.*R*f", digits, MPFR_RNDN, v);
  std::string out(str);
  mpfr_free_str(str);
  mpfr_clear(v);
  return out;
}

double approx_double(const FieldElement& x) {
  if (!x.valid()) throw FieldError("approx_double: default-constructed element");
  mpfr_t v;
  mpfr_init2(v, working_prec(x, 40));
  eval_real(x, v);
  const double d = mpfr_get_d(v, MPFR_RNDN);
  mpfr_clear(v);
  return d;
}

int sign(const FieldElement& x) {
  if (!x.valid()) throw FieldError("sign: default-constructed element");
  if (x.is_zero()) return 0;
  if (!x.is_real()) throw FieldError("sign: element is not real");
  for (int digits : {24, 48, 96, 192, 384}) {
    mpfr_t v, thr;
    const mpfr_prec_t prec = working_prec(x, digits);
    mpfr_init2(v, prec);
    mpfr_init2(thr, prec);
    eval_real(x, v);
    mpfr_set_ui(thr, 10, MPFR_RNDN);
    mpfr_pow_si(thr, thr, -digits, MPFR_RNDN);
    mpfr_mul_ui(thr, thr, 4, MPFR_RNDN);
    const bool resolved = mpfr_cmpabs(v, thr) > 0;
    const int s = mpfr_sgn(v);
    mpfr_clear(v);
    mpfr_clear(thr);
    if (resolved) return s;
  }
  throw FieldError("sign: could not separate nonzero element from zero");
}

int degree_over_q(const FieldElement& x) {
  if (!x.valid()) throw FieldError("degree_over_q: default-constructed element");
  const int phi = x.spec()->phi();
  // Exact Gaussian elimination over the powers of x; the first power that
  // reduces to zero against its predecessors has exponent equal to the degree.
  std::vector<std::pair<int, std::vector<Rational>>> pivots;  // (column, reduced row)
  FieldElement p = FieldElement::one(x.spec());
  for (int k = 0; k <= phi; ++k) {
    std::vector<Rational> row = p.coeffs();
    for (const auto& [col, base] : pivots) {
      if (row[col] == 0) continue;
      const Rational f = row[col] / base[col];
      for (int i = 0; i < phi; ++i) row[i] -= f * base[i];
    }
    int lead = -1;
    for (int i = 0; i < phi; ++i) {
      if (row[i] != 0) {
        lead = i;
        break;
      }
    }
    if (lead < 0) return k;
    pivots.emplace_back(lead, std::move(row));
    p *= x;
  }
  throw FieldError("degree_over_q: no dependence found below phi(m)+1 powers");
}

}  // namespace prismflats
