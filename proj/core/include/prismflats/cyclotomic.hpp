// Exact arithmetic in the cyclotomic field Q(zeta_m).
//
// Elements are stored as rational coefficient vectors over the power basis
// 1, zeta, ..., zeta^(phi(m)-1), reduced modulo the m-th cyclotomic
// polynomial.  Phi_m is computed by iterated exact division of x^m - 1 by
// the cyclotomic polynomials of the proper divisors of m; no lookup tables.
//
// Real trigonometric values enter through
//   cos(k*pi/n) = (zeta_{2n}^k + zeta_{2n}^-k) / 2
//   sin(k*pi/n) = (zeta_{2n}^k - zeta_{2n}^-k) / (2*zeta_4)
// which is why every field used by the surface builders has 4 | m and 2n | m.

#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace prismflats {

using Rational = mpq_class;

struct FieldError : std::runtime_error {
  explicit FieldError(const std::string& what) : std::runtime_error(what) {}
};

/// Mixing elements of two different FieldSpecs; never coerced silently.
struct FieldMismatchError : FieldError {
  explicit FieldMismatchError(const std::string& what) : FieldError(what) {}
};

struct DivisionByZeroError : FieldError {
  explicit DivisionByZeroError(const std::string& what) : FieldError(what) {}
};

/// tan/cot evaluated at a pole of the defining ratio.
struct TrigPoleError : FieldError {
  explicit TrigPoleError(const std::string& what) : FieldError(what) {}
};

/// Immutable description of Q(zeta_m): the modulus m, phi(m), the reduction
/// polynomial Phi_m, and the reduced power basis x^j mod Phi_m for j < m.
/// Instances are interned; everything downstream shares one spec per m.
class FieldSpec {
 public:
  static std::shared_ptr<const FieldSpec> get(int m);

  int m() const { return m_; }
  int phi() const { return phi_; }

  /// Monic Phi_m as coefficients by ascending power, size phi()+1.
  const std::vector<Rational>& cyclotomic() const { return cyclo_; }

  /// zeta^j reduced to the power basis, 0 <= j < m; size phi().
  const std::vector<Rational>& zeta_power_coeffs(int j) const;

 private:
  explicit FieldSpec(int m);

  int m_;
  int phi_;
  std::vector<Rational> cyclo_;
  std::vector<std::vector<Rational>> zeta_powers_;
};

using FieldSpecPtr = std::shared_ptr<const FieldSpec>;

/// One element of Q(zeta_m).  Default-constructed elements carry no spec and
/// may only be assigned to; any arithmetic on them throws.
class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(FieldSpecPtr spec, std::vector<Rational> coeffs);

  static FieldElement zero(FieldSpecPtr spec);
  static FieldElement one(FieldSpecPtr spec);
  static FieldElement from_rational(FieldSpecPtr spec, const Rational& q);
  /// zeta_m^k, k taken mod m (negative k allowed).
  static FieldElement zeta_power(FieldSpecPtr spec, long k);

  const FieldSpecPtr& spec() const { return spec_; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  bool valid() const { return spec_ != nullptr; }

  bool is_zero() const;
  /// The rational value if all non-constant coefficients vanish.
  std::optional<Rational> as_rational() const;
  /// Complex conjugate: zeta -> zeta^(m-1).
  FieldElement conj() const;
  /// Fixed by conjugation, i.e. lands in the real subfield.
  bool is_real() const;
  FieldElement inverse() const;

  FieldElement operator-() const;
  FieldElement& operator+=(const FieldElement& o);
  FieldElement& operator-=(const FieldElement& o);
  FieldElement& operator*=(const FieldElement& o);
  FieldElement& operator/=(const FieldElement& o);
  FieldElement& operator*=(const Rational& q);

  friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
  friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
  friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
  friend FieldElement operator/(FieldElement a, const FieldElement& b) { return a /= b; }
  friend FieldElement operator*(FieldElement a, const Rational& q) { return a *= q; }
  friend FieldElement operator*(const Rational& q, FieldElement a) { return a *= q; }

  bool operator==(const FieldElement& o) const;
  bool operator!=(const FieldElement& o) const { return !(*this == o); }

 private:
  void require_same_spec(const FieldElement& o) const;
  void require_valid() const;

  FieldSpecPtr spec_;
  std::vector<Rational> coeffs_;
};

enum class TrigKind { kCos, kSin, kTan, kCot };

/// kind(k*pi/n) as an exact element of spec.  Requires 2n | m and 4 | m.
/// tan/cot at a pole of the defining ratio raise TrigPoleError.
FieldElement trig_element(TrigKind kind, long k, long n, const FieldSpecPtr& spec);

/// Decimal approximation with absolute error below 10^-digits, computed by
/// evaluating the coefficient vector at a root of unity carried at matching
/// MPFR precision.  Returns the real part formatted with `digits` decimals.
std::string approx(const FieldElement& x, int digits);

/// Double embedding of a real element; absolute error below 1e-12.
double approx_double(const FieldElement& x);

/// Exact sign of a real element: exact zero test first, then evaluation at
/// escalating precision until the value clears its own error bound.
int sign(const FieldElement& x);

/// Degree of Q(x) over Q: index of the first linear dependence among the
/// powers 1, x, x^2, ... (at most phi(m)+1 of them are ever formed).
int degree_over_q(const FieldElement& x);

/// Euler phi by trial factorization; m is small here.
int euler_phi(int m);

}  // namespace prismflats
