#include "prismflats/cyclotomic.hpp"

#include <gtest/gtest.h>

#include <numeric>

namespace prismflats {
namespace {

FieldElement cot_pi_over(long n) {
  auto spec = FieldSpec::get(static_cast<int>(std::lcm(4L, 2 * n)));
  return trig_element(TrigKind::kCot, 1, n, spec);
}

TEST(EulerPhi, SpotValues) {
  EXPECT_EQ(euler_phi(1), 1);
  EXPECT_EQ(euler_phi(4), 2);
  EXPECT_EQ(euler_phi(12), 4);
  EXPECT_EQ(euler_phi(20), 8);
  EXPECT_EQ(euler_phi(36), 12);
  EXPECT_EQ(euler_phi(97), 96);
}

TEST(FieldSpec, CyclotomicPolynomials) {
  // Phi_12 = x^4 - x^2 + 1.
  auto s12 = FieldSpec::get(12);
  EXPECT_EQ(s12->phi(), 4);
  const std::vector<Rational> phi12 = {1, 0, -1, 0, 1};
  EXPECT_EQ(s12->cyclotomic(), phi12);

  // Phi_8 = x^4 + 1.
  auto s8 = FieldSpec::get(8);
  const std::vector<Rational> phi8 = {1, 0, 0, 0, 1};
  EXPECT_EQ(s8->cyclotomic(), phi8);

  // Phi_20 = x^8 - x^6 + x^4 - x^2 + 1.
  auto s20 = FieldSpec::get(20);
  const std::vector<Rational> phi20 = {1, 0, -1, 0, 1, 0, -1, 0, 1};
  EXPECT_EQ(s20->cyclotomic(), phi20);

  EXPECT_EQ(FieldSpec::get(12).get(), FieldSpec::get(12).get());
}

TEST(FieldElement, RootOfUnityRelations) {
  auto spec = FieldSpec::get(12);
  const FieldElement z = FieldElement::zeta_power(spec, 1);
  FieldElement p = FieldElement::one(spec);
  for (int i = 0; i < 12; ++i) p *= z;
  EXPECT_EQ(p, FieldElement::one(spec));
  EXPECT_EQ(FieldElement::zeta_power(spec, 6), -FieldElement::one(spec));
  EXPECT_EQ(FieldElement::zeta_power(spec, -1), z.conj());
  EXPECT_EQ(z * z.conj(), FieldElement::one(spec));
  EXPECT_FALSE(z.is_real());
  EXPECT_TRUE((z + z.conj()).is_real());
}

TEST(FieldElement, InverseRoundTrip) {
  auto spec = FieldSpec::get(20);
  FieldElement x = FieldElement::from_rational(spec, Rational(3, 7));
  x += FieldElement::zeta_power(spec, 1) * Rational(2);
  x -= FieldElement::zeta_power(spec, 3);
  ASSERT_FALSE(x.is_zero());
  EXPECT_EQ(x * x.inverse(), FieldElement::one(spec));
  EXPECT_EQ(x / x, FieldElement::one(spec));
  EXPECT_THROW(FieldElement::zero(spec).inverse(), DivisionByZeroError);
}

TEST(FieldElement, SpecMixingRejected) {
  const FieldElement a = FieldElement::one(FieldSpec::get(12));
  const FieldElement b = FieldElement::one(FieldSpec::get(20));
  EXPECT_THROW(a + b, FieldMismatchError);
  EXPECT_THROW(a == b, FieldMismatchError);
}

TEST(Trig, ExactRationalValues) {
  auto spec = FieldSpec::get(12);
  const FieldElement c = trig_element(TrigKind::kCos, 1, 3, spec);
  ASSERT_TRUE(c.as_rational().has_value());
  EXPECT_EQ(*c.as_rational(), Rational(1, 2));
  const FieldElement s = trig_element(TrigKind::kSin, 1, 6, spec);
  ASSERT_TRUE(s.as_rational().has_value());
  EXPECT_EQ(*s.as_rational(), Rational(1, 2));
  const FieldElement t = trig_element(TrigKind::kTan, 1, 4, FieldSpec::get(8));
  EXPECT_EQ(t, FieldElement::one(FieldSpec::get(8)));
}

TEST(Trig, PythagorasExact) {
  auto spec = FieldSpec::get(28);
  const FieldElement c = trig_element(TrigKind::kCos, 3, 7, spec);
  const FieldElement s = trig_element(TrigKind::kSin, 3, 7, spec);
  EXPECT_EQ(c * c + s * s, FieldElement::one(spec));
  EXPECT_TRUE(c.is_real());
  EXPECT_TRUE(s.is_real());
}

TEST(Trig, PolesThrow) {
  EXPECT_THROW(trig_element(TrigKind::kTan, 1, 2, FieldSpec::get(4)), TrigPoleError);
  EXPECT_THROW(trig_element(TrigKind::kCot, 0, 5, FieldSpec::get(20)), TrigPoleError);
  // Field without zeta_4 is rejected up front.
  EXPECT_THROW(trig_element(TrigKind::kCos, 1, 3, FieldSpec::get(6)), FieldError);
}

TEST(Trig, ExactAlgebraicIdentities) {
  // cot(pi/6)^2 == 3.
  const FieldElement cot6 = cot_pi_over(6);
  auto three = FieldElement::from_rational(cot6.spec(), Rational(3));
  EXPECT_EQ(cot6 * cot6, three);

  // tan(pi/5)^2 = 5 - 2*sqrt(5), so (tan^2 - 5)^2 == 20.
  auto s20 = FieldSpec::get(20);
  const FieldElement t5 = trig_element(TrigKind::kTan, 1, 5, s20);
  const FieldElement d = t5 * t5 - FieldElement::from_rational(s20, Rational(5));
  EXPECT_EQ(d * d, FieldElement::from_rational(s20, Rational(20)));
}

TEST(Approx, FrozenDecimalStrings) {
  // 8 + 2*cot(pi/6) = 8 + 2*sqrt(3).
  const FieldElement cot6 = cot_pi_over(6);
  const FieldElement v =
      FieldElement::from_rational(cot6.spec(), Rational(8)) + cot6 * Rational(2);
  EXPECT_EQ(approx(v, 6), "11.464102");

  // cot(pi/8) = 1 + sqrt(2).
  const FieldElement cot8 = cot_pi_over(8);
  EXPECT_EQ(approx(cot8, 6), "2.414214");
  EXPECT_EQ(approx(-cot8, 6), "-2.414214");
  EXPECT_EQ(approx(FieldElement::zero(cot8.spec()), 4), "0.0000");
}

TEST(Approx, DoubleEmbedding) {
  EXPECT_NEAR(approx_double(cot_pi_over(8)), 2.414213562373095, 1e-12);
  EXPECT_NEAR(approx_double(cot_pi_over(3)), 0.5773502691896258, 1e-12);
  const FieldElement half = FieldElement::from_rational(FieldSpec::get(4), Rational(1, 2));
  EXPECT_EQ(approx_double(half), 0.5);
}

TEST(Sign, ExactZeroAndEscalation) {
  auto spec = FieldSpec::get(12);
  const FieldElement sqrt3 = cot_pi_over(6);
  const FieldElement one = FieldElement::one(spec);
  EXPECT_EQ(sign(sqrt3 - one), 1);
  EXPECT_EQ(sign(one - sqrt3), -1);
  EXPECT_EQ(sign(sqrt3 * sqrt3 - FieldElement::from_rational(spec, Rational(3))), 0);
  // Small but nonzero: sqrt(3) - 433/250 = approx 2.5e-4.
  EXPECT_EQ(sign(sqrt3 - FieldElement::from_rational(spec, Rational(433, 250))), 1);
}

TEST(Degree, KnownDegrees) {
  EXPECT_EQ(degree_over_q(FieldElement::one(FieldSpec::get(12))), 1);
  EXPECT_EQ(degree_over_q(FieldElement::zeta_power(FieldSpec::get(12), 1)), 4);
  EXPECT_EQ(degree_over_q(cot_pi_over(6)), 2);  // sqrt(3)
  // 2*cos(pi/7) has degree phi(14)/2 = 3.
  auto s28 = FieldSpec::get(28);
  const FieldElement c7 = trig_element(TrigKind::kCos, 1, 7, s28) * Rational(2);
  EXPECT_EQ(degree_over_q(c7), 3);
  EXPECT_EQ(degree_over_q(cot_pi_over(8)), 2);  // 1 + sqrt(2)
}

}  // namespace
}  // namespace prismflats
