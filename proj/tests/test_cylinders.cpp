#include "prismflats/engine.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "prismflats/builders.hpp"
#include "prismflats/cyclotomic.hpp"
#include "prismflats/surface.hpp"

namespace prismflats {
namespace {

bool fe_eq(const FieldElement& a, const FieldElement& b) { return sign(a - b) == 0; }

// Sum of c*h over the returned cylinders, the exact area they tile.
FieldElement tiled_area(const FieldSpecPtr& spec, const std::vector<Cylinder>& cyls) {
  FieldElement acc = FieldElement::zero(spec);
  for (const auto& cyl : cyls) acc += cyl.circumference * cyl.height;
  return acc;
}

// Every structural promise a returned cylinder makes, checked exactly.
void check_cylinder_contract(const Surface& s, const Cylinder& cyl, double bound) {
  EXPECT_TRUE(fe_eq(cyl.modulus * cyl.circumference, cyl.height));
  EXPECT_GT(sign(cyl.circumference), 0);
  EXPECT_GT(sign(cyl.height), 0);
  EXPECT_TRUE(cyl.waist.closes);
  EXPECT_GE(cyl.waist.polygon, 0);
  EXPECT_LT(cyl.waist.polygon, s.num_polygons());
  if (cyl.direction == Direction::kHorizontal) {
    EXPECT_TRUE(cyl.waist.holonomy.y.is_zero());
    EXPECT_TRUE(fe_eq(cyl.waist.holonomy.x, cyl.circumference));
  } else {
    EXPECT_TRUE(cyl.waist.holonomy.x.is_zero());
    EXPECT_TRUE(fe_eq(cyl.waist.holonomy.y, cyl.circumference));
  }
  EXPECT_FALSE(cyl.boundary_low.empty());
  EXPECT_FALSE(cyl.boundary_high.empty());
  EXPECT_FALSE(cyl.footprint.empty());
  FieldElement covered = FieldElement::zero(s.spec());
  for (const auto& [p, piece] : cyl.footprint) {
    EXPECT_GE(p, 0);
    EXPECT_LT(p, s.num_polygons());
    covered += polygon_area(piece);
  }
  EXPECT_TRUE(fe_eq(covered, cyl.circumference * cyl.height));
  for (const auto* side : {&cyl.boundary_low, &cyl.boundary_high}) {
    for (const auto& sc : *side) {
      if (cyl.direction == Direction::kHorizontal) {
        EXPECT_TRUE(sc.exact_holonomy.y.is_zero());
      } else {
        EXPECT_TRUE(sc.exact_holonomy.x.is_zero());
      }
      EXPECT_LE(sc.length, bound * (1 + 1e-9));
    }
  }
}

TEST(Cylinders, HexQuotientContainsTheUnitStem) {
  const Surface s = build_pi(6);
  const auto cyls = cylinders_in_direction(s, Direction::kHorizontal, 4.0);
  const FieldElement one = FieldElement::one(s.spec());
  bool found = false;
  for (const auto& cyl : cyls) {
    check_cylinder_contract(s, cyl, 4.0);
    if (fe_eq(cyl.circumference, one) && fe_eq(cyl.height, one)) found = true;
  }
  EXPECT_TRUE(found);
  const FieldElement tiled = tiled_area(s.spec(), cyls);
  EXPECT_LE(sign(tiled - s.area()), 0);
}

TEST(Cylinders, HalfHexReciprocalModulusIsEightPlusTwoRootThree) {
  const Surface s = build_pi_h(6);
  const auto cyls = cylinders_in_direction(s, Direction::kHorizontal, 8.0);
  // cot(pi/6) is an exact square root of three.
  const FieldElement sqrt3 = trig_element(TrigKind::kCot, 1, 6, s.spec());
  const FieldElement expected =
      FieldElement::from_rational(s.spec(), Rational(8)) + sqrt3 + sqrt3;
  bool found = false;
  for (const auto& cyl : cyls) {
    check_cylinder_contract(s, cyl, 8.0);
    if (fe_eq(cyl.circumference / cyl.height, expected)) found = true;
  }
  EXPECT_TRUE(found);
  EXPECT_NEAR(approx_double(expected), 11.464102, 1e-6);
}

TEST(Cylinders, HalfHexDecomposesIntoThreeCylinders) {
  const Surface s = build_pi_h(6);
  const auto cyls = cylinders_in_direction(s, Direction::kHorizontal, 8.0);
  ASSERT_EQ(cyls.size(), 3u);
  EXPECT_TRUE(fe_eq(tiled_area(s.spec(), cyls), s.area()));
  // Sorted by circumference: the unit half-stem cylinder, then (3 + sqrt3,
  // (sqrt3 - 1)/2), then (4 + sqrt3, 1/2).
  const FieldSpecPtr& spec = s.spec();
  const FieldElement one = FieldElement::one(spec);
  const FieldElement sqrt3 = trig_element(TrigKind::kCot, 1, 6, spec);
  EXPECT_TRUE(fe_eq(cyls[0].circumference, one));
  EXPECT_TRUE(fe_eq(cyls[0].height, one));
  EXPECT_TRUE(fe_eq(cyls[1].circumference, FieldElement::from_rational(spec, Rational(3)) + sqrt3));
  EXPECT_TRUE(fe_eq(cyls[1].height, (sqrt3 - one) * Rational(1, 2)));
  EXPECT_TRUE(fe_eq(cyls[2].circumference, FieldElement::from_rational(spec, Rational(4)) + sqrt3));
  EXPECT_TRUE(fe_eq(cyls[2].height, FieldElement::from_rational(spec, Rational(1, 2))));
}

TEST(Cylinders, TriangleQuotientReciprocalModulusIsFourPlusTwoRootThree) {
  const Surface s = build_pi(3);
  const auto cyls = cylinders_in_direction(s, Direction::kHorizontal, 8.0);
  const FieldElement sqrt3 = trig_element(TrigKind::kCot, 1, 6, s.spec());
  const FieldElement expected =
      FieldElement::from_rational(s.spec(), Rational(4)) + sqrt3 + sqrt3;
  bool found = false;
  for (const auto& cyl : cyls) {
    check_cylinder_contract(s, cyl, 8.0);
    if (fe_eq(cyl.circumference / cyl.height, expected)) found = true;
  }
  EXPECT_TRUE(found);
}

TEST(Cylinders, HalfOctagonReciprocalModulusIsOnePlusCotPiOverEight) {
  const Surface s = build_pi_h(8);
  const auto cyls = cylinders_in_direction(s, Direction::kHorizontal, 10.0);
  const FieldElement expected =
      FieldElement::one(s.spec()) + trig_element(TrigKind::kCot, 1, 8, s.spec());
  EXPECT_NEAR(approx_double(expected), 3.414214, 1e-6);
  bool found = false;
  for (const auto& cyl : cyls) {
    check_cylinder_contract(s, cyl, 10.0);
    if (fe_eq(cyl.circumference / cyl.height, expected)) found = true;
  }
  EXPECT_TRUE(found);
}

TEST(Cylinders, SquareTiledUnfoldingDecomposesCompletely) {
  const Surface s = build_unfolding(4);
  for (const auto dir : {Direction::kHorizontal, Direction::kVertical}) {
    const auto cyls = cylinders_in_direction(s, dir, 10.0);
    ASSERT_FALSE(cyls.empty());
    for (const auto& cyl : cyls) {
      check_cylinder_contract(s, cyl, 10.0);
      // Square-tiled: every modulus is rational.
      EXPECT_TRUE(cyl.modulus.as_rational().has_value());
    }
    EXPECT_TRUE(fe_eq(tiled_area(s.spec(), cyls), s.area()));
  }
}

TEST(Cylinders, PentagonQuotientInvariants) {
  const Surface s = build_pi(5);
  const auto cyls = cylinders_in_direction(s, Direction::kHorizontal, 6.0);
  ASSERT_FALSE(cyls.empty());
  for (const auto& cyl : cyls) check_cylinder_contract(s, cyl, 6.0);
  EXPECT_LE(sign(tiled_area(s.spec(), cyls) - s.area()), 0);
  // Sorted by circumference, then height.
  for (size_t i = 1; i < cyls.size(); ++i) {
    const int sc = sign(cyls[i - 1].circumference - cyls[i].circumference);
    EXPECT_LE(sc, 0);
    if (sc == 0) {
      EXPECT_LE(sign(cyls[i - 1].height - cyls[i].height), 0);
    }
  }
}

TEST(Cylinders, VerticalDirectionReportsVerticalData) {
  const Surface s = build_pi(6);
  const auto cyls = cylinders_in_direction(s, Direction::kVertical, 4.0);
  for (const auto& cyl : cyls) {
    EXPECT_EQ(cyl.direction, Direction::kVertical);
    check_cylinder_contract(s, cyl, 4.0);
  }
}

TEST(Cylinders, RejectsBadBounds) {
  const Surface s = build_pi(4);
  EXPECT_THROW(cylinders_in_direction(s, Direction::kHorizontal, 0.0), std::invalid_argument);
  EXPECT_THROW(cylinders_in_direction(s, Direction::kHorizontal, -2.0), std::invalid_argument);
  EXPECT_THROW(cylinders_in_direction(s, Direction::kHorizontal,
                                      std::numeric_limits<double>::infinity()),
               std::invalid_argument);
  EXPECT_THROW(cylinders_in_direction(s, Direction::kHorizontal,
                                      std::numeric_limits<double>::quiet_NaN()),
               std::invalid_argument);
}

}  // namespace
}  // namespace prismflats
