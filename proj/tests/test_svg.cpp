#include "prismflats/svg.hpp"

#include <gtest/gtest.h>

#include <string>

#include "prismflats/analysis.hpp"
#include "prismflats/builders.hpp"

namespace prismflats {
namespace {

int count_occurrences(const std::string& hay, const std::string& needle) {
  int count = 0;
  for (size_t pos = hay.find(needle); pos != std::string::npos;
       pos = hay.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

TEST(Svg, NetDrawingHasOnePathPerPolygonAndNoOverlays) {
  const std::string svg = render_net_svg(build_net(5));
  EXPECT_EQ(svg.rfind("<svg ", 0), 0u);
  EXPECT_EQ(count_occurrences(svg, "<path "), 7);
  EXPECT_EQ(count_occurrences(svg, "<circle "), 0);
  EXPECT_EQ(count_occurrences(svg, "<line "), 0);
  EXPECT_EQ(count_occurrences(svg, "fill-opacity"), 0);
}

TEST(Svg, InvolutionMarkersAppearOncePerFixedPoint) {
  const Surface s = build_pi(6);
  const InvolutionReport rep = verify_involution(s, stem_center(s.spec()));
  ASSERT_TRUE(rep.is_involution);
  RenderOverlays overlays;
  overlays.markers = rep.fixed_points;
  const std::string svg = render_surface_svg(s, overlays);
  EXPECT_EQ(count_occurrences(svg, "<path "), 8);  // center, six petals, base
  EXPECT_EQ(count_occurrences(svg, "<circle "), 12);
}

TEST(Svg, ObstructionPairShadesTwoCylinderRegions) {
  // The half-hex drawing with its unit cylinder and the 8 + 2 sqrt3 one
  // shaded in two colors.
  const Surface s = build_pi_h(6);
  const LatticeObstruction ob = lattice_obstruction(6);
  RenderOverlays overlays;
  overlays.cylinders = {*ob.cylinder_a, *ob.cylinder_b};
  const std::string svg = render_surface_svg(s, overlays);
  const int pieces = static_cast<int>(ob.cylinder_a->footprint.size()) +
                     static_cast<int>(ob.cylinder_b->footprint.size());
  EXPECT_EQ(count_occurrences(svg, "fill-opacity"), pieces);
  EXPECT_EQ(count_occurrences(svg, "<path "), 7 + pieces);
  EXPECT_GE(count_occurrences(svg, "#2f6db4"), 1);
  EXPECT_GE(count_occurrences(svg, "#c05a2e"), 1);
}

TEST(Svg, ConnectionsAreDrawnAsChartSegments) {
  const Surface s = build_pi(5);
  EnumerationPolicy policy;
  policy.length_bound = 2.0;
  RenderOverlays overlays;
  overlays.connections = enumerate_saddle_connections(s, policy);
  ASSERT_GT(overlays.connections.size(), 0u);
  const std::string svg = render_surface_svg(s, overlays);
  EXPECT_GE(count_occurrences(svg, "<line "),
            static_cast<int>(overlays.connections.size()));
}

TEST(Svg, OutputIsByteStable) {
  const Surface s = build_pi(5);
  RenderOverlays overlays;
  overlays.cylinders = cylinders_in_direction(s, Direction::kHorizontal, 4.0);
  EXPECT_EQ(render_surface_svg(s, overlays), render_surface_svg(s, overlays));
  EXPECT_EQ(render_net_svg(build_net(7)), render_net_svg(build_net(7)));
}

}  // namespace
}  // namespace prismflats
