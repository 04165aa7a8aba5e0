#include "prismflats/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "json_detail.hpp"

namespace prismflats {

namespace {

std::string corner_name(int polygon, int vertex) {
  std::ostringstream os;
  os << "(" << polygon << ", " << vertex << ")";
  return os.str();
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0; }

/// Exact comparison cutoff for "length <= bound" given a float bound: the
/// bound is converted exactly, so the decision matches the enumeration gate.
FieldElement squared_bound(const FieldSpecPtr& spec, double bound) {
  const Rational b(bound);
  return FieldElement::from_rational(spec, b * b);
}

long count_within(const std::vector<SaddleConnection>& list, const FieldElement& len_sq) {
  // The list is sorted by exact length, so the prefix property holds.
  const auto it = std::partition_point(
      list.begin(), list.end(),
      [&](const SaddleConnection& sc) { return sign(sc.exact_length_sq - len_sq) <= 0; });
  return static_cast<long>(it - list.begin());
}

double drawing_diameter(const Surface& s) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& poly : s.float_vertices()) {
    pts.insert(pts.end(), poly.begin(), poly.end());
  }
  double best = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    for (size_t j = i + 1; j < pts.size(); ++j) {
      const double dx = pts[i].first - pts[j].first;
      const double dy = pts[i].second - pts[j].second;
      best = std::max(best, std::hypot(dx, dy));
    }
  }
  return best;
}

}  // namespace

CoveringReport verify_covering(const CoveringMap& m) {
  if (!m.source || !m.target) {
    throw std::invalid_argument("covering map is missing a surface");
  }
  const Surface& src = *m.source;
  const Surface& tgt = *m.target;
  if (static_cast<int>(m.polygon_map.size()) != src.num_polygons()) {
    throw std::invalid_argument("covering map does not cover every source polygon");
  }
  if (m.degree <= 0) {
    throw std::invalid_argument("covering map must have positive degree");
  }

  CoveringReport rep;
  rep.degree = m.degree;

  // (i) every source polygon is an exact translate of its image.
  rep.translations_ok = true;
  for (int p = 0; p < src.num_polygons(); ++p) {
    const CoveringMap::PolyImage& im = m.polygon_map[p];
    if (im.target_polygon < 0 || im.target_polygon >= tgt.num_polygons()) {
      rep.translations_ok = false;
      rep.failures.push_back("source polygon " + std::to_string(p) + " has no image polygon");
      continue;
    }
    const Polygon& sp = src.polygon(p);
    const Polygon& tp = tgt.polygon(im.target_polygon);
    if (sp.size() != tp.size()) {
      rep.translations_ok = false;
      rep.failures.push_back("source polygon " + std::to_string(p) +
                             " and its image have different sizes");
      continue;
    }
    for (int v = 0; v < sp.size(); ++v) {
      if (!(sp.vertex(v) == tp.vertex(v + im.vertex_shift) + im.translation)) {
        rep.translations_ok = false;
        rep.failures.push_back("source corner " + corner_name(p, v) +
                               " is not the stated translate of its image corner");
        break;
      }
    }
  }

  // (ii) glued edges map to glued edges with consistent translations.  With
  // tau the per-polygon offset (source point u reads as u - tau downstairs),
  // crossing either before or after projecting must agree, which pins
  // tau_q = tau_p + xlat_target(image edge) - xlat_source(edge).
  rep.gluings_ok = rep.translations_ok;
  if (rep.translations_ok) {
    for (const auto& pair : src.gluings()) {
      const EdgeRef a = pair.first;
      const EdgeRef b = pair.second;
      const CoveringMap::PolyImage& ia = m.polygon_map[a.polygon];
      const CoveringMap::PolyImage& ib = m.polygon_map[b.polygon];
      const int ka = tgt.polygon(ia.target_polygon).size();
      const int kb = tgt.polygon(ib.target_polygon).size();
      const EdgeRef image_a{ia.target_polygon, (a.edge + ia.vertex_shift) % ka};
      const EdgeRef image_b{ib.target_polygon, (b.edge + ib.vertex_shift) % kb};
      if (tgt.partner(image_a) != image_b) {
        rep.gluings_ok = false;
        rep.failures.push_back("source edge " + corner_name(a.polygon, a.edge) +
                               " maps across a gluing that does not exist downstairs");
        continue;
      }
      const Point2 want = ia.translation + tgt.crossing_translation(image_a) -
                          src.crossing_translation(a);
      if (!(ib.translation == want)) {
        rep.gluings_ok = false;
        rep.failures.push_back("translation mismatch across source edge " +
                               corner_name(a.polygon, a.edge));
      }
    }
  }

  // (iii) every fiber has exactly `degree` polygons.
  rep.fibers_ok = rep.translations_ok;
  if (rep.translations_ok) {
    std::vector<int> fiber(tgt.num_polygons(), 0);
    for (const auto& im : m.polygon_map) {
      ++fiber[im.target_polygon];
    }
    for (int q = 0; q < tgt.num_polygons(); ++q) {
      if (fiber[q] != m.degree) {
        rep.fibers_ok = false;
        rep.failures.push_back("fiber over target polygon " + std::to_string(q) + " has " +
                               std::to_string(fiber[q]) + " polygons, expected " +
                               std::to_string(m.degree));
      }
    }
  }

  // (iv) balanced: cone points sit over cone points.
  rep.balanced = rep.translations_ok;
  if (rep.translations_ok) {
    for (const auto& cls : src.vertex_classes()) {
      if (!cls.singular()) continue;
      for (const Corner& c : cls.corners) {
        const CoveringMap::PolyImage& im = m.polygon_map[c.polygon];
        const int k = tgt.polygon(im.target_polygon).size();
        const Corner down{im.target_polygon, (c.vertex + im.vertex_shift) % k};
        if (!tgt.vertex_classes()[tgt.vertex_class_of(down)].singular()) {
          rep.balanced = false;
          rep.failures.push_back("cone point corner " + corner_name(c.polygon, c.vertex) +
                                 " maps to a regular point");
        }
      }
    }
  }

  return rep;
}

namespace {

/// Chart-level description of the point reflection on one polygon: the
/// reflected polygon equals polygon `q` shifted by `shift` and translated.
struct ChartImage {
  int q = -1;
  int shift = 0;
  Point2 tau;
};

/// All (q, shift, tau) with reflected == polygon(q) + tau after relabeling
/// vertices by shift.  The reflected list is in ccw order since a point
/// reflection preserves orientation.
std::vector<ChartImage> chart_matches(const Surface& s, const std::vector<Point2>& reflected) {
  std::vector<ChartImage> out;
  const int k = static_cast<int>(reflected.size());
  for (int q = 0; q < s.num_polygons(); ++q) {
    const Polygon& cand = s.polygon(q);
    if (cand.size() != k) continue;
    for (int r = 0; r < k; ++r) {
      ChartImage im;
      im.q = q;
      im.shift = r;
      im.tau = reflected[0] - cand.vertex(r);
      bool all = true;
      for (int v = 1; v < k; ++v) {
        if (!(reflected[v] == cand.vertex(v + r) + im.tau)) {
          all = false;
          break;
        }
      }
      if (all) out.push_back(im);
    }
  }
  return out;
}

bool strictly_inside(const Polygon& poly, const Point2& z) {
  for (int i = 0; i < poly.size(); ++i) {
    if (sign(cross(poly.edge_vector(i), z - poly.vertex(i))) <= 0) return false;
  }
  return true;
}

/// Fixed points of the chart-level reflection `assign`, one entry per surface
/// point.  `aliases` additionally receives every chart coordinate of every
/// fixed point (both sides of a fixed edge, every corner of a fixed vertex
/// class), which membership tests need.
std::vector<std::pair<int, Point2>> fixed_points_of(
    const Surface& s, const std::vector<ChartImage>& assign, const Point2& center,
    std::vector<std::pair<int, Point2>>* aliases) {
  std::vector<std::pair<int, Point2>> out;
  const Rational half(1, 2);

  // Interior fixed points: a polygon mapped onto itself fixes z with
  // 2c - z - tau = z, and the point counts only when strictly inside.
  for (int p = 0; p < s.num_polygons(); ++p) {
    if (assign[p].q != p) continue;
    const Point2 z = center - half * assign[p].tau;
    if (strictly_inside(s.polygon(p), z)) {
      out.emplace_back(p, z);
      aliases->emplace_back(p, z);
    }
  }

  // Edge fixed points: an unoriented edge carried to itself is inverted (the
  // oriented image has the opposite direction), fixing exactly its midpoint.
  for (const auto& pair : s.gluings()) {
    const EdgeRef a = pair.first;
    const EdgeRef b = pair.second;
    const int k = s.polygon(a.polygon).size();
    const EdgeRef image_a{assign[a.polygon].q, (a.edge + assign[a.polygon].shift) % k};
    const EdgeRef image_back = s.partner(image_a);
    const bool same =
        (image_a == a && image_back == b) || (image_a == b && image_back == a);
    if (!same) continue;
    const Polygon& pa = s.polygon(a.polygon);
    const Polygon& pb = s.polygon(b.polygon);
    out.emplace_back(a.polygon, half * (pa.vertex(a.edge) + pa.vertex(a.edge + 1)));
    aliases->push_back(out.back());
    aliases->emplace_back(b.polygon, half * (pb.vertex(b.edge) + pb.vertex(b.edge + 1)));
  }

  // Vertex fixed points: a vertex class carried to itself.
  const auto& classes = s.vertex_classes();
  for (size_t ci = 0; ci < classes.size(); ++ci) {
    const Corner c = classes[ci].corners.front();
    const int k = s.polygon(c.polygon).size();
    const Corner down{assign[c.polygon].q, (c.vertex + assign[c.polygon].shift) % k};
    if (s.vertex_class_of(down) != static_cast<int>(ci)) continue;
    out.emplace_back(c.polygon, s.polygon(c.polygon).vertex(c.vertex));
    for (const Corner& cc : classes[ci].corners) {
      aliases->emplace_back(cc.polygon, s.polygon(cc.polygon).vertex(cc.vertex));
    }
  }
  return out;
}

}  // namespace

InvolutionReport verify_involution(const Surface& s, const Point2& center) {
  const int np = s.num_polygons();
  const Point2 two_c = center + center;

  std::vector<std::vector<Point2>> reflected(np);
  for (int p = 0; p < np; ++p) {
    const Polygon& poly = s.polygon(p);
    for (int v = 0; v < poly.size(); ++v) {
      reflected[p].push_back(two_c - poly.vertex(v));
    }
  }

  InvolutionReport rep;

  // Petals of one prism net can be translates of each other, so the chart
  // image of polygon 0 need not be unique; try every candidate seed and
  // propagate it across the gluing graph.  Crossing a source edge then
  // reflecting must match reflecting then crossing the image edge, which
  // forces the neighbor's chart image completely.
  const std::vector<ChartImage> seeds = chart_matches(s, reflected[0]);
  if (seeds.empty()) {
    rep.witness = "no polygon matches the reflection of polygon 0";
    return rep;
  }

  std::string last_witness;
  bool some_automorphism = false;
  for (const ChartImage& seed : seeds) {
    std::vector<ChartImage> asg(np);
    std::vector<char> have(np, 0);
    asg[0] = seed;
    have[0] = 1;
    std::deque<int> queue{0};
    bool ok = true;
    while (ok && !queue.empty()) {
      const int p = queue.front();
      queue.pop_front();
      const ChartImage& ap = asg[p];
      const int k = s.polygon(p).size();
      for (int e = 0; e < k && ok; ++e) {
        const EdgeRef se{p, e};
        const EdgeRef sp = s.partner(se);
        const EdgeRef ie{ap.q, (e + ap.shift) % k};
        const EdgeRef ip = s.partner(ie);
        const int kn = s.polygon(sp.polygon).size();
        if (s.polygon(ip.polygon).size() != kn) {
          ok = false;
          last_witness = "reflection maps edge " + corner_name(p, e) +
                         " across incompatible polygons";
          break;
        }
        ChartImage want;
        want.q = ip.polygon;
        want.shift = ((ip.edge - sp.edge) % kn + kn) % kn;
        want.tau = ap.tau + s.crossing_translation(se) + s.crossing_translation(ie);
        if (have[sp.polygon]) {
          if (asg[sp.polygon].q != want.q || asg[sp.polygon].shift != want.shift ||
              !(asg[sp.polygon].tau == want.tau)) {
            ok = false;
            last_witness = "inconsistent chart images forced across edge " + corner_name(p, e);
          }
          continue;
        }
        const Polygon& cand = s.polygon(want.q);
        bool match = true;
        for (int v = 0; v < kn; ++v) {
          if (!(reflected[sp.polygon][v] == cand.vertex(v + want.shift) + want.tau)) {
            match = false;
            break;
          }
        }
        if (!match) {
          ok = false;
          last_witness = "reflection of polygon " + std::to_string(sp.polygon) +
                         " does not land on its forced image";
          break;
        }
        asg[sp.polygon] = want;
        have[sp.polygon] = 1;
        queue.push_back(sp.polygon);
      }
    }
    if (!ok) continue;
    for (int p = 0; p < np && ok; ++p) {
      if (!have[p]) {
        ok = false;
        last_witness = "surface is not connected";
      }
    }
    // Closure: applying the reflection twice is the identity on charts.
    for (int p = 0; p < np && ok; ++p) {
      const ChartImage& a = asg[p];
      const ChartImage& b = asg[a.q];
      if (b.q != p || !(b.tau == a.tau)) {
        ok = false;
        last_witness = "chart images do not square to the identity at polygon " +
                       std::to_string(p);
      }
    }
    if (!ok) continue;
    some_automorphism = true;

    // Matching each reflected polygon up to translation absorbs any change
    // of center into the taus, so a consistent assignment only proves that
    // some reflection is an automorphism.  The given center is the right one
    // exactly when its own surface point is fixed; two distinct reflections
    // cannot fix the same point (their composite would be a fixed-point-free
    // translation), so at most one seed survives this gate.
    std::vector<std::pair<int, Point2>> aliases;
    std::vector<std::pair<int, Point2>> fixed = fixed_points_of(s, asg, center, &aliases);
    bool center_fixed = false;
    for (const auto& [p, z] : aliases) {
      if (z == center) {
        center_fixed = true;
        break;
      }
    }
    if (!center_fixed) continue;

    rep.is_involution = true;
    rep.fixed_points = std::move(fixed);
    rep.fixed_point_count = static_cast<int>(rep.fixed_points.size());
    return rep;
  }

  rep.witness = some_automorphism
                    ? "no reflection fixing the given center is an automorphism"
                    : last_witness;
  return rep;
}

FieldElement expected_reciprocal_modulus(int n) {
  if (n < 3) throw std::invalid_argument("expected_reciprocal_modulus requires n >= 3");
  if (n == 4) {
    throw std::invalid_argument("the square prism surface has no such cylinder");
  }
  const FieldSpecPtr spec = prism_field(n);
  const FieldElement one = FieldElement::one(spec);
  if (n % 4 == 0) {
    return one + trig_element(TrigKind::kCot, 1, n, spec);
  }
  if (n % 2 == 0) {
    const FieldElement cot = trig_element(TrigKind::kCot, 1, n, spec);
    return (one + cot + cot * cot) * Rational(2);
  }
  const FieldElement cot = trig_element(TrigKind::kCot, 1, 2 * n, spec);
  const FieldElement sin = trig_element(TrigKind::kSin, 1, 2 * n, spec);
  return (cot + (sin * sin + sin * sin).inverse()) * Rational(2);
}

LatticeObstruction lattice_obstruction(int n) {
  if (n < 3) throw std::invalid_argument("lattice_obstruction requires n >= 3");
  LatticeObstruction ob;
  ob.n = n;

  if (n == 4) {
    const Surface s = build_unfolding(4);
    ob.label = s.label();
    SquareTiledWitness w;
    w.scaling = Rational(2);
    for (int p = 0; p < s.num_polygons(); ++p) {
      const Polygon& poly = s.polygon(p);
      for (int e = 0; e < poly.size(); ++e) {
        const Point2 v = w.scaling * poly.edge_vector(e);
        const auto hx = v.x.as_rational();
        const auto hy = v.y.as_rational();
        if (!hx || !hy || hx->get_den() != 1 || hy->get_den() != 1) {
          throw SurfaceError("square prism edge holonomy failed to scale to integers");
        }
        w.holonomies.emplace_back(hx->get_num().get_si(), hy->get_num().get_si());
      }
    }
    ob.square_tiled_witness = std::move(w);
    return ob;
  }

  const Surface s = (n % 2 != 0) ? build_pi(n) : build_pi_h(n);
  ob.label = s.label();
  const double bound = 2 * drawing_diameter(s);
  const std::vector<Cylinder> cyls = cylinders_in_direction(s, Direction::kHorizontal, bound);

  const FieldElement one = FieldElement::one(s.spec());
  const FieldElement expected = expected_reciprocal_modulus(n);
  for (const Cylinder& cyl : cyls) {
    if (!ob.cylinder_a && sign(cyl.circumference - one) == 0 && sign(cyl.height - one) == 0) {
      ob.cylinder_a = cyl;
    }
    if (!ob.cylinder_b && sign(cyl.circumference - expected * cyl.height) == 0) {
      ob.cylinder_b = cyl;
    }
  }
  if (!ob.cylinder_a || !ob.cylinder_b) {
    throw SurfaceError("horizontal decomposition of " + ob.label +
                       " is missing an expected cylinder");
  }
  ob.moduli_ratio = ob.cylinder_a->modulus / ob.cylinder_b->modulus;
  ob.ratio_is_irrational = !ob.moduli_ratio.as_rational().has_value();
  return ob;
}

namespace {

EnumerationPolicy budgeted_policy(double length_bound, long budget) {
  EnumerationPolicy policy;
  policy.length_bound = length_bound;
  if (budget > 0) policy.max_developed_polygons = budget;
  return policy;
}

}  // namespace

long connection_count(const Surface& s, double length_bound, long budget) {
  if (!finite_positive(length_bound)) {
    throw std::invalid_argument("connection_count requires a positive finite bound");
  }
  const EnumerationPolicy policy = budgeted_policy(length_bound, budget);
  return static_cast<long>(enumerate_saddle_connections(s, policy).size());
}

std::vector<long> connection_counts(const Surface& s, const std::vector<double>& bounds,
                                    long budget) {
  if (bounds.empty()) return {};
  for (double b : bounds) {
    if (!finite_positive(b)) {
      throw std::invalid_argument("connection_counts requires positive finite bounds");
    }
  }
  const EnumerationPolicy policy =
      budgeted_policy(*std::max_element(bounds.begin(), bounds.end()), budget);
  const std::vector<SaddleConnection> list = enumerate_saddle_connections(s, policy);
  std::vector<long> out;
  out.reserve(bounds.size());
  for (double b : bounds) {
    out.push_back(count_within(list, squared_bound(s.spec(), b)));
  }
  return out;
}

CountReport counting_report(const Surface& s, double l_max, int grid_size) {
  if (!std::isfinite(l_max) || l_max <= 1) {
    throw std::invalid_argument("counting_report requires l_max > 1");
  }
  if (grid_size < 1) {
    throw std::invalid_argument("counting_report requires a positive grid");
  }

  EnumerationPolicy policy;
  policy.length_bound = l_max;
  const std::vector<SaddleConnection> list = enumerate_saddle_connections(s, policy);

  CountReport rep;
  rep.label = s.label();
  rep.area = approx_double(s.area());
  const double pi_sq = std::numbers::pi * std::numbers::pi;

  for (int i = 1; i <= grid_size; ++i) {
    const double l = l_max * i / grid_size;
    const long count = count_within(list, squared_bound(s.spec(), l));
    rep.lengths.push_back(l);
    rep.counts.push_back(count);
    rep.quadratic_ratio.push_back(count / (l * l));

    // A(L) = (1/L) int_0^L N(e^t) e^(-2t) dt at L = ln l: each connection of
    // length l_j <= l contributes (e^(-2 max(ln l_j, 0)) - l^-2) / 2.
    const double big_l = std::log(l);
    if (big_l <= 0) {
      rep.emm_average.push_back(0);
      rep.sv_estimate.push_back(0);
      continue;
    }
    double sum = 0;
    for (long j = 0; j < count; ++j) {
      const double lj = list[j].length;
      sum += (std::min(1.0, 1.0 / (lj * lj)) - 1.0 / (l * l)) / 2;
    }
    const double avg = sum / big_l;
    rep.emm_average.push_back(avg);
    rep.sv_estimate.push_back(rep.area * avg / pi_sq);
  }
  return rep;
}

long prism_count(int n, double length_bound) {
  if (n < 3) throw std::invalid_argument("prism_count requires n >= 3");
  const long total = connection_count(build_unfolding(n), length_bound);
  if (total % n != 0) {
    throw SurfaceError("unfolding count " + std::to_string(total) +
                       " is not divisible by the covering degree " + std::to_string(n));
  }
  return total / n;
}

std::string count_report_to_csv(const CountReport& rep) {
  std::string out = "L,N,N/L^2,A(L),c_hat(L)\n";
  char buf[200];
  for (size_t i = 0; i < rep.lengths.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12g,%ld,%.12g,%.12g,%.12g\n", rep.lengths[i],
                  rep.counts[i], rep.quadratic_ratio[i], rep.emm_average[i],
                  rep.sv_estimate[i]);
    out += buf;
  }
  return out;
}

std::string count_report_to_json_string(const CountReport& rep) {
  detail::Json j;
  j["label"] = rep.label;
  j["area"] = rep.area;
  j["L"] = rep.lengths;
  j["N"] = rep.counts;
  j["N_over_L2"] = rep.quadratic_ratio;
  j["A"] = rep.emm_average;
  j["c_hat"] = rep.sv_estimate;
  return j.dump(2) + "\n";
}

namespace {

detail::Json cylinder_json(const Cylinder& cyl) {
  detail::Json j;
  j["direction"] = cyl.direction == Direction::kHorizontal ? "horizontal" : "vertical";
  j["circumference"] = detail::value_with_approx(cyl.circumference);
  j["height"] = detail::value_with_approx(cyl.height);
  j["modulus"] = detail::value_with_approx(cyl.modulus);
  return j;
}

}  // namespace

std::string lattice_obstruction_to_json_string(const LatticeObstruction& ob) {
  detail::Json j;
  j["n"] = ob.n;
  j["label"] = ob.label;
  j["ratio_is_irrational"] = ob.ratio_is_irrational;
  if (ob.cylinder_a) j["cylinder_a"] = cylinder_json(*ob.cylinder_a);
  if (ob.cylinder_b) j["cylinder_b"] = cylinder_json(*ob.cylinder_b);
  if (ob.cylinder_a && ob.cylinder_b) {
    j["moduli_ratio"] = detail::value_with_approx(ob.moduli_ratio);
  }
  if (ob.square_tiled_witness) {
    detail::Json w;
    w["scaling"] = ob.square_tiled_witness->scaling.get_str();
    detail::Json hol = detail::Json::array();
    for (const auto& [hx, hy] : ob.square_tiled_witness->holonomies) {
      hol.push_back(detail::Json::array({hx, hy}));
    }
    w["holonomies"] = std::move(hol);
    j["square_tiled_witness"] = std::move(w);
  }
  return j.dump(2) + "\n";
}

std::string cylinders_to_json_string(const std::vector<Cylinder>& cylinders) {
  detail::Json j = detail::Json::array();
  for (const Cylinder& cyl : cylinders) j.push_back(cylinder_json(cyl));
  return j.dump(2) + "\n";
}

std::string involution_report_to_json_string(const InvolutionReport& rep) {
  detail::Json j;
  j["is_involution"] = rep.is_involution;
  j["fixed_point_count"] = rep.fixed_point_count;
  detail::Json pts = detail::Json::array();
  for (const auto& [polygon, pos] : rep.fixed_points) {
    detail::Json p;
    p["polygon"] = polygon;
    p["x"] = detail::value_with_approx(pos.x);
    p["y"] = detail::value_with_approx(pos.y);
    pts.push_back(std::move(p));
  }
  j["fixed_points"] = std::move(pts);
  if (!rep.witness.empty()) j["witness"] = rep.witness;
  return j.dump(2) + "\n";
}

std::string covering_report_to_json_string(const CoveringMap& map,
                                           const CoveringReport& rep) {
  detail::Json j;
  j["source"] = map.source ? map.source->label() : "";
  j["target"] = map.target ? map.target->label() : "";
  j["degree"] = map.degree;
  j["verified"] = rep.ok();
  detail::Json checks;
  checks["translations"] = rep.translations_ok;
  checks["gluings"] = rep.gluings_ok;
  checks["fibers"] = rep.fibers_ok;
  checks["balanced"] = rep.balanced;
  j["checks"] = std::move(checks);
  if (!rep.failures.empty()) j["failures"] = rep.failures;
  return j.dump(2) + "\n";
}

}  // namespace prismflats
