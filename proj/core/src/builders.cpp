#include "prismflats/builders.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace prismflats {

FieldSpecPtr prism_field(int n) {
  if (n < 3) throw std::invalid_argument("prism surfaces need n >= 3");
  return FieldSpec::get(std::lcm(4, 2 * n));
}

namespace {

// Shared exact scaffolding of one net: center vertices v, edge vectors e,
// outward normals u, edge midpoints m, and their images w, mb under the
// 180-degree rotation sigma about the stem center (0, -1/2).
struct NetFrame {
  int n;
  FieldSpecPtr spec;
  std::vector<Point2> v, e, u, m, w, mb;

  Point2 sigma(const Point2& p) const {
    return Point2(-p.x, FieldElement::from_rational(spec, Rational(-1)) - p.y);
  }
};

NetFrame make_frame(int n) {
  NetFrame f;
  f.n = n;
  f.spec = prism_field(n);
  const FieldElement one = FieldElement::one(f.spec);
  const FieldElement zero = FieldElement::zero(f.spec);
  const Point2 east(one, zero);
  Point2 cur(FieldElement::from_rational(f.spec, Rational(-1, 2)), zero);
  for (int j = 0; j < n; ++j) {
    const Point2 ej = rotation(f.spec, j, n).apply(east);
    f.v.push_back(cur);
    f.e.push_back(ej);
    f.u.push_back(Point2(ej.y, -ej.x));
    f.m.push_back(cur + Rational(1, 2) * ej);
    cur += ej;
  }
  for (int j = 0; j < n; ++j) {
    f.w.push_back(f.sigma(f.v[j]));
    f.mb.push_back(f.sigma(f.m[j]));
  }
  return f;
}

Polygon center_gon(const NetFrame& f) { return Polygon{f.v}; }

Polygon base_gon(const NetFrame& f) { return Polygon{f.w}; }

Polygon petal(const NetFrame& f, int j) {
  const int jn = (j + 1) % f.n;
  return Polygon{{f.v[j] + f.u[j], f.v[jn] + f.u[j], f.v[jn], f.v[j]}};
}

Polygon petal_left(const NetFrame& f, int j) {
  return Polygon{{f.v[j] + f.u[j], f.m[j] + f.u[j], f.m[j], f.v[j]}};
}

Polygon petal_right(const NetFrame& f, int j) {
  const int jn = (j + 1) % f.n;
  return Polygon{{f.m[j] + f.u[j], f.v[jn] + f.u[j], f.v[jn], f.m[j]}};
}

// 2n-gon tracing the center with each edge midpoint as a straight vertex.
Polygon center_gon2(const NetFrame& f) {
  Polygon p;
  for (int j = 0; j < f.n; ++j) {
    p.vertices.push_back(f.v[j]);
    p.vertices.push_back(f.m[j]);
  }
  return p;
}

Polygon base_gon2(const NetFrame& f) {
  Polygon p;
  for (int j = 0; j < f.n; ++j) {
    p.vertices.push_back(f.w[j]);
    p.vertices.push_back(f.mb[j]);
  }
  return p;
}

// Conservative integer upper bound for the net's diameter, from the float
// embeddings; only used to space the unfolding's copies apart.
int net_diameter_bound(const NetFrame& f) {
  double lo_x = 0, hi_x = 0, lo_y = 0, hi_y = 0;
  auto take = [&](const Point2& p) {
    const auto [x, y] = approx_point(p);
    lo_x = std::min(lo_x, x);
    hi_x = std::max(hi_x, x);
    lo_y = std::min(lo_y, y);
    hi_y = std::max(hi_y, y);
  };
  for (int j = 0; j < f.n; ++j) {
    take(f.v[j]);
    take(f.v[j] + f.u[j]);
    take(f.w[j]);
  }
  return static_cast<int>(std::ceil(std::hypot(hi_x - lo_x, hi_y - lo_y))) + 1;
}

using GluingList = std::vector<std::pair<EdgeRef, EdgeRef>>;

}  // namespace

std::vector<Polygon> NetLayout::all_polygons() const {
  std::vector<Polygon> out;
  out.push_back(center);
  for (const Polygon& p : petals) out.push_back(p);
  out.push_back(base);
  return out;
}

NetLayout build_net(int n) {
  const NetFrame f = make_frame(n);
  NetLayout net;
  net.n = n;
  net.spec = f.spec;
  net.center = center_gon(f);
  for (int j = 0; j < n; ++j) net.petals.push_back(petal(f, j));
  net.stem_index = 0;
  net.base = base_gon(f);
  return net;
}

Surface build_pi(int n) {
  const NetFrame f = make_frame(n);
  std::vector<Polygon> polys;
  polys.push_back(center_gon(f));
  for (int j = 0; j < n; ++j) polys.push_back(petal(f, j));
  polys.push_back(base_gon(f));
  GluingList glue;
  for (int j = 0; j < n; ++j) {
    glue.push_back({{0, j}, {1 + j, 2}});          // center edge to its petal
    glue.push_back({{1 + j, 1}, {1 + j, 3}});      // petal sides to each other
    glue.push_back({{1 + j, 0}, {n + 1, j}});      // petal outer to base edge
  }
  return Surface("pi(" + std::to_string(n) + ")", f.spec, std::move(polys), std::move(glue));
}

Surface build_unfolding(int n) {
  const NetFrame f = make_frame(n);
  const Rational spacing(3 * net_diameter_bound(f));
  std::vector<Polygon> polys;
  GluingList glue;
  const auto idx = [n](int k, int p) { return k * (n + 2) + p; };
  for (int k = 0; k < n; ++k) {
    const Mat2 rot = rotation(f.spec, k, n);
    const Point2 shift(FieldElement::from_rational(f.spec, spacing * k),
                       FieldElement::zero(f.spec));
    polys.push_back(translate(transform(center_gon(f), rot), shift));
    for (int j = 0; j < n; ++j) polys.push_back(translate(transform(petal(f, j), rot), shift));
    polys.push_back(translate(transform(base_gon(f), rot), shift));
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      glue.push_back({{idx(k, 0), i}, {idx(k, 1 + i), 2}});
      // Inner rule: left side of petal i meets the right side of petal i-1
      // one copy over.
      glue.push_back({{idx(k, 1 + i), 3}, {idx((k + 1) % n, 1 + (i + n - 1) % n), 1}});
      // Outer rule: petal i meets base edge (n-i) mod n, 2i copies over.
      glue.push_back({{idx(k, 1 + i), 0}, {idx((k + 2 * i) % n, n + 1), (n - i) % n}});
    }
  }
  return Surface("unfolding(" + std::to_string(n) + ")", f.spec, std::move(polys),
                 std::move(glue));
}

Surface build_pi_h(int n) {
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("pih requires even n");
  const NetFrame f = make_frame(n);
  std::vector<Polygon> polys;
  polys.push_back(center_gon2(f));
  for (int j = 0; j < n; ++j) polys.push_back(petal_right(f, j));
  GluingList glue;
  const int h = n / 2;
  for (int j = 0; j < n; ++j) {
    glue.push_back({{0, 2 * j + 1}, {1 + j, 2}});            // outer half of center edge
    glue.push_back({{0, 2 * j}, {1 + (j + h) % n, 0}});      // inner half to opposite outer
  }
  for (int j = 0; j < h; ++j) {
    glue.push_back({{1 + j, 1}, {1 + j + h, 1}});
    glue.push_back({{1 + j, 3}, {1 + j + h, 3}});
  }
  return Surface("pih(" + std::to_string(n) + ")", f.spec, std::move(polys), std::move(glue));
}

Surface build_pi_subdivided(int n) {
  const NetFrame f = make_frame(n);
  std::vector<Polygon> polys;
  polys.push_back(center_gon2(f));
  for (int j = 0; j < n; ++j) polys.push_back(petal_left(f, j));
  for (int j = 0; j < n; ++j) polys.push_back(petal_right(f, j));
  polys.push_back(base_gon2(f));
  GluingList glue;
  const auto L = [](int j) { return 1 + j; };
  const auto R = [n](int j) { return 1 + n + j; };
  const int b2 = 2 * n + 1;
  for (int j = 0; j < n; ++j) {
    glue.push_back({{0, 2 * j}, {L(j), 2}});
    glue.push_back({{0, 2 * j + 1}, {R(j), 2}});
    glue.push_back({{L(j), 1}, {R(j), 3}});      // midline cut rejoined
    glue.push_back({{R(j), 1}, {L(j), 3}});      // petal sides to each other
    glue.push_back({{L(j), 0}, {b2, 2 * j + 1}});
    glue.push_back({{R(j), 0}, {b2, 2 * j}});
  }
  return Surface("pi(" + std::to_string(n) + ") subdivided", f.spec, std::move(polys),
                 std::move(glue));
}

Surface build_unfolding_subdivided(int n) {
  const NetFrame f = make_frame(n);
  const Rational spacing(3 * net_diameter_bound(f));
  std::vector<Polygon> polys;
  GluingList glue;
  const int block = 2 * n + 2;
  const auto L = [block](int j, int k) { return k * block + 1 + j; };
  const auto R = [block, n](int j, int k) { return k * block + 1 + n + j; };
  const auto C2 = [block](int k) { return k * block; };
  const auto B2 = [block, n](int k) { return k * block + 2 * n + 1; };
  for (int k = 0; k < n; ++k) {
    const Mat2 rot = rotation(f.spec, k, n);
    const Point2 shift(FieldElement::from_rational(f.spec, spacing * k),
                       FieldElement::zero(f.spec));
    polys.push_back(translate(transform(center_gon2(f), rot), shift));
    for (int j = 0; j < n; ++j) polys.push_back(translate(transform(petal_left(f, j), rot), shift));
    for (int j = 0; j < n; ++j) {
      polys.push_back(translate(transform(petal_right(f, j), rot), shift));
    }
    polys.push_back(translate(transform(base_gon2(f), rot), shift));
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      glue.push_back({{C2(k), 2 * i}, {L(i, k), 2}});
      glue.push_back({{C2(k), 2 * i + 1}, {R(i, k), 2}});
      glue.push_back({{L(i, k), 1}, {R(i, k), 3}});
      glue.push_back({{L(i, k), 3}, {R((i + n - 1) % n, (k + 1) % n), 1}});
      const int kk = (k + 2 * i) % n;
      const int jj = (n - i) % n;
      glue.push_back({{L(i, k), 0}, {B2(kk), 2 * jj + 1}});
      glue.push_back({{R(i, k), 0}, {B2(kk), 2 * jj}});
    }
  }
  return Surface("unfolding(" + std::to_string(n) + ") subdivided", f.spec, std::move(polys),
                 std::move(glue));
}

std::optional<CoveringMap::PolyImage> translate_match(const Polygon& src, const Polygon& tgt) {
  if (src.size() != tgt.size()) return std::nullopt;
  for (int s = 0; s < src.size(); ++s) {
    const Point2 t = src.vertex(0) - tgt.vertex(s);
    bool all = true;
    for (int i = 1; i < src.size() && all; ++i) {
      if (src.vertex(i) != tgt.vertex(i + s) + t) all = false;
    }
    if (all) return CoveringMap::PolyImage{-1, s, t};
  }
  return std::nullopt;
}

namespace {

CoveringMap make_map(std::shared_ptr<const Surface> source, std::shared_ptr<const Surface> target,
                     int degree, const std::function<int(int)>& target_index) {
  CoveringMap map;
  map.source = std::move(source);
  map.target = std::move(target);
  map.degree = degree;
  std::vector<int> fiber(map.target->num_polygons(), 0);
  for (int sp = 0; sp < map.source->num_polygons(); ++sp) {
    const int tp = target_index(sp);
    auto img = translate_match(map.source->polygon(sp), map.target->polygon(tp));
    if (!img) {
      throw SurfaceError(map.source->label() + " -> " + map.target->label() +
                         ": source polygon " + std::to_string(sp) +
                         " is not a translate of target polygon " + std::to_string(tp));
    }
    img->target_polygon = tp;
    map.polygon_map.push_back(*img);
    ++fiber[tp];
  }
  for (int tp = 0; tp < map.target->num_polygons(); ++tp) {
    if (fiber[tp] != degree) {
      throw SurfaceError(map.source->label() + " -> " + map.target->label() + ": fiber over " +
                         std::to_string(tp) + " has size " + std::to_string(fiber[tp]));
    }
  }
  map.balanced = true;
  for (const VertexClass& cls : map.source->vertex_classes()) {
    if (!cls.singular()) continue;
    const Corner c = cls.corners.front();
    const CoveringMap::PolyImage& img = map.polygon_map[c.polygon];
    const int k = map.target->polygon(img.target_polygon).size();
    const Corner image{img.target_polygon, (c.vertex + img.vertex_shift) % k};
    if (!map.target->vertex_classes()[map.target->vertex_class_of(image)].singular()) {
      map.balanced = false;
    }
  }
  return map;
}

}  // namespace

std::vector<CoveringMap> covering_maps(int n) {
  if (n < 3) throw std::invalid_argument("prism surfaces need n >= 3");
  std::vector<CoveringMap> maps;
  const auto unf = std::make_shared<const Surface>(build_unfolding(n));
  const auto pi = std::make_shared<const Surface>(build_pi(n));
  maps.push_back(make_map(unf, pi, n, [n](int sp) {
    const int k = sp / (n + 2);
    const int p = sp % (n + 2);
    if (p == 0 || p == n + 1) return p;
    return 1 + (p - 1 + k) % n;
  }));
  if (n % 2 == 0) {
    const auto pih = std::make_shared<const Surface>(build_pi_h(n));
    const auto pis = std::make_shared<const Surface>(build_pi_subdivided(n));
    const int h = n / 2;
    maps.push_back(make_map(pis, pih, 2, [n, h](int sp) {
      if (sp == 0 || sp == 2 * n + 1) return 0;       // center and base 2n-gons
      if (sp <= n) return 1 + (sp - 1 + h) % n;       // left halves, opposite petal
      return 1 + (sp - 1 - n);                        // right halves, same petal
    }));
    const auto unfs = std::make_shared<const Surface>(build_unfolding_subdivided(n));
    const int block = 2 * n + 2;
    maps.push_back(make_map(unfs, pih, 2 * n, [n, h, block](int sp) {
      const int k = sp / block;
      const int p = sp % block;
      if (p == 0 || p == 2 * n + 1) return 0;
      if (p <= n) return 1 + (p - 1 + k + h) % n;
      return 1 + (p - 1 - n + k) % n;
    }));
  }
  return maps;
}

Point2 stem_center(const FieldSpecPtr& spec) {
  return Point2(FieldElement::zero(spec),
                FieldElement::from_rational(spec, Rational(-1, 2)));
}

LayerAngles layer_angles(int n, int j) {
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("layer angles need odd n >= 3");
  const int j_max = n == 3 ? 1 : (n % 4 == 3 ? (n - 3) / 2 : (n - 1) / 2 - 1);
  if (j < 1 || j > j_max) {
    throw std::invalid_argument("layer index out of range 1.." + std::to_string(j_max) +
                                " for n=" + std::to_string(n));
  }
  Rational beta(2 * j - 1, n);
  Rational delta(n - 2 * j - 1, n);
  beta.canonicalize();
  delta.canonicalize();
  return LayerAngles{beta, delta};
}

}  // namespace prismflats
