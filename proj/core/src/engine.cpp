#include "prismflats/engine.hpp"

#include "engine_internal.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace prismflats {
namespace {

constexpr double kScaleFloor = 1e-300;
constexpr double kTraceTol = 1e-9;
constexpr long kTraceStepCap = 1000000;

struct FloatV {
  double x = 0;
  double y = 0;
};

inline double fcross(FloatV a, FloatV b) { return a.x * b.y - a.y * b.x; }
inline double fdot(FloatV a, FloatV b) { return a.x * b.x + a.y * b.y; }
inline double fnorm(FloatV a) { return std::hypot(a.x, a.y); }
inline double l1(FloatV a) { return std::abs(a.x) + std::abs(a.y); }

// Screen scale for a cross product.  Each argument's float error is absolute,
// proportional to the magnitude context it was computed in (a developed
// vertex is only accurate to the size of its translation, however close to
// the origin it lands), so the scale must be built from those contexts and
// never from the product terms themselves: a vanishing term would shrink the
// scale to the value and turn the screen into a tautology.
inline double cross_screen_scale(FloatV a, double mag_a, FloatV b, double mag_b) {
  return l1(a) * mag_b + mag_a * l1(b) + kScaleFloor;
}

// Sign of an exactly representable quantity: the float value decides when it
// clears the screen, otherwise the exact value is consulted.
template <typename ExactFn>
int sign_screened(double value, double scale, double tol, ExactFn&& exact_value) {
  if (std::abs(value) > tol * scale) return value > 0 ? 1 : -1;
  return sign(exact_value());
}

// Compare the fractions a = na/da and b = nb/db without dividing.
int compare_fractions(const FieldElement& na, const FieldElement& da, const FieldElement& nb,
                      const FieldElement& db) {
  const int sa = sign(da);
  const int sb = sign(db);
  if (sa == 0 || sb == 0) throw SurfaceError("degenerate fraction in ray trace");
  return sign(na * db - nb * da) * sa * sb;
}

}  // namespace

namespace detail {

std::vector<int> cone_point_ids(const Surface& s) {
  std::vector<int> ids(s.vertex_classes().size(), -1);
  int next = 0;
  for (std::size_t c = 0; c < s.vertex_classes().size(); ++c) {
    if (s.vertex_classes()[c].singular()) ids[c] = next++;
  }
  return ids;
}

bool corner_arc_contains(const Surface& s, const Corner& c, const Point2& dir) {
  const Polygon& poly = s.polygon(c.polygon);
  const Point2 out = poly.edge_vector(c.vertex);
  const int s1 = sign(cross(out, dir));
  if (s1 < 0) return false;
  if (s1 == 0) return sign(dot(out, dir)) > 0;
  const Point2 in_rev = -poly.edge_vector(c.vertex - 1);
  return sign(cross(dir, in_rev)) > 0;
}

namespace {

// One exit candidate from the current polygon, kept as an exact fraction
// s = num/den of the ray parameter so comparisons never divide.
struct ExitCand {
  double s_f = 0;
  double s_err = 0;  // absolute error bound on s_f
  int edge = -1;
  int vertex = -1;  // exit vertex index; -1 for an interior edge crossing
  bool collinear = false;
  bool need_s_check = false;  // float s within screen of the entry parameter
  bool need_r_check = false;  // float r within screen of 0 or 1
  bool exact_ready = false;
  FieldElement num;
  FieldElement den;
};

struct TraceState {
  int poly = -1;
  Point2 t;  // exact developed translation of the current polygon
  FloatV t_f;
  // how the ray touches the current polygon
  bool at_vertex = true;
  int touch_index = 0;  // vertex or edge index
  double s_f = 0;       // float ray parameter of that touch
  double s_err = 0;     // absolute error bound on s_f
};

}  // namespace

RayOutcome trace_ray(const Surface& s, const Corner& start, const Point2& dir, double max_length,
                     std::vector<RaySegment>* segments) {
  const FieldSpecPtr& spec = s.spec();
  const auto& fv = s.float_vertices();
  const FloatV dir_f{approx_double(dir.x), approx_double(dir.y)};
  const double dir_len = fnorm(dir_f);
  const double dir_l1 = l1(dir_f) + kScaleFloor;
  const double dd_f = fdot(dir_f, dir_f);
  const FieldElement dd = dot(dir, dir);
  std::vector<double> pmag(s.num_polygons(), -1.0);
  const auto poly_mag = [&](int p) {
    if (pmag[p] < 0) {
      double m = kScaleFloor;
      for (const auto& v : fv[p]) m = std::max(m, std::abs(v.first) + std::abs(v.second));
      pmag[p] = m;
    }
    return pmag[p];
  };
  Rational ml(max_length);
  ml.canonicalize();
  const FieldElement ml2 = FieldElement::from_rational(spec, ml * ml);

  TraceState st;
  st.poly = start.polygon;
  {
    const Polygon& p0 = s.polygon(st.poly);
    st.t = -p0.vertex(start.vertex);
    st.t_f = {-fv[st.poly][p0.index(start.vertex)].first,
              -fv[st.poly][p0.index(start.vertex)].second};
    st.touch_index = p0.index(start.vertex);
  }
  Point2 entry_planar = Point2::zero(spec);  // used only when recording segments

  // Exact entry parameter as a fraction, built on demand.
  std::optional<std::pair<FieldElement, FieldElement>> entry_frac;
  const auto entry_fraction = [&]() -> const std::pair<FieldElement, FieldElement>& {
    if (!entry_frac) {
      const Polygon& poly = s.polygon(st.poly);
      if (st.at_vertex) {
        const Point2 h = st.t + poly.vertex(st.touch_index);
        entry_frac.emplace(dot(h, dir), dd);
      } else {
        const Point2 a = st.t + poly.vertex(st.touch_index);
        const Point2 e = poly.edge_vector(st.touch_index);
        entry_frac.emplace(cross(a, e), cross(dir, e));
      }
    }
    return *entry_frac;
  };

  std::vector<ExitCand> cands;
  for (long steps = 0; steps < kTraceStepCap; ++steps) {
    const Polygon& poly = s.polygon(st.poly);
    const auto& pv = fv[st.poly];
    const int k = poly.size();
    // every developed coordinate this step is accurate to ~eps * m_ctx
    const double m_ctx = std::abs(st.t_f.x) + std::abs(st.t_f.y) + poly_mag(st.poly);
    cands.clear();

    for (int i = 0; i < k; ++i) {
      if (!st.at_vertex && i == st.touch_index) continue;  // entered through it transversally
      const int j = (i + 1) % k;
      const FloatV a_f{pv[i].first + st.t_f.x, pv[i].second + st.t_f.y};
      const FloatV e_f{pv[j].first - pv[i].first, pv[j].second - pv[i].second};
      const double den_f = fcross(dir_f, e_f);
      if (std::abs(den_f) <= kTraceTol * dir_l1 * m_ctx) {
        const Point2 e_ex = poly.edge_vector(i);
        const FieldElement den_ex = cross(dir, e_ex);
        const Point2 a_ex = st.t + poly.vertex(i);
        if (den_ex.is_zero()) {
          if (!cross(a_ex, dir).is_zero()) continue;  // parallel but off the ray line
          // Travelling along the edge: both endpoints are exact candidates.
          for (int which = 0; which < 2; ++which) {
            const int vi = which == 0 ? i : j;
            ExitCand c;
            c.edge = i;
            c.vertex = vi;
            c.collinear = true;
            c.exact_ready = true;
            const Point2 v_ex = st.t + poly.vertex(vi);
            c.num = dot(v_ex, dir);
            c.den = dd;
            c.s_f = fdot({pv[vi].first + st.t_f.x, pv[vi].second + st.t_f.y}, dir_f) / dd_f;
            c.s_err = kTraceTol * (m_ctx * dir_l1 + std::abs(c.s_f) * dir_l1 * dir_l1) / dd_f;
            c.need_s_check = true;
            cands.push_back(std::move(c));
          }
        } else {
          // Nearly parallel: settle everything exactly.
          ExitCand c;
          c.edge = i;
          c.exact_ready = true;
          c.num = cross(a_ex, e_ex);
          c.den = den_ex;
          const FieldElement r_num = cross(a_ex, dir);
          const int sd = sign(den_ex);
          const int sc = sign(r_num);
          const int sc1 = sign(r_num - den_ex);
          if (!(sc == 0 || sc == sd)) continue;    // r < 0
          if (!(sc1 == 0 || sc1 == -sd)) continue;  // r > 1
          if (sc == 0) c.vertex = i;
          if (sc1 == 0) c.vertex = j;
          c.s_f = approx_double(c.num) / approx_double(c.den);
          c.s_err = std::abs(c.s_f);  // conditioning unknown; order exactly
          c.need_s_check = true;
          cands.push_back(std::move(c));
        }
        continue;
      }
      // r decisions by numerator signs against the denominator sign: a
      // division would lose the error scale.
      const int sden = den_f > 0 ? 1 : -1;
      const double rnum_f = fcross(a_f, dir_f);
      const double r_scale = kTraceTol * m_ctx * dir_l1;
      const bool r0_doubt = std::abs(rnum_f) <= r_scale;
      const bool r1_doubt = std::abs(rnum_f - den_f) <= r_scale;
      if (!r0_doubt && (rnum_f > 0 ? 1 : -1) != sden) continue;             // r < 0
      if (!r1_doubt && (rnum_f - den_f > 0 ? 1 : -1) == sden) continue;     // r > 1
      ExitCand c;
      c.edge = i;
      c.s_f = fcross(a_f, e_f) / den_f;
      c.s_err = kTraceTol * (m_ctx * m_ctx + std::abs(c.s_f) * dir_l1 * m_ctx) / std::abs(den_f);
      const double s_screen = c.s_err + st.s_err + kTraceTol * (1 + std::abs(c.s_f) + std::abs(st.s_f));
      if (c.s_f < st.s_f - s_screen) continue;
      c.need_s_check = c.s_f <= st.s_f + s_screen;
      c.need_r_check = r0_doubt || r1_doubt;
      cands.push_back(std::move(c));
    }

    const auto materialize = [&](ExitCand& c) {
      if (c.exact_ready) return;
      const Point2 a_ex = st.t + poly.vertex(c.edge);
      const Point2 e_ex = poly.edge_vector(c.edge);
      c.num = cross(a_ex, e_ex);
      c.den = cross(dir, e_ex);
      c.exact_ready = true;
    };
    // Validate a candidate, resolving screened decisions exactly.  Returns
    // false when the candidate is behind the entry point or off the edge.
    const auto validate = [&](ExitCand& c) -> bool {
      if (c.need_s_check) {
        materialize(c);
        const auto& ef = entry_fraction();
        if (compare_fractions(c.num, c.den, ef.first, ef.second) <= 0) return false;
        c.need_s_check = false;
      }
      if (c.need_r_check) {
        materialize(c);
        const Point2 a_ex = st.t + poly.vertex(c.edge);
        const FieldElement r_num = cross(a_ex, dir);
        const int sd = sign(c.den);
        const int sc = sign(r_num);
        const int sc1 = sign(r_num - c.den);
        if (!(sc == 0 || sc == sd)) return false;
        if (!(sc1 == 0 || sc1 == -sd)) return false;
        if (sc == 0) c.vertex = c.edge;
        if (sc1 == 0) c.vertex = (c.edge + 1) % k;
        c.need_r_check = false;
      }
      return true;
    };

    std::sort(cands.begin(), cands.end(),
              [](const ExitCand& a, const ExitCand& b) { return a.s_f < b.s_f; });
    int best = -1;
    for (std::size_t ci = 0; ci < cands.size(); ++ci) {
      if (!validate(cands[ci])) continue;
      if (best < 0) {
        best = static_cast<int>(ci);
        continue;
      }
      const double tie_screen = cands[ci].s_err + cands[best].s_err +
                                kTraceTol * (1 + std::abs(cands[ci].s_f) + std::abs(cands[best].s_f));
      if (cands[ci].s_f > cands[best].s_f + tie_screen) break;
      materialize(cands[best]);
      materialize(cands[ci]);
      const int cmp = compare_fractions(cands[ci].num, cands[ci].den, cands[best].num,
                                        cands[best].den);
      // Equal exit parameters name the same vertex; prefer the candidate that
      // knows it is a vertex, then the one that knows the travel was along an
      // edge, so segment reporting keeps the edge identity.
      const bool upgrade =
          cmp == 0 && ((cands[best].vertex < 0 && cands[ci].vertex >= 0) ||
                       (!cands[best].collinear && cands[ci].collinear));
      if (cmp < 0 || upgrade) {
        best = static_cast<int>(ci);
      }
    }
    if (best < 0) throw SurfaceError("ray trace found no exit from a polygon");
    ExitCand chosen = std::move(cands[best]);

    // Beyond the length bound the trace certainly survives: later events only
    // move farther out, and the screen is far wider than float error.
    const double dist_f = chosen.s_f * dir_len;
    if (dist_f > max_length + chosen.s_err * dir_len + kTraceTol * (1 + std::abs(dist_f))) {
      return RayOutcome{};
    }

    if (chosen.vertex >= 0) {
      const Point2 hit = st.t + poly.vertex(chosen.vertex);
      const int cls = s.vertex_class_of({st.poly, chosen.vertex});
      const bool singular = s.vertex_classes()[cls].singular();
      if (singular && sign(dot(hit, hit) - ml2) > 0) return RayOutcome{};
      if (segments) {
        int along = -1;
        if (chosen.collinear) along = chosen.edge;
        segments->push_back(
            {st.poly, entry_planar - st.t, hit - st.t, along});
        entry_planar = hit;
      }
      if (singular) {
        RayOutcome out;
        out.hit = true;
        out.hit_point = hit;
        out.hit_class = cls;
        return out;
      }
      // Regular vertex: rotate around it to the corner whose sector holds the
      // direction, then continue straight through.
      Corner c{st.poly, chosen.vertex};
      Point2 tc = st.t;
      FloatV tc_f = st.t_f;
      const std::size_t corner_count = s.vertex_classes()[cls].corners.size();
      bool contained = false;
      for (std::size_t visit = 0; visit <= corner_count; ++visit) {
        const Polygon& q = s.polygon(c.polygon);
        const Point2 out_dir = q.edge_vector(c.vertex);
        const int s1 = sign(cross(out_dir, dir));
        contained = false;
        if (s1 == 0) {
          contained = sign(dot(out_dir, dir)) > 0;
        } else if (s1 > 0) {
          contained = sign(cross(dir, -q.edge_vector(c.vertex - 1))) > 0;
        }
        if (contained) break;
        const EdgeRef in_edge{c.polygon, q.index(c.vertex - 1)};
        const Point2 shift = s.crossing_translation(in_edge);
        tc += shift;
        const auto shift_f = approx_point(shift);
        tc_f = {tc_f.x + shift_f.first, tc_f.y + shift_f.second};
        c = next_corner_around_vertex(s, c);
      }
      if (!contained) throw SurfaceError("ray trace lost the direction at a regular vertex");
      st.poly = c.polygon;
      st.t = tc;
      st.t_f = tc_f;
      st.at_vertex = true;
      st.touch_index = c.vertex;
      st.s_f = chosen.s_f;
      st.s_err = chosen.s_err;
      entry_frac.reset();
      continue;
    }

    // Interior edge crossing.
    materialize(chosen);
    Point2 exit_planar;
    if (segments) {
      exit_planar = (chosen.num / chosen.den) * dir;
      segments->push_back({st.poly, entry_planar - st.t, exit_planar - st.t, -1});
      entry_planar = exit_planar;
    }
    const EdgeRef crossed{st.poly, chosen.edge};
    const EdgeRef pr = s.partner(crossed);
    const Point2 shift = s.crossing_translation(crossed);
    st.t += shift;
    const auto shift_f = approx_point(shift);
    st.t_f = {st.t_f.x + shift_f.first, st.t_f.y + shift_f.second};
    st.poly = pr.polygon;
    st.at_vertex = false;
    st.touch_index = pr.edge;
    st.s_f = chosen.s_f;
    st.s_err = chosen.s_err;
    entry_frac.reset();
  }
  throw SurfaceError("ray trace exceeded its step budget");
}

}  // namespace detail

namespace {

struct EngineFrame {
  const Surface& s;
  double length_bound;
  double tol;
  double band;
  double in_disk_f2;       // (L + band)^2, float admission radius squared
  FieldElement l2;         // exact L^2
  std::vector<int> cp_of_class;
  std::vector<char> singular;
  std::vector<std::vector<EdgeRef>> partner;
  std::vector<std::vector<Point2>> xlat;
  std::vector<std::vector<FloatV>> xlat_f;
  std::vector<double> poly_mag;  // per polygon, max |x| + |y| over vertices
};

EngineFrame make_frame(const Surface& s, const EnumerationPolicy& pol) {
  Rational lr(pol.length_bound);
  lr.canonicalize();
  EngineFrame f{s,
                pol.length_bound,
                pol.tolerance,
                pol.exact_confirm_band,
                0.0,
                FieldElement::from_rational(s.spec(), lr * lr),
                detail::cone_point_ids(s),
                {},
                {},
                {},
                {},
                {}};
  const double rad = pol.length_bound + pol.exact_confirm_band;
  f.in_disk_f2 = rad * rad;
  f.singular.resize(s.vertex_classes().size());
  for (std::size_t c = 0; c < s.vertex_classes().size(); ++c) {
    f.singular[c] = s.vertex_classes()[c].singular() ? 1 : 0;
  }
  f.partner.resize(s.num_polygons());
  f.xlat.resize(s.num_polygons());
  f.xlat_f.resize(s.num_polygons());
  f.poly_mag.resize(s.num_polygons(), kScaleFloor);
  for (int p = 0; p < s.num_polygons(); ++p) {
    for (const auto& v : s.float_vertices()[p]) {
      f.poly_mag[p] = std::max(f.poly_mag[p], std::abs(v.first) + std::abs(v.second));
    }
    const int k = s.polygon(p).size();
    for (int e = 0; e < k; ++e) {
      f.partner[p].push_back(s.partner({p, e}));
      f.xlat[p].push_back(s.crossing_translation({p, e}));
      const auto ap = approx_point(f.xlat[p][e]);
      f.xlat_f[p].push_back({ap.first, ap.second});
    }
  }
  return f;
}

struct SharedState {
  std::atomic<long> nodes{0};
  std::atomic<bool> cancel{false};
  long budget = 0;
};

void emit_candidate(const EngineFrame& frame, int start_cp, int end_class, const Point2& holonomy,
                    const Corner& corner, std::vector<SaddleConnection>& out) {
  const FieldElement lsq = dot(holonomy, holonomy);
  if (sign(lsq - frame.l2) > 0) return;
  const int sy = sign(holonomy.y);
  if (sy < 0) return;
  if (sy == 0 && sign(holonomy.x) <= 0) return;
  SaddleConnection sc;
  sc.start_cp = start_cp;
  sc.end_cp = frame.cp_of_class[end_class];
  sc.exact_holonomy = holonomy;
  sc.exact_length_sq = lsq;
  sc.dx = approx_double(holonomy.x);
  sc.dy = approx_double(holonomy.y);
  sc.length = std::hypot(sc.dx, sc.dy);
  sc.start_corner = corner;
  out.push_back(std::move(sc));
}

void ray_emit(const EngineFrame& frame, const Corner& corner, const Point2& dir, int start_cp,
              std::vector<SaddleConnection>& out) {
  const auto outcome = detail::trace_ray(frame.s, corner, dir,
                                         frame.length_bound + frame.band, nullptr);
  if (outcome.hit) {
    emit_candidate(frame, start_cp, outcome.hit_class, outcome.hit_point, corner, out);
  }
}

struct WedgeNode {
  int poly = -1;
  Point2 t;
  FloatV t_f;
  Point2 u, w;  // exact open sector boundaries, u counterclockwise to w
  FloatV u_f, w_f;
  double u_mag = 0, w_mag = 0;  // magnitude contexts the boundaries carry
};

// Minimal distance from the origin to segment [a, b] clipped to the sector
// between rays lo and hi.  Conservative: numerical doubt widens the segment.
double gate_min_distance(FloatV a, FloatV b, FloatV lo, FloatV hi) {
  const auto clip_param = [](FloatV ray, FloatV p, FloatV q, double fallback) {
    const double dn = fcross(ray, p) - fcross(ray, q);
    if (dn == 0 || !std::isfinite(dn)) return fallback;
    const double t = fcross(ray, p) / dn;
    if (!std::isfinite(t)) return fallback;
    return std::min(1.0, std::max(0.0, t));
  };
  double qa = 0;
  double qb = 1;
  if (fcross(lo, a) < 0) qa = clip_param(lo, a, b, 0.0);
  if (fcross(b, hi) < 0) qb = clip_param(hi, a, b, 1.0);
  if (qb < qa) std::swap(qa, qb);
  const FloatV a1{a.x + qa * (b.x - a.x), a.y + qa * (b.y - a.y)};
  const FloatV b1{a.x + qb * (b.x - a.x), a.y + qb * (b.y - a.y)};
  const FloatV d{b1.x - a1.x, b1.y - a1.y};
  const double dd = fdot(d, d);
  double tproj = 0;
  if (dd > 0) tproj = std::min(1.0, std::max(0.0, -fdot(a1, d) / dd));
  return std::hypot(a1.x + tproj * d.x, a1.y + tproj * d.y);
}

void run_corner_task(const EngineFrame& frame, int start_cp, const Corner& corner,
                     SharedState& state, std::vector<SaddleConnection>& out) {
  const Surface& s = frame.s;
  const auto& fv = s.float_vertices();
  const Polygon& p0 = s.polygon(corner.polygon);
  const int v0 = p0.index(corner.vertex);
  const int k0 = p0.size();

  const Point2 u0 = p0.edge_vector(v0);
  const Point2 w0 = -p0.edge_vector(v0 - 1);
  ray_emit(frame, corner, u0, start_cp, out);

  const auto edge_float = [&](int p, int i) -> FloatV {
    const auto& pv = fv[p];
    const int kk = s.polygon(p).size();
    const int j = (i + 1) % kk;
    return {pv[j].first - pv[i].first, pv[j].second - pv[i].second};
  };

  std::vector<WedgeNode> stack;
  const Point2 t0 = -p0.vertex(v0);
  const FloatV t0_f{-fv[corner.polygon][v0].first, -fv[corner.polygon][v0].second};
  const FloatV u0_f = edge_float(corner.polygon, v0);
  const FloatV w0_prev = edge_float(corner.polygon, (v0 + k0 - 1) % k0);
  const FloatV w0_f{-w0_prev.x, -w0_prev.y};

  const auto seed = [&](const Point2& u, FloatV u_f, const Point2& w, FloatV w_f) {
    WedgeNode n;
    n.poly = corner.polygon;
    n.t = t0;
    n.t_f = t0_f;
    n.u = u;
    n.u_f = u_f;
    n.w = w;
    n.w_f = w_f;
    n.u_mag = l1(u_f);
    n.w_mag = l1(w_f);
    stack.push_back(std::move(n));
  };

  const int suw = sign(cross(u0, w0));
  if (suw > 0) {
    seed(u0, u0_f, w0, w0_f);
  } else if (suw == 0) {
    // Straight corner inside a singular class: split the half-plane sector at
    // the perpendicular and trace that boundary direction separately.
    const Point2 r(-u0.y, u0.x);
    const FloatV r_f{-u0_f.y, u0_f.x};
    ray_emit(frame, corner, r, start_cp, out);
    seed(u0, u0_f, r, r_f);
    seed(r, r_f, w0, w0_f);
  } else {
    throw SurfaceError("corner sector exceeds a half-plane");
  }

  std::vector<double> wx, wy;
  std::vector<int> after_u, before_w;
  std::vector<char> have_ex;
  std::vector<Point2> ex;

  while (!stack.empty()) {
    if (state.cancel.load(std::memory_order_relaxed)) return;
    WedgeNode node = std::move(stack.back());
    stack.pop_back();
    if (state.nodes.fetch_add(1, std::memory_order_relaxed) + 1 > state.budget) {
      state.cancel.store(true, std::memory_order_relaxed);
      throw EnumerationIncompleteError(
          "saddle connection enumeration ran out of its polygon budget before covering every "
          "sector; the listing would be incomplete");
    }
    const Polygon& poly = s.polygon(node.poly);
    const auto& pv = fv[node.poly];
    const int k = poly.size();
    wx.assign(k, 0);
    wy.assign(k, 0);
    after_u.assign(k, 0);
    before_w.assign(k, 0);
    have_ex.assign(k, 0);
    ex.assign(k, Point2());
    const auto vertex_ex = [&](int i) -> const Point2& {
      if (!have_ex[i]) {
        ex[i] = node.t + poly.vertex(i);
        have_ex[i] = 1;
      }
      return ex[i];
    };

    const double m_ctx = std::abs(node.t_f.x) + std::abs(node.t_f.y) + frame.poly_mag[node.poly];
    for (int i = 0; i < k; ++i) {
      wx[i] = pv[i].first + node.t_f.x;
      wy[i] = pv[i].second + node.t_f.y;
      const FloatV w_i{wx[i], wy[i]};
      after_u[i] = sign_screened(fcross(node.u_f, w_i),
                                 cross_screen_scale(node.u_f, node.u_mag, w_i, m_ctx), frame.tol,
                                 [&] { return cross(node.u, vertex_ex(i)); });
      before_w[i] = sign_screened(fcross(w_i, node.w_f),
                                  cross_screen_scale(w_i, m_ctx, node.w_f, node.w_mag), frame.tol,
                                  [&] { return cross(vertex_ex(i), node.w); });
      if (after_u[i] > 0 && before_w[i] > 0) {
        const double d2 = wx[i] * wx[i] + wy[i] * wy[i];
        if (d2 <= frame.in_disk_f2) {
          const Point2& w_ex = vertex_ex(i);
          if (w_ex.x.is_zero() && w_ex.y.is_zero()) continue;
          const int cls = s.vertex_class_of({node.poly, i});
          if (frame.singular[cls]) {
            emit_candidate(frame, start_cp, cls, w_ex, corner, out);
          } else {
            // The sector splits here; the ray through this regular vertex
            // continues straight beyond it.
            ray_emit(frame, corner, w_ex, start_cp, out);
          }
        }
      }
    }

    for (int i = 0; i < k; ++i) {
      const int j = (i + 1) % k;
      const FloatV a{wx[i], wy[i]};
      const FloatV b{wx[j], wy[j]};
      const int sab = sign_screened(fcross(a, b), cross_screen_scale(a, m_ctx, b, m_ctx),
                                    frame.tol,
                                    [&] { return cross(vertex_ex(i), vertex_ex(j)); });
      if (sab <= 0) continue;  // gate-side or radial edge
      const bool tighten_lo = after_u[i] > 0;
      const bool tighten_hi = before_w[j] > 0;
      const FloatV lo_f = tighten_lo ? a : node.u_f;
      const FloatV hi_f = tighten_hi ? b : node.w_f;
      const double lo_mag = tighten_lo ? m_ctx : node.u_mag;
      const double hi_mag = tighten_hi ? m_ctx : node.w_mag;
      const int svalid =
          sign_screened(fcross(lo_f, hi_f), cross_screen_scale(lo_f, lo_mag, hi_f, hi_mag),
                        frame.tol, [&] {
            return cross(tighten_lo ? vertex_ex(i) : node.u, tighten_hi ? vertex_ex(j) : node.w);
          });
      if (svalid <= 0) continue;
      if (gate_min_distance(a, b, lo_f, hi_f) > frame.length_bound + frame.band) continue;
      WedgeNode child;
      const EdgeRef pr = frame.partner[node.poly][i];
      child.poly = pr.polygon;
      child.t = node.t + frame.xlat[node.poly][i];
      child.t_f = {node.t_f.x + frame.xlat_f[node.poly][i].x,
                   node.t_f.y + frame.xlat_f[node.poly][i].y};
      child.u = tighten_lo ? vertex_ex(i) : node.u;
      child.u_f = lo_f;
      child.u_mag = lo_mag;
      child.w = tighten_hi ? vertex_ex(j) : node.w;
      child.w_f = hi_f;
      child.w_mag = hi_mag;
      stack.push_back(std::move(child));
    }
  }
}

bool lex_less(const FieldElement& a, const FieldElement& b) {
  const auto& ac = a.coeffs();
  const auto& bc = b.coeffs();
  for (std::size_t i = 0; i < ac.size(); ++i) {
    if (ac[i] != bc[i]) return ac[i] < bc[i];
  }
  return false;
}

bool sc_less(const SaddleConnection& a, const SaddleConnection& b) {
  if (a.length != b.length) return a.length < b.length;
  const double aa = std::atan2(a.dy, a.dx);
  const double ba = std::atan2(b.dy, b.dx);
  if (aa != ba) return aa < ba;
  if (a.start_cp != b.start_cp) return a.start_cp < b.start_cp;
  if (a.end_cp != b.end_cp) return a.end_cp < b.end_cp;
  if (a.exact_holonomy.x != b.exact_holonomy.x) {
    return lex_less(a.exact_holonomy.x, b.exact_holonomy.x);
  }
  if (a.exact_holonomy.y != b.exact_holonomy.y) {
    return lex_less(a.exact_holonomy.y, b.exact_holonomy.y);
  }
  return a.start_corner < b.start_corner;
}

int worker_count(std::size_t tasks) {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("PRISMFLATS_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v < hw) hw = static_cast<int>(v);
  }
  if (static_cast<std::size_t>(hw) > tasks) hw = static_cast<int>(tasks);
  return hw < 1 ? 1 : hw;
}

}  // namespace

std::vector<int> cone_point_classes(const Surface& s) {
  std::vector<int> out;
  for (std::size_t c = 0; c < s.vertex_classes().size(); ++c) {
    if (s.vertex_classes()[c].singular()) out.push_back(static_cast<int>(c));
  }
  return out;
}

std::vector<SaddleConnection> enumerate_saddle_connections(const Surface& s,
                                                           const EnumerationPolicy& policy) {
  if (!(policy.length_bound > 0) || !std::isfinite(policy.length_bound)) {
    throw std::invalid_argument("enumeration: length bound must be positive and finite");
  }
  if (!(policy.tolerance > 0) || !(policy.exact_confirm_band > policy.tolerance) ||
      !(policy.length_bound > policy.exact_confirm_band)) {
    throw std::invalid_argument(
        "enumeration: need 0 < tolerance < exact_confirm_band < length bound");
  }
  if (policy.max_developed_polygons < 1) {
    throw std::invalid_argument("enumeration: polygon budget must be at least 1");
  }

  const EngineFrame frame = make_frame(s, policy);
  struct Task {
    int cp;
    Corner corner;
  };
  std::vector<Task> tasks;
  for (std::size_t c = 0; c < s.vertex_classes().size(); ++c) {
    if (!s.vertex_classes()[c].singular()) continue;
    for (const Corner& corner : s.vertex_classes()[c].corners) {
      tasks.push_back({frame.cp_of_class[c], corner});
    }
  }

  SharedState state;
  state.budget = policy.max_developed_polygons;
  std::vector<std::vector<SaddleConnection>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> incomplete{false};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      if (state.cancel.load(std::memory_order_relaxed)) return;
      try {
        run_corner_task(frame, tasks[i].cp, tasks[i].corner, state, results[i]);
      } catch (const EnumerationIncompleteError&) {
        incomplete.store(true);
        state.cancel.store(true);
        return;
      } catch (...) {
        {
          const std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
        state.cancel.store(true);
        return;
      }
    }
  };

  const int nthreads = worker_count(tasks.size());
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads - 1; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  if (incomplete.load()) {
    throw EnumerationIncompleteError(
        "saddle connection enumeration ran out of its polygon budget before covering every "
        "sector; the listing would be incomplete");
  }

  std::vector<SaddleConnection> all;
  for (auto& r : results) {
    for (auto& sc : r) all.push_back(std::move(sc));
  }
  std::sort(all.begin(), all.end(), sc_less);
  return all;
}

TraceResult trace_separatrix(const Surface& s, const Corner& corner, const Point2& direction,
                             double max_length) {
  if (corner.polygon < 0 || corner.polygon >= s.num_polygons()) {
    throw std::invalid_argument("trace: corner polygon out of range");
  }
  if (corner.vertex < 0 || corner.vertex >= s.polygon(corner.polygon).size()) {
    throw std::invalid_argument("trace: corner vertex out of range");
  }
  if (direction.x.is_zero() && direction.y.is_zero()) {
    throw std::invalid_argument("trace: direction must be nonzero");
  }
  if (!(max_length > 0) || !std::isfinite(max_length)) {
    throw std::invalid_argument("trace: max_length must be positive and finite");
  }
  if (!detail::corner_arc_contains(s, corner, direction)) {
    throw std::invalid_argument("trace: direction is not in the corner's sector");
  }
  const auto outcome = detail::trace_ray(s, corner, direction, max_length, nullptr);
  TraceResult res;
  res.hit = outcome.hit;
  if (outcome.hit) {
    res.exact_distance_sq = dot(outcome.hit_point, outcome.hit_point);
    res.distance = std::sqrt(std::max(0.0, approx_double(res.exact_distance_sq)));
    res.end_cp = detail::cone_point_ids(s)[outcome.hit_class];
  }
  return res;
}

int count_unit_saddle_connections(const Surface& s, Direction dir) {
  const UnitCounts counts = unit_saddle_connection_counts(s);
  return dir == Direction::kHorizontal ? counts.horizontal : counts.vertical;
}

UnitCounts unit_saddle_connection_counts(const Surface& s) {
  EnumerationPolicy policy;
  policy.length_bound = 1.0;
  const auto list = enumerate_saddle_connections(s, policy);
  const FieldElement one = FieldElement::one(s.spec());
  UnitCounts counts;
  for (const auto& sc : list) {
    if (sc.exact_length_sq != one) continue;
    if (sc.exact_holonomy.y.is_zero()) {
      ++counts.horizontal;
    } else if (sc.exact_holonomy.x.is_zero()) {
      ++counts.vertical;
    }
  }
  counts.total = counts.horizontal + counts.vertical;
  return counts;
}

std::string saddle_connections_to_csv(const std::vector<SaddleConnection>& list) {
  std::string out = "length,dx,dy,start_cp,end_cp\n";
  char buf[160];
  for (const auto& sc : list) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%d,%d\n", sc.length, sc.dx, sc.dy,
                  sc.start_cp, sc.end_cp);
    out += buf;
  }
  return out;
}

}  // namespace prismflats
