#pragma once
// Planar primitives: segments and distances, piecewise-affine curves with
// affine tails, the piecewise-affine bilipschitz certificate, empirical
// bilipschitz estimation, gluing verifiers, and curve-side classification.

#include <algorithm>
#include <functional>
#include <optional>
#include <sstream>

#include "bilip/common.hpp"

namespace bilip {

struct Segment {
  Pt a, b;
  bool degenerate() const { return a == b; }
};

// ---------------------------------------------------------------------------
// distances (exact up to floating point)

inline double point_segment_distance(Pt p, const Segment& s) {
  Pt d = s.b - s.a;
  double n2 = norm2(d);
  if (n2 == 0) return dist(p, s.a);
  double t = dot(p - s.a, d) / n2;
  t = std::clamp(t, 0.0, 1.0);
  return dist(p, s.a + t * d);
}

namespace detail {
inline int orient(Pt a, Pt b, Pt c) {
  double v = cross(b - a, c - a);
  return (v > 0) - (v < 0);
}
inline bool on_segment_collinear(Pt a, Pt b, Pt p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}
}  // namespace detail

inline bool segments_intersect(const Segment& s, const Segment& t) {
  using detail::orient;
  int o1 = orient(s.a, s.b, t.a), o2 = orient(s.a, s.b, t.b);
  int o3 = orient(t.a, t.b, s.a), o4 = orient(t.a, t.b, s.b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && detail::on_segment_collinear(s.a, s.b, t.a)) return true;
  if (o2 == 0 && detail::on_segment_collinear(s.a, s.b, t.b)) return true;
  if (o3 == 0 && detail::on_segment_collinear(t.a, t.b, s.a)) return true;
  if (o4 == 0 && detail::on_segment_collinear(t.a, t.b, s.b)) return true;
  return false;
}

inline double segment_segment_distance(const Segment& s, const Segment& t) {
  if (segments_intersect(s, t)) return 0.0;
  double d = point_segment_distance(s.a, t);
  d = std::min(d, point_segment_distance(s.b, t));
  d = std::min(d, point_segment_distance(t.a, s));
  d = std::min(d, point_segment_distance(t.b, s));
  return d;
}

// ---------------------------------------------------------------------------
// Polyline: a piecewise-affine map R -> R^2, stored on a finite breakpoint
// range with two affine tails. The window is the parameter interval over
// which verification quantifiers run; tails beyond the window are handled
// analytically where needed (side classification, far-pair growth).

struct Polyline {
  std::vector<double> breakpoints;  // strictly increasing, size == vertices
  std::vector<Pt> vertices;
  std::array<Pt, 2> tails{Pt{1, 0}, Pt{1, 0}};  // d(gamma)/dt before/after range
  Interval window{0, 0};

  size_t n() const { return breakpoints.size(); }

  void validate() const {
    if (breakpoints.size() != vertices.size() || breakpoints.size() < 2)
      fail("BadPolyline", "need |breakpoints| == |vertices| >= 2");
    for (size_t i = 0; i + 1 < breakpoints.size(); ++i)
      if (!(breakpoints[i] < breakpoints[i + 1]))
        fail("BadPolyline", "breakpoints not strictly increasing at index " + std::to_string(i));
    for (const Pt& v : vertices)
      if (!finite(v)) fail("BadPolyline", "non-finite vertex");
  }

  static Polyline through(std::vector<double> ts, std::vector<Pt> vs) {
    Polyline c;
    c.breakpoints = std::move(ts);
    c.vertices = std::move(vs);
    c.validate();
    size_t m = c.n();
    c.tails[0] = (c.vertices[1] - c.vertices[0]) / (c.breakpoints[1] - c.breakpoints[0]);
    c.tails[1] = (c.vertices[m - 1] - c.vertices[m - 2]) /
                 (c.breakpoints[m - 1] - c.breakpoints[m - 2]);
    c.window = {c.breakpoints.front(), c.breakpoints.back()};
    return c;
  }

  Pt eval(double t) const {
    const auto& bp = breakpoints;
    if (t <= bp.front()) return vertices.front() + (t - bp.front()) * tails[0];
    if (t >= bp.back()) return vertices.back() + (t - bp.back()) * tails[1];
    size_t hi = size_t(std::upper_bound(bp.begin(), bp.end(), t) - bp.begin());
    size_t lo = hi - 1;
    double u = (t - bp[lo]) / (bp[hi] - bp[lo]);
    return vertices[lo] + u * (vertices[hi] - vertices[lo]);
  }

  // Pieces covering the window; tails clipped at the window edge. Each entry
  // carries its parameter interval.
  struct Piece {
    Interval param;
    Segment seg;
  };
  std::vector<Piece> window_pieces() const {
    std::vector<Piece> out;
    double lo = std::min(window.lo, breakpoints.front());
    double hi = std::max(window.hi, breakpoints.back());
    if (lo < breakpoints.front())
      out.push_back({{lo, breakpoints.front()}, {eval(lo), vertices.front()}});
    for (size_t i = 0; i + 1 < n(); ++i)
      out.push_back({{breakpoints[i], breakpoints[i + 1]}, {vertices[i], vertices[i + 1]}});
    if (hi > breakpoints.back())
      out.push_back({{breakpoints.back(), hi}, {vertices.back(), eval(hi)}});
    return out;
  }

  // Min distance from p to the full curve: window pieces plus the two
  // unbounded tail rays, handled analytically.
  double distance_to(Pt p) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& pc : window_pieces())
      best = std::min(best, point_segment_distance(p, pc.seg));
    // tail rays beyond the covered range
    double lo = std::min(window.lo, breakpoints.front());
    double hi = std::max(window.hi, breakpoints.back());
    for (int side = 0; side < 2; ++side) {
      Pt base = eval(side == 0 ? lo : hi);
      Pt dir = (side == 0 ? -1.0 : 1.0) * tails[size_t(side)];
      double n2 = norm2(dir);
      if (n2 == 0) {
        best = std::min(best, dist(p, base));
        continue;
      }
      double t = std::max(0.0, dot(p - base, dir) / n2);
      best = std::min(best, dist(p, base + t * dir));
    }
    return best;
  }
};

// ---------------------------------------------------------------------------
// side classification by vertical-ray crossing parity

enum class Side { Below, Above, OnCurve };

inline const char* to_string(Side s) {
  switch (s) {
    case Side::Below: return "Below";
    case Side::Above: return "Above";
    default: return "OnCurve";
  }
}

// Requires tails with nonzero first-coordinate direction (the curve sweeps
// monotonically to x = +-inf far out); every curve built here satisfies it.
inline Side side_classify(const Polyline& c, Pt p, double tol = EPS) {
  if (c.distance_to(p) < tol) return Side::OnCurve;
  // Count crossings of the upward ray {p.x} x (p.y, inf) with the curve.
  // Rule: a piece with endpoint x-values (x1, x2) crosses the vertical line
  // iff (x1 <= p.x) != (x2 <= p.x); infinite ends take x = +-inf.
  long crossings = 0;
  auto add_piece = [&](Pt a, Pt b, double xa, double xb) {
    bool la = xa <= p.x, lb = xb <= p.x;
    if (la == lb) return;
    // y at p.x along the (possibly unbounded) line through a,b
    double y = a.y + (b.y - a.y) * ((p.x - a.x) / (b.x - a.x));
    if (y > p.y) ++crossings;
  };
  double lo = std::min(c.window.lo, c.breakpoints.front());
  double hi = std::max(c.window.hi, c.breakpoints.back());
  for (const auto& pc : c.window_pieces()) add_piece(pc.seg.a, pc.seg.b, pc.seg.a.x, pc.seg.b.x);
  // tails: replace the far endpoint by a point far along the ray, x by +-inf
  {
    Pt base = c.eval(lo), dir = c.tails[0];
    if (dir.x == 0) fail("BadTail", "left tail has zero x-direction");
    Pt far = base - 1.0 * dir;  // direction only matters via x sign
    add_piece(base, far, base.x, dir.x > 0 ? -std::numeric_limits<double>::infinity()
                                           : std::numeric_limits<double>::infinity());
    base = c.eval(hi);
    dir = c.tails[1];
    if (dir.x == 0) fail("BadTail", "right tail has zero x-direction");
    far = base + 1.0 * dir;
    add_piece(base, far, base.x, dir.x > 0 ? std::numeric_limits<double>::infinity()
                                           : -std::numeric_limits<double>::infinity());
  }
  return (crossings % 2 != 0) ? Side::Below : Side::Above;
}

// ---------------------------------------------------------------------------
// empirical bilipschitz estimation (seeded, stratified near/far pairs);
// the sampled maxima are lower bounds for the true constants.

struct BilipEstimate {
  double lip_up = 0;    // max ||f(x)-f(y)|| / ||x-y||
  double lip_down = 0;  // max ||x-y|| / ||f(x)-f(y)||
  long samples = 0;
  uint64_t seed = 0;
  double worst() const { return std::max(lip_up, lip_down); }
};

template <class F, class Sampler>
BilipEstimate empirical_bilip(F&& f, Sampler&& sample, long n, uint64_t seed,
                              double near_scale) {
  if (n < 2) fail("BadSampleCount", "need n >= 2");
  Rng rng(seed);
  BilipEstimate est;
  est.seed = seed;
  long degenerate = 0;
  for (long i = 0; i < n; ++i) {
    Vec x = sample(rng);
    Vec y;
    if (i % 2 == 0) {
      y = sample(rng);
    } else {  // near pair: violations concentrate at corners and seams
      Vec d = rng.unit_dird(x.d);
      double r = near_scale * rng.uniform(1e-3, 1.0);
      y = x + r * d;
    }
    double dxy = dist(x, y);
    if (dxy < 1e-12) {
      if (++degenerate > n / 4 + 8) fail("DegenerateSample", "sampler keeps colliding");
      continue;
    }
    double dff = dist(f(x), f(y));
    est.lip_up = std::max(est.lip_up, dff / dxy);
    if (dff > 0) est.lip_down = std::max(est.lip_down, dxy / dff);
    ++est.samples;
  }
  return est;
}

inline BilipEstimate empirical_bilip_curve(const Polyline& c, long n, uint64_t seed) {
  double min_gap = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i + 1 < c.n(); ++i)
    min_gap = std::min(min_gap, c.breakpoints[i + 1] - c.breakpoints[i]);
  double lo = c.window.lo, hi = c.window.hi;
  auto sampler = [&](Rng& r) {
    Vec v = Vec::zero(1);  // parameter domain is one-dimensional
    v[0] = r.uniform(lo, hi);
    return v;
  };
  auto f = [&](const Vec& t) { return Vec(c.eval(t[0])); };
  // near pairs at the scale of the shortest segment
  return empirical_bilip(f, sampler, n, seed, std::max(min_gap, 1e-9));
}

// ---------------------------------------------------------------------------
// piecewise-affine bilipschitz certificate

struct PwAffCertificate {
  double C = 1, alpha = 0;
  double bound = 0;  // 4C^2 / sqrt(1 - cos alpha)
  bool speed_ok = false, buffer_ok = false, far_ok = false, angle_ok = false;
  std::string witness;  // first violation, if any
  bool valid() const { return speed_ok && buffer_ok && far_ok && angle_ok; }
};

inline double pwaff_bound(double C, double alpha) {
  double ca = std::cos(alpha);
  if (std::abs(ca) < 1e-15) ca = 0;  // keep the alpha = pi/2 bound exactly 4C^2
  return 4 * C * C / std::sqrt(1 - ca);
}

struct PwAffOptions {
  long far_samples = 4000;
  uint64_t seed = 1;
  double slack = 1e-12;  // numerical slack on the exact inequalities
};

inline PwAffCertificate pwaff_certificate(const Polyline& curve, double C, double alpha,
                                          PwAffOptions opt = {}) {
  if (!(alpha > 0 && alpha < PI)) fail("InvalidAlpha", "alpha must lie in (0,pi)");
  if (!(C >= 1)) fail("InvalidC", "C must be >= 1");
  curve.validate();
  PwAffCertificate cert;
  cert.C = C;
  cert.alpha = alpha;
  cert.bound = pwaff_bound(C, alpha);
  auto note = [&](const std::string& w) {
    if (cert.witness.empty()) cert.witness = w;
  };

  auto pieces = curve.window_pieces();
  const double lo = pieces.front().param.lo, hi = pieces.back().param.hi;

  // (a) speed on every piece and on the tails
  cert.speed_ok = true;
  auto speed_of = [](const Polyline::Piece& pc) {
    return dist(pc.seg.a, pc.seg.b) / pc.param.len();
  };
  for (const auto& pc : pieces) {
    double v = speed_of(pc);
    if (v < 1 / C - opt.slack || v > C + opt.slack) {
      cert.speed_ok = false;
      note("speed " + std::to_string(v) + " at t=" + std::to_string(pc.param.lo));
      break;
    }
  }
  for (int side = 0; side < 2 && cert.speed_ok; ++side) {
    double v = norm(curve.tails[size_t(side)]);
    if (v < 1 / C - opt.slack || v > C + opt.slack) {
      cert.speed_ok = false;
      note(std::string("tail speed ") + std::to_string(v));
    }
  }

  // (b) non-adjacent pieces stay 1/C apart: sweep over x so only pairs that
  // could be closer than 1/C are tested exactly.
  cert.buffer_ok = true;
  {
    const double theta = 1 / C;
    struct Item {
      double xmin, xmax;
      size_t idx;
    };
    std::vector<Item> items(pieces.size());
    for (size_t i = 0; i < pieces.size(); ++i) {
      const Segment& s = pieces[i].seg;
      items[i] = {std::min(s.a.x, s.b.x), std::max(s.a.x, s.b.x), i};
    }
    std::sort(items.begin(), items.end(),
              [](const Item& a, const Item& b) { return a.xmin < b.xmin; });
    std::vector<size_t> active;
    for (size_t k = 0; k < items.size() && cert.buffer_ok; ++k) {
      active.erase(std::remove_if(active.begin(), active.end(),
                                  [&](size_t j) { return items[j].xmax < items[k].xmin - theta; }),
                   active.end());
      for (size_t j : active) {
        size_t a = items[j].idx, b = items[k].idx;
        if (a > b) std::swap(a, b);
        if (b - a < 2) continue;  // adjacent or same
        double d = segment_segment_distance(pieces[a].seg, pieces[b].seg);
        if (d < theta - opt.slack) {
          cert.buffer_ok = false;
          note("pieces " + std::to_string(a) + "," + std::to_string(b) + " at distance " +
               std::to_string(d));
          break;
        }
      }
      active.push_back(k);
    }
  }

  // (c) far pairs: |t2-t1| >= C must imply ||g(t2)-g(t1)|| >= |t2-t1|/C.
  // Sampled over an extended window; beyond the extension the two tail
  // directions dominate, so we first bound the asymptotic growth rate.
  cert.far_ok = true;
  {
    Pt dl = curve.tails[0], dr = curve.tails[1];
    // min over s in [0,1] of ||s*dr + (1-s)*dl|| (convex quadratic in s)
    double m;
    {
      Pt dd = dr - dl;
      double s = norm2(dd) > 0 ? std::clamp(-dot(dl, dd) / norm2(dd), 0.0, 1.0) : 0.0;
      m = norm(dl + s * dd);
    }
    // monotone progress: a fixed direction u with velocity.u >= 1/C on every
    // piece and tail certifies the far-pair condition for all real pairs
    auto progress_along = [&](Pt u) {
      double nu = norm(u);
      if (nu == 0) return false;
      u = u / nu;
      for (const auto& pc : pieces) {
        Pt v = (pc.seg.b - pc.seg.a) / pc.param.len();
        if (dot(v, u) < 1 / C - opt.slack) return false;
      }
      return dot(dl, u) >= 1 / C - opt.slack && dot(dr, u) >= 1 / C - opt.slack;
    };
    double diam = 0;
    for (const auto& pc : pieces)
      diam = std::max(diam, std::max(norm(pc.seg.a), norm(pc.seg.b)));
    double W = hi - lo;
    double ext;
    bool monotone = progress_along(Pt{1, 0}) || progress_along(dl + dr);
    if (monotone) {
      ext = C + W;  // nothing left to justify; sample a little anyway
    } else if (m > 1 / C + 1e-9) {
      ext = (2 * diam + (W + 2 * C) / C) / (m - 1 / C) + C + W;
    } else {
      cert.far_ok = false;
      note("tail directions give no linear growth margin");
      ext = C + W;
    }
    ext = std::min(ext, 1e7 * std::max(1.0, W));
    Rng rng(opt.seed);
    for (long i = 0; i < opt.far_samples && cert.far_ok; ++i) {
      double t1 = rng.uniform(lo - ext, hi + ext);
      double t2 = rng.uniform(lo - ext, hi + ext);
      if (std::abs(t2 - t1) < C) {
        t2 = t1 + (t2 >= t1 ? C : -C);  // push to the boundary case
      }
      double lhs = dist(curve.eval(t1), curve.eval(t2));
      if (lhs < std::abs(t2 - t1) / C - opt.slack) {
        cert.far_ok = false;
        note("far pair t1=" + std::to_string(t1) + " t2=" + std::to_string(t2));
      }
    }
  }

  // (angle) interior vertex angles, tails acting as extra segments; a
  // straight continuation counts as angle pi.
  cert.angle_ok = true;
  {
    std::vector<Pt> pts;
    pts.push_back(curve.vertices.front() - 1.0 * curve.tails[0]);
    pts.insert(pts.end(), curve.vertices.begin(), curve.vertices.end());
    pts.push_back(curve.vertices.back() + 1.0 * curve.tails[1]);
    for (size_t i = 1; i + 1 < pts.size() && cert.angle_ok; ++i) {
      Pt u = pts[i - 1] - pts[i], w = pts[i + 1] - pts[i];
      double nu = norm(u), nw = norm(w);
      if (nu == 0 || nw == 0) continue;  // degenerate: no constraint
      double cosang = std::clamp(dot(u, w) / (nu * nw), -1.0, 1.0);
      double ang = std::acos(cosang);
      if (ang < alpha - opt.slack) {
        cert.angle_ok = false;
        note("vertex " + std::to_string(i - 1) + " angle " + std::to_string(ang));
      }
    }
  }
  return cert;
}

// Throwing form: callers that need a valid certificate get the witness in
// the error message.
inline PwAffCertificate pwaff_require(const Polyline& curve, double C, double alpha,
                                      PwAffOptions opt = {}) {
  PwAffCertificate cert = pwaff_certificate(curve, C, alpha, opt);
  if (!cert.valid()) fail("CheckFailed", cert.witness);
  return cert;
}

// ---------------------------------------------------------------------------
// gluing bounds and checker

// Lip bounds for a map glued across a theta-separated seam with jump K.
inline std::pair<double, double> glue_bound_brute(double L, double K, double theta) {
  if (!(L >= 1)) fail("BadArgument", "L >= 1 required");
  if (!(K > 0) || !(theta > 0)) fail("BadArgument", "K, theta > 0 required");
  return {3 * L + 2 * K, L * (1 + (K + 1) / theta)};
}

struct FiniteMap {
  std::vector<std::pair<Vec, Vec>> graph;  // (domain point, value)
};

struct GlueCheck {
  double C = 1;        // minimal observed witness constant
  size_t pairs = 0;    // cross pairs examined
};

// Verifies the gluing-lemma witness: for every x in dom f1, y in dom f2 the
// selected z lies in both domains and ||x-z||+||y-z|| <= C||x-y|| for the
// reported C (the max over pairs). f1,f2 must agree where domains meet.
template <class ZSel>
GlueCheck glue_lip_check(const FiniteMap& f1, const FiniteMap& f2, ZSel&& z_of) {
  auto find_in = [](const FiniteMap& f, const Vec& p) -> const Vec* {
    for (const auto& [q, v] : f.graph)
      if (dist(q, p) < EPS) return &v;
    return nullptr;
  };
  for (const auto& [x, v] : f1.graph)
    if (const Vec* w = find_in(f2, x); w && dist(*w, v) > EPS)
      fail("WellDefinednessError", "f1,f2 disagree on a shared domain point");
  GlueCheck out;
  for (const auto& [x, vx] : f1.graph) {
    for (const auto& [y, vy] : f2.graph) {
      if (dist(x, y) < EPS) continue;
      Vec z = z_of(x, y);
      if (!find_in(f1, z) || !find_in(f2, z))
        fail("MissingZ", "selector returned a point outside dom f1 and dom f2");
      double c = (dist(x, z) + dist(y, z)) / dist(x, y);
      out.C = std::max(out.C, c);
      ++out.pairs;
    }
  }
  return out;
}

// Selector-free variant: per cross pair pick the best z from the shared
// domain, return the worst-case ratio (the minimal C making the lemma apply).
inline GlueCheck glue_lip_check(const FiniteMap& f1, const FiniteMap& f2) {
  std::vector<Vec> shared;
  for (const auto& [q, v] : f1.graph) {
    for (const auto& [p, w] : f2.graph) {
      if (dist(q, p) < EPS) {
        if (dist(v, w) > EPS)
          fail("WellDefinednessError", "f1,f2 disagree on a shared domain point");
        shared.push_back(q);
      }
    }
  }
  if (shared.empty()) fail("MissingZ", "domains do not meet");
  GlueCheck out;
  for (const auto& [x, vx] : f1.graph) {
    for (const auto& [y, vy] : f2.graph) {
      double dxy = dist(x, y);
      if (dxy < EPS) continue;
      double best = std::numeric_limits<double>::infinity();
      for (const Vec& z : shared) best = std::min(best, (dist(x, z) + dist(y, z)) / dxy);
      out.C = std::max(out.C, best);
      ++out.pairs;
    }
  }
  return out;
}

}  // namespace bilip
