#include <gtest/gtest.h>

#include "bilip/geom.hpp"
#include "bilip/separation.hpp"

using namespace bilip;

namespace {
Segment seg(double ax, double ay, double bx, double by) {
  return Segment{{ax, ay}, {bx, by}};
}
double seg_diam(const Segment& s) { return dist(s.a, s.b); }
}  // namespace

// ---------------------------------------------------------------------------
// distances

TEST(Distances, PointSegment) {
  EXPECT_DOUBLE_EQ(point_segment_distance({0, 1}, seg(-1, 0, 1, 0)), 1.0);
  EXPECT_DOUBLE_EQ(point_segment_distance({2, 0}, seg(-1, 0, 1, 0)), 1.0);
  EXPECT_DOUBLE_EQ(point_segment_distance({3, 4}, seg(0, 0, 0, 0)), 5.0);
}

TEST(Distances, SegmentSegment) {
  EXPECT_DOUBLE_EQ(segment_segment_distance(seg(0, 0, 1, 0), seg(0, 1, 1, 1)), 1.0);
  EXPECT_DOUBLE_EQ(segment_segment_distance(seg(0, 0, 1, 1), seg(1, 0, 0, 1)), 0.0);
  // nearest pair is the endpoint pair (1,0)-(2,1); value checked against a
  // dense two-parameter sampling of the distance function
  EXPECT_NEAR(segment_segment_distance(seg(0, 0, 1, 0), seg(2, 1, 3, 1)), std::sqrt(2.0),
              1e-15);
}

TEST(Distances, SymmetryAndTriangleStyleBound) {
  Rng rng(7);
  Box box = Box::of({-5, 5}, {-5, 5});
  for (int i = 0; i < 2000; ++i) {
    Segment A{rng.in_box(box), rng.in_box(box)};
    Segment B{rng.in_box(box), rng.in_box(box)};
    Segment C{rng.in_box(box), rng.in_box(box)};
    double ab = segment_segment_distance(A, B);
    EXPECT_DOUBLE_EQ(ab, segment_segment_distance(B, A));
    double ac = segment_segment_distance(A, C);
    double bc = segment_segment_distance(B, C);
    EXPECT_LE(ac, ab + seg_diam(B) + bc + 1e-12);
  }
}

// ---------------------------------------------------------------------------
// polyline evaluation

TEST(Polyline, EvalAndTails) {
  Polyline c = Polyline::through({0, 1, 2}, {{0, 0}, {1, 0}, {1, 1}});
  EXPECT_EQ(c.eval(0.5), (Pt{0.5, 0}));
  EXPECT_EQ(c.eval(1.5), (Pt{1, 0.5}));
  // default tails extend the end segments affinely
  EXPECT_EQ(c.eval(-1), (Pt{-1, 0}));
  EXPECT_EQ(c.eval(3), (Pt{1, 2}));
  EXPECT_NEAR(c.distance_to({2, 0}), 1.0, 1e-15);
}

TEST(Polyline, ValidationErrors) {
  Polyline c;
  c.breakpoints = {0, 0};  // not strictly increasing
  c.vertices = {{0, 0}, {1, 0}};
  EXPECT_THROW(c.validate(), Error);
  EXPECT_THROW(Polyline::through({0}, {{0, 0}}), Error);
}

// ---------------------------------------------------------------------------
// piecewise-affine certificate

TEST(Pwaff, StraightLinePasses) {
  Polyline line = Polyline::through({-2, -1, 0, 1}, {{-2, 0}, {-1, 0}, {0, 0}, {1, 0}});
  PwAffCertificate cert = pwaff_certificate(line, 1.0, PI / 2);
  EXPECT_TRUE(cert.valid()) << cert.witness;
  EXPECT_DOUBLE_EQ(cert.bound, 4.0);
}

TEST(Pwaff, ZigzagCertificate) {
  StripConfig cfg{0.9, 2.0, {0.0, 0.5}};
  Polyline z = base_zigzag(cfg);
  double r = cfg.r(), w = cfg.w;
  double C = w / (4 * r);
  PwAffCertificate cert = pwaff_certificate(z, C, PI / 2);
  EXPECT_TRUE(cert.valid()) << cert.witness;
  EXPECT_DOUBLE_EQ(cert.bound, 4 * C * C);  // alpha = pi/2 leaves the 4C^2 exact
  EXPECT_NEAR(cert.bound, w * w / (4 * r * r), 1e-9 * cert.bound);
}

TEST(Pwaff, SawtoothAngleFails) {
  // equilateral tooth: apex angle is exactly pi/3 < pi/2
  Polyline saw = Polyline::through({0, 1, 2}, {{0, 0}, {0.5, std::sqrt(3.0) / 2}, {1, 0}});
  PwAffCertificate cert = pwaff_certificate(saw, 2.0, PI / 2);
  EXPECT_FALSE(cert.angle_ok);
  EXPECT_FALSE(cert.valid());
  try {
    pwaff_require(saw, 2.0, PI / 2);
    FAIL() << "expected CheckFailed";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind, "CheckFailed");
  }
}

TEST(Pwaff, InvalidArguments) {
  Polyline line = Polyline::through({0, 1}, {{0, 0}, {1, 0}});
  try {
    pwaff_certificate(line, 1.0, 0.0);
    FAIL() << "expected InvalidAlpha";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind, "InvalidAlpha");
  }
  EXPECT_THROW(pwaff_certificate(line, 0.5, PI / 2), Error);
}

// certificate soundness: the sampled bilipschitz constants stay below the
// certified bound
TEST(Pwaff, SoundnessOnCertifiedCurves) {
  struct Case {
    Polyline curve;
    double C, alpha;
  };
  std::vector<Case> cases;
  cases.push_back({Polyline::through({-1, 0, 1}, {{-1, 0}, {0, 0}, {1, 0}}), 1.0, PI / 2});
  {
    StripConfig cfg{0.9, 2.0, {0.0, 0.5}};
    cases.push_back({base_zigzag(cfg), cfg.w / (4 * cfg.r()), PI / 2});
  }
  {
    StripConfig cfg{0.45, 1.3, {-0.3, 0.3}};
    cases.push_back({base_zigzag(cfg), cfg.w / (4 * cfg.r()), PI / 2});
  }
  for (const auto& [curve, C, alpha] : cases) {
    PwAffCertificate cert = pwaff_certificate(curve, C, alpha);
    ASSERT_TRUE(cert.valid()) << cert.witness;
    BilipEstimate est = empirical_bilip_curve(curve, 100000, 42);
    EXPECT_LE(est.worst(), cert.bound + 1e-6);
  }
}

// ---------------------------------------------------------------------------
// empirical estimation

TEST(Empirical, IdentityAndScaling) {
  Box box = Box::of({0, 1}, {0, 1});
  auto sampler = [&](Rng& r) { return r.in_boxd(box); };
  auto id = [](const Vec& v) { return v; };
  BilipEstimate e1 = empirical_bilip(id, sampler, 10000, 3, 0.1);
  EXPECT_DOUBLE_EQ(e1.lip_up, 1.0);
  EXPECT_DOUBLE_EQ(e1.lip_down, 1.0);
  auto twice = [](const Vec& v) { return 2.0 * v; };
  BilipEstimate e2 = empirical_bilip(twice, sampler, 10000, 3, 0.1);
  EXPECT_DOUBLE_EQ(e2.lip_up, 2.0);
  EXPECT_DOUBLE_EQ(e2.lip_down, 0.5);
}

TEST(Empirical, DeterministicAndDegenerate) {
  Box box = Box::of({0, 1}, {0, 1});
  auto sampler = [&](Rng& r) { return r.in_boxd(box); };
  auto id = [](const Vec& v) { return v; };
  BilipEstimate a = empirical_bilip(id, sampler, 5000, 11, 0.1);
  BilipEstimate b = empirical_bilip(id, sampler, 5000, 11, 0.1);
  EXPECT_EQ(a.lip_up, b.lip_up);
  EXPECT_EQ(a.samples, b.samples);
  auto stuck = [](Rng&) { return Vec(0.5, 0.5); };
  try {
    empirical_bilip(id, stuck, 1000, 1, 0.0);
    FAIL() << "expected DegenerateSample";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind, "DegenerateSample");
  }
}

// ---------------------------------------------------------------------------
// gluing

TEST(Glue, BruteBound) {
  auto [lip, lip_inv] = glue_bound_brute(1, 1, 1);
  EXPECT_DOUBLE_EQ(lip, 5.0);
  EXPECT_DOUBLE_EQ(lip_inv, 3.0);
  auto [lip2, lip_inv2] = glue_bound_brute(2, 3, 0.5);
  EXPECT_DOUBLE_EQ(lip2, 12.0);
  EXPECT_DOUBLE_EQ(lip_inv2, 18.0);
  // no-jump limit
  auto [lip3, lip_inv3] = glue_bound_brute(1, 1e-12, 1e12);
  EXPECT_NEAR(lip3, 3.0, 1e-9);
  EXPECT_NEAR(lip_inv3, 1.0, 1e-9);
}

TEST(Glue, LipCheckCollinearSeam) {
  // two domains meeting at the origin; every cross pair runs through it
  FiniteMap f1{{{Vec(-1.0, 0.0), Vec(-1.0, 0.0)}, {Vec(0.0, 0.0), Vec(0.0, 0.0)}}};
  FiniteMap f2{{{Vec(0.0, 0.0), Vec(0.0, 0.0)}, {Vec(1.0, 0.0), Vec(1.0, 0.0)}}};
  GlueCheck chk = glue_lip_check(f1, f2);
  EXPECT_DOUBLE_EQ(chk.C, 1.0);
  // identical domains: z = x works for every pair
  GlueCheck same = glue_lip_check(f1, f1);
  EXPECT_DOUBLE_EQ(same.C, 1.0);
}

TEST(Glue, LipCheckForcedDetour) {
  FiniteMap f1{{{Vec(0.0, 0.0), Vec(0.0, 0.0)}, {Vec(5.0, 5.0), Vec(5.0, 5.0)}}};
  FiniteMap f2{{{Vec(1.0, 0.0), Vec(1.0, 0.0)}, {Vec(5.0, 5.0), Vec(5.0, 5.0)}}};
  auto z_far = [](const Vec&, const Vec&) { return Vec(5.0, 5.0); };
  GlueCheck chk = glue_lip_check(f1, f2, z_far);
  // worst pair is (0,0)-(1,0): (sqrt(50)+sqrt(41))/1, checked by hand
  EXPECT_NEAR(chk.C, std::sqrt(50.0) + std::sqrt(41.0), 1e-12);
}

TEST(Glue, LipCheckErrors) {
  FiniteMap f1{{{Vec(0.0, 0.0), Vec(0.0, 0.0)}}};
  FiniteMap f2{{{Vec(1.0, 0.0), Vec(1.0, 0.0)}}};
  try {
    glue_lip_check(f1, f2);
    FAIL() << "expected MissingZ";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind, "MissingZ");
  }
  FiniteMap g2{{{Vec(0.0, 0.0), Vec(9.0, 9.0)}}};  // disagrees with f1 at 0
  try {
    glue_lip_check(f1, g2);
    FAIL() << "expected WellDefinednessError";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind, "WellDefinednessError");
  }
}

// ---------------------------------------------------------------------------
// side classification

TEST(Side, HorizontalLine) {
  Polyline line = Polyline::through({-1, 1}, {{-1, 0}, {1, 0}});
  EXPECT_EQ(side_classify(line, {0, -1}), Side::Below);
  EXPECT_EQ(side_classify(line, {0, 1}), Side::Above);
  EXPECT_EQ(side_classify(line, {100, 0}), Side::OnCurve);  // tail point
}

TEST(Side, ZigzagAboveBelow) {
  StripConfig cfg{0.9, 2.0, {0.0, 0.5}};
  Polyline z = base_zigzag(cfg);
  EXPECT_EQ(side_classify(z, {0, cfg.w + 1}), Side::Above);
  EXPECT_EQ(side_classify(z, {0, -1}), Side::Below);
}

// classification flips exactly at transversal crossings along vertical sweeps
TEST(Side, ParityFlipsAtCrossings) {
  StripConfig cfg{0.9, 2.0, {0.0, 1.0}};
  Polyline z = base_zigzag(cfg);
  double r = cfg.r(), w = cfg.w;
  auto pieces = z.window_pieces();
  int checked = 0;
  for (int k = 0; k < 10; ++k) {
    double x0 = 8 * r * k + 2.341 * r;  // generic: off every vertical stroke
    double y_lo = -0.487, y_hi = w + 0.513;
    int steps = 37;
    Side prev = side_classify(z, {x0, y_lo});
    ASSERT_NE(prev, Side::OnCurve);
    for (int j = 1; j <= steps; ++j) {
      double y = y_lo + (y_hi - y_lo) * j / steps + 0.0123 * (j % 3);
      Side cur = side_classify(z, {x0, y});
      ASSERT_NE(cur, Side::OnCurve);
      double y_prev = y_lo + (y_hi - y_lo) * (j - 1) / steps + 0.0123 * ((j - 1) % 3);
      Segment sweep{{x0, y_prev}, {x0, y}};
      int crossings = 0;
      for (const auto& pc : pieces)
        if (segments_intersect(pc.seg, sweep)) ++crossings;
      EXPECT_EQ(cur != prev, crossings % 2 == 1) << "x0=" << x0 << " y=" << y;
      prev = cur;
      ++checked;
    }
  }
  EXPECT_GE(checked, 300);
}

// ---------------------------------------------------------------------------
// planar facts used downstream

// stadium around a unit segment is covered by the two end disks of radius
// sqrt(3)/2
TEST(Facts, TwoDiscs) {
  Rng rng(101);
  Box box = Box::of({-3, 3}, {-3, 3});
  for (int i = 0; i < 10000; ++i) {
    Pt u = rng.in_box(box);
    Pt v = u + rng.unit_dir();
    double t = rng.uniform();
    double rho = rng.uniform() / std::sqrt(2.0);
    Pt q = u + t * (v - u) + rho * rng.unit_dir();
    double m = std::min(dist(q, u), dist(q, v));
    EXPECT_LE(m, std::sqrt(3.0) / 2 + 1e-12);
  }
}

namespace {
// angle of the triangle (w,p,a) at the vertex p
double angle_at_p(Pt w, Pt p, Pt a) {
  Pt u = w - p, v = a - p;
  double c = std::clamp(dot(u, v) / (norm(u) * norm(v)), -1.0, 1.0);
  return std::acos(c);
}
}  // namespace

// lower bound on the angle subtended at p by points outside the lens
// B ∩ B_wp, on the p-side of the bisector
TEST(Facts, BisectorAngleBound) {
  Rng rng(202);
  int accepted = 0;
  long guard = 0;
  while (accepted < 10000 && ++guard < 4000000) {
    double R = rng.uniform(0.5, 3.0);
    Pt c = rng.in_box(Box::of({-2, 2}, {-2, 2}));
    auto in_disk = [&](double rad, Pt ctr) {
      double t = std::sqrt(rng.uniform());
      return ctr + (rad * t) * rng.unit_dir();
    };
    Pt w = in_disk(R, c), p = in_disk(R, c);
    double d = dist(w, p);
    if (d < 1e-3) continue;
    Pt m = 0.5 * (w + p);
    Pt a = rng.in_box(Box::of({c.x - 1.5 * R, c.x + 1.5 * R}, {c.y - 1.5 * R, c.y + 1.5 * R}));
    if (dist(a, c) < R && dist(a, m) < d / 2) continue;  // inside the lens
    if (dist(a, p) < 1e-6) continue;
    if (dist(a, p) > dist(a, w)) continue;
    double gamma = angle_at_p(w, p, a);
    if (gamma > PI / 2) continue;
    EXPECT_GE(std::sin(gamma), (std::sqrt(2.0) / 4) * d / (2 * R) - 1e-9)
        << "R=" << R << " d=" << d;
    ++accepted;
  }
  EXPECT_EQ(accepted, 10000);
}
