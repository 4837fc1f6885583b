#pragma once
// Composable homeomorphisms of R^d (d <= 3), each carrying a symbolic
// bilipschitz bound and an exact inverse recipe:
//   Identity, Affine, Spin (radial rotation profile), TubeSpin (conjugated
//   spin swapping two points), Compose, RegionGlue (piecewise by region).
// Evaluation is pure; maps are immutable shared trees.

#include <memory>
#include <variant>

#include "bilip/geom.hpp"

namespace bilip {

// ---------------------------------------------------------------------------
// angle profile: piecewise-affine psi: [0,inf) -> R, zero at and beyond t0

struct AngleProfile {
  std::vector<double> knots;   // increasing radii
  std::vector<double> values;  // angles at the knots
  double t0 = 0;               // compact support radius

  void validate() const {
    if (knots.size() != values.size() || knots.empty())
      fail("BadProfile", "need |knots| == |values| >= 1");
    for (size_t i = 0; i + 1 < knots.size(); ++i)
      if (!(knots[i] < knots[i + 1])) fail("BadProfile", "knots not increasing");
    if (knots.front() < 0) fail("BadProfile", "negative radius knot");
    if (!(t0 > 0)) fail("BadProfile", "t0 must be positive");
    if (knots.back() > t0 || values.back() != 0)
      fail("ProfileNotCompact", "profile must reach 0 at its last knot, at or before t0");
  }

  // constant before the first knot, affine between knots, exactly 0 from the
  // last knot (and hence from t0) on
  double eval(double t) const {
    if (t >= knots.back()) return 0.0;
    if (t <= knots.front()) return values.front();
    size_t hi = size_t(std::upper_bound(knots.begin(), knots.end(), t) - knots.begin());
    size_t lo = hi - 1;
    double u = (t - knots[lo]) / (knots[hi] - knots[lo]);
    return values[lo] + u * (values[hi] - values[lo]);
  }

  double lip() const {
    double m = 0;
    for (size_t i = 0; i + 1 < knots.size(); ++i)
      m = std::max(m, std::abs(values[i + 1] - values[i]) / (knots[i + 1] - knots[i]));
    return m;
  }

  AngleProfile negate() const {
    AngleProfile p = *this;
    for (double& v : p.values) v = -v;
    return p;
  }
};

// ---------------------------------------------------------------------------
// rotation in the (1,2)-plane

inline Vec rotate12(const Vec& z, double theta) {
  long double c = cosl((long double)theta), s = sinl((long double)theta);
  long double a = z[0], b = z[1];
  Vec out = z;
  out[0] = double(c * a - s * b);
  out[1] = double(s * a + c * b);
  return out;
}

// Rotation with the Euclidean norm restored bitwise: rotate in long double,
// then recompute the dominant coordinate of the rotated pair so the double
// norm comes out equal to norm(z). The dominant coordinate's ulp step in
// norm^2 never exceeds the sqrt rounding plateau, so scanning a few ulps
// around the long-double solution always finds an exact representative.
inline Vec rotate12_exactnorm(const Vec& z, double theta) {
  if (theta == 0 || (z[0] == 0 && z[1] == 0)) return z;
  long double c = cosl((long double)theta), s = sinl((long double)theta);
  long double a = z[0], b = z[1];
  long double r1 = c * a - s * b, r2 = s * a + c * b;
  long double rho2 = a * a + b * b, cur2 = r1 * r1 + r2 * r2;
  if (cur2 > 0) {
    long double k = sqrtl(rho2 / cur2);
    r1 *= k;
    r2 *= k;
  }
  Vec out = z;
  out[0] = double(r1);
  out[1] = double(r2);
  const double target = norm(z);
  if (norm(out) == target) return out;
  const int k = std::abs(out[0]) >= std::abs(out[1]) ? 0 : 1;  // dominant coord
  const int k2 = k ^ 1;
  const double sign = out[k] < 0 ? -1.0 : 1.0;
  const double inf = std::numeric_limits<double>::infinity();
  // The dominant coordinate's step in norm^2 can equal the sqrt plateau
  // width, so also re-phase with ulp tweaks of the minor coordinate.
  for (int so = 0; so <= 8; ++so) {
    for (int sdir = 0; sdir < (so == 0 ? 1 : 2); ++sdir) {
      double minor = out[k2];
      for (int j = 0; j < so && minor != 0; ++j)
        minor = std::nextafter(minor, sdir == 0 ? inf : -inf);
      long double rest2 = (long double)minor * minor;
      if (z.d == 3) rest2 += (long double)out[2] * out[2];
      long double want = (long double)target * target - rest2;
      double base = want > 0 ? double(sqrtl(want)) : 0.0;
      for (int off = 0; off <= 8; ++off) {
        for (int dir = 0; dir < (off == 0 ? 1 : 2); ++dir) {
          double cand = base;
          for (int j = 0; j < off; ++j) cand = std::nextafter(cand, dir == 0 ? inf : -inf);
          Vec trial = out;
          trial[k] = sign * cand;
          trial[k2] = minor;
          if (norm(trial) == target) return trial;
        }
      }
      if (out[k2] == 0) break;
    }
  }
  return out;  // unreachable in practice; callers' tests would flag it
}

// ---------------------------------------------------------------------------
// the map tree

struct PlaneMap;
using PlaneMapPtr = std::shared_ptr<const PlaneMap>;

struct PlaneMap {
  struct Identity {};

  struct Affine {
    // z -> M z + b with cached inverse matrix
    std::array<std::array<double, 3>, 3> M{}, Minv{};
    Vec b;
  };

  struct Spin {
    AngleProfile psi;  // rotation angle psi(|z|) in the (1,2)-plane
  };

  struct TubeSpin {
    Vec x, y;
    double r = 0;
    // cached conjugation data (rebuilt on load)
    Vec m;                     // midpoint
    double n = 0, eta = 0;     // |y-x| and r/|y-x|
    std::array<Vec, 3> frame;  // u1 along (x-y)/n, u2,u3 completing the frame
  };

  struct Compose {
    std::vector<PlaneMapPtr> parts;  // parts[0] applied last (composition order)
  };

  struct RegionGlue {
    struct Piece {
      Box region;
      PlaneMapPtr map;  // must map its region onto itself
    };
    std::vector<Piece> pieces;
    bool default_identity = false;  // off-region points map to themselves
  };

  std::variant<Identity, Affine, Spin, TubeSpin, Compose, RegionGlue> v;
  double bound = 1;  // symbolic bilipschitz bound from the construction
  int dim = 2;
};

// ---------------------------------------------------------------------------
// constructors

inline PlaneMapPtr make_identity(int d = 2) {
  auto m = std::make_shared<PlaneMap>();
  m->v = PlaneMap::Identity{};
  m->dim = d;
  m->bound = 1;
  return m;
}

namespace detail {
// operator norm of a d x d block: closed form for 2x2 (and diagonal 3x3),
// power iteration fallback otherwise
inline double opnorm(const std::array<std::array<double, 3>, 3>& M, int d) {
  if (d == 2) {
    // singular values of [[a,b],[c,e]] from the closed form
    double a = M[0][0], b = M[0][1], c = M[1][0], e = M[1][1];
    double f = a * a + b * b + c * c + e * e;
    double g = std::hypot(a * a + b * b - c * c - e * e, 2 * (a * c + b * e));
    return std::sqrt((f + g) / 2);
  }
  bool diag = true;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j && M[size_t(i)][size_t(j)] != 0) diag = false;
  if (diag) {
    double m = 0;
    for (int i = 0; i < d; ++i) m = std::max(m, std::abs(M[size_t(i)][size_t(i)]));
    return m;
  }
  // power iteration on M^T M with a deterministic start
  std::array<double, 3> v{1.0, 0.7548776662466927, 0.5698402909980532};
  double lam = 0;
  for (int it = 0; it < 300; ++it) {
    std::array<double, 3> w{0, 0, 0}, u{0, 0, 0};
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) w[size_t(i)] += M[size_t(i)][size_t(j)] * v[size_t(j)];
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) u[size_t(j)] += M[size_t(i)][size_t(j)] * w[size_t(i)];
    double nn = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
    if (nn == 0) return 0;
    for (int i = 0; i < 3; ++i) v[size_t(i)] = u[size_t(i)] / nn;
    lam = nn;
  }
  return std::sqrt(lam) * (1 + 1e-12);  // tiny safety on the iterative value
}

inline std::array<std::array<double, 3>, 3> invert(const std::array<std::array<double, 3>, 3>& M,
                                                   int d) {
  std::array<std::array<double, 3>, 3> R{};
  if (d == 2) {
    double det = M[0][0] * M[1][1] - M[0][1] * M[1][0];
    if (std::abs(det) < 1e-300) fail("DegenerateAffine", "singular 2x2 matrix");
    R[0][0] = M[1][1] / det;
    R[0][1] = -M[0][1] / det;
    R[1][0] = -M[1][0] / det;
    R[1][1] = M[0][0] / det;
    R[2][2] = 1;
    return R;
  }
  // 3x3 adjugate
  auto c = [&](int i, int j) { return M[size_t(i)][size_t(j)]; };
  double det = c(0, 0) * (c(1, 1) * c(2, 2) - c(1, 2) * c(2, 1)) -
               c(0, 1) * (c(1, 0) * c(2, 2) - c(1, 2) * c(2, 0)) +
               c(0, 2) * (c(1, 0) * c(2, 1) - c(1, 1) * c(2, 0));
  if (std::abs(det) < 1e-300) fail("DegenerateAffine", "singular 3x3 matrix");
  R[0][0] = (c(1, 1) * c(2, 2) - c(1, 2) * c(2, 1)) / det;
  R[0][1] = (c(0, 2) * c(2, 1) - c(0, 1) * c(2, 2)) / det;
  R[0][2] = (c(0, 1) * c(1, 2) - c(0, 2) * c(1, 1)) / det;
  R[1][0] = (c(1, 2) * c(2, 0) - c(1, 0) * c(2, 2)) / det;
  R[1][1] = (c(0, 0) * c(2, 2) - c(0, 2) * c(2, 0)) / det;
  R[1][2] = (c(0, 2) * c(1, 0) - c(0, 0) * c(1, 2)) / det;
  R[2][0] = (c(1, 0) * c(2, 1) - c(1, 1) * c(2, 0)) / det;
  R[2][1] = (c(0, 1) * c(2, 0) - c(0, 0) * c(2, 1)) / det;
  R[2][2] = (c(0, 0) * c(1, 1) - c(0, 1) * c(1, 0)) / det;
  return R;
}
}  // namespace detail

inline PlaneMapPtr make_affine(const std::array<std::array<double, 3>, 3>& M, const Vec& b,
                               int d) {
  auto m = std::make_shared<PlaneMap>();
  PlaneMap::Affine a;
  a.M = M;
  a.M[2][2] = d == 2 ? 1 : a.M[2][2];
  a.Minv = detail::invert(a.M, d);
  a.b = b;
  m->v = a;
  m->dim = d;
  m->bound = std::max(detail::opnorm(a.M, d), detail::opnorm(a.Minv, d));
  m->bound = std::max(m->bound, 1.0);
  return m;
}

inline PlaneMapPtr make_affine2(double m00, double m01, double m10, double m11, Pt b = {0, 0}) {
  std::array<std::array<double, 3>, 3> M{};
  M[0][0] = m00;
  M[0][1] = m01;
  M[1][0] = m10;
  M[1][1] = m11;
  M[2][2] = 1;
  return make_affine(M, Vec(b), 2);
}

inline PlaneMapPtr spin_map(AngleProfile psi, double t0, int d = 2) {
  if (d < 2 || d > 3) fail("BadDimension", "spin needs d in {2,3}");
  psi.t0 = t0;
  psi.validate();
  if (psi.knots.back() > t0 || psi.eval(t0) != 0)
    fail("ProfileNotCompact", "profile nonzero at or after t0");
  auto m = std::make_shared<PlaneMap>();
  double lip = psi.lip();
  PlaneMap::Spin s{std::move(psi)};
  m->v = std::move(s);
  m->dim = d;
  m->bound = PI * lip * t0 + 1;
  return m;
}

inline PlaneMapPtr tube_spin(const Vec& x, const Vec& y, double r) {
  if (x.d != y.d) fail("BadDimension", "endpoint dimensions differ");
  int d = x.d;
  if (d < 2 || d > 3) fail("BadDimension", "tube spin needs d in {2,3}");
  double n = dist(x, y);
  if (!(n > 0)) fail("RadiusTooLarge", "x and y must be distinct");
  if (!(r > 0) || r > n / 2) fail("RadiusTooLarge", "need 0 < r <= |y-x|/2");
  PlaneMap::TubeSpin t;
  t.x = x;
  t.y = y;
  t.r = r;
  t.n = n;
  t.eta = r / n;
  t.m = 0.5 * (x + y);
  Vec u1 = (1.0 / n) * (x - y);
  Vec u2 = Vec::zero(d), u3 = Vec::zero(d);
  if (d == 2) {
    u2[0] = -u1[1];
    u2[1] = u1[0];
  } else {
    // complete the frame: pick the axis least aligned with u1
    int k = 0;
    for (int i = 1; i < 3; ++i)
      if (std::abs(u1[i]) < std::abs(u1[k])) k = i;
    Vec e = Vec::zero(3);
    e[k] = 1;
    double p = dot(e, u1);
    Vec w = e - p * u1;
    u2 = (1.0 / norm(w)) * w;
    // cross product u1 x u2
    u3[0] = u1[1] * u2[2] - u1[2] * u2[1];
    u3[1] = u1[2] * u2[0] - u1[0] * u2[2];
    u3[2] = u1[0] * u2[1] - u1[1] * u2[0];
  }
  t.frame = {u1, u2, u3};
  auto m = std::make_shared<PlaneMap>();
  m->v = std::move(t);
  m->dim = d;
  m->bound = 11 * n * n / (r * r);
  return m;
}

inline PlaneMapPtr compose(std::vector<PlaneMapPtr> parts) {
  auto m = std::make_shared<PlaneMap>();
  double b = 1;
  int d = parts.empty() ? 2 : parts.front()->dim;
  for (const auto& p : parts) {
    if (p->dim != d) fail("BadDimension", "composition mixes dimensions");
    b *= p->bound;
  }
  m->v = PlaneMap::Compose{std::move(parts)};
  m->dim = d;
  m->bound = b;
  return m;
}

inline PlaneMapPtr region_glue(std::vector<PlaneMap::RegionGlue::Piece> pieces,
                               bool default_identity, int d = 2) {
  auto m = std::make_shared<PlaneMap>();
  double b = 1;
  for (const auto& pc : pieces) {
    if (pc.map->dim != d) fail("BadDimension", "piece dimension mismatch");
    b = std::max(b, pc.map->bound);
  }
  m->v = PlaneMap::RegionGlue{std::move(pieces), default_identity};
  m->dim = d;
  m->bound = b;
  return m;
}

// ---------------------------------------------------------------------------
// evaluation

Vec evaluate(const PlaneMap& m, const Vec& p);
Vec inverse_evaluate(const PlaneMap& m, const Vec& q);

namespace detail {

// tube-spin proof profile: pi on [0,1], affine to 0 on [1, 1+2*eta]
inline double tube_psi(double t, double eta) {
  if (t <= 1) return PI;
  double R = 1 + 2 * eta;
  if (t >= R) return 0;
  return (R - t) * PI / (2 * eta);
}

inline Vec tube_apply(const PlaneMap::TubeSpin& ts, const Vec& z, int sign) {
  int d = z.d;
  const Vec &u1 = ts.frame[0], &u2 = ts.frame[1], &u3 = ts.frame[2];
  Vec dz = z - ts.m;
  double w1 = dot(dz, u1) / ts.n;
  double w2 = dot(dz, u2) / ts.n;
  double w3 = d == 3 ? dot(dz, u3) / ts.n : 0.0;
  double stretch = 2 + 1 / ts.eta;
  double v1 = 2 * w1, v2 = stretch * w2, v3 = stretch * w3;
  double t = std::sqrt(v1 * v1 + v2 * v2 + v3 * v3);
  double R = 1 + 2 * ts.eta;
  if (t >= R) return z;  // outside the support ellipsoid: exact identity
  if (t <= 1) {
    // plateau: rotation by +-pi reflects the (u1,u2)-components; this is the
    // algebraic simplification making tau(x)=y and tau(y)=x exact
    Vec out = z - (2 * dot(dz, u1)) * u1;
    out = out - (2 * dot(dz, u2)) * u2;
    return out;
  }
  double theta = sign * tube_psi(t, ts.eta);
  Vec v = Vec::zero(3);
  v.d = 3;
  v[0] = v1;
  v[1] = v2;
  v[2] = v3;
  Vec vr = rotate12(v, theta);
  double w1p = vr[0] / 2, w2p = vr[1] / stretch, w3p = vr[2] / stretch;
  Vec out = ts.m + (ts.n * w1p) * u1;
  out = out + (ts.n * w2p) * u2;
  if (d == 3) out = out + (ts.n * w3p) * u3;
  return out;
}

}  // namespace detail

inline Vec evaluate(const PlaneMap& m, const Vec& p) {
  if (p.d != m.dim) fail("BadDimension", "point/map dimension mismatch");
  using namespace detail;
  return std::visit(
      [&](const auto& node) -> Vec {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, PlaneMap::Identity>) {
          return p;
        } else if constexpr (std::is_same_v<T, PlaneMap::Affine>) {
          Vec out = node.b;
          for (int i = 0; i < m.dim; ++i)
            for (int j = 0; j < m.dim; ++j)
              out[i] += node.M[size_t(i)][size_t(j)] * p[j];
          return out;
        } else if constexpr (std::is_same_v<T, PlaneMap::Spin>) {
          double theta = node.psi.eval(norm(p));
          return rotate12_exactnorm(p, theta);
        } else if constexpr (std::is_same_v<T, PlaneMap::TubeSpin>) {
          return tube_apply(node, p, +1);
        } else if constexpr (std::is_same_v<T, PlaneMap::Compose>) {
          Vec cur = p;
          for (auto it = node.parts.rbegin(); it != node.parts.rend(); ++it)
            cur = evaluate(**it, cur);
          return cur;
        } else {
          for (const auto& pc : node.pieces)
            if (pc.region.contains(p)) return evaluate(*pc.map, p);
          if (node.default_identity) return p;
          fail("OutsideDomain", "point in no glued region");
        }
      },
      m.v);
}

inline Vec inverse_evaluate(const PlaneMap& m, const Vec& q) {
  if (q.d != m.dim) fail("BadDimension", "point/map dimension mismatch");
  using namespace detail;
  return std::visit(
      [&](const auto& node) -> Vec {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, PlaneMap::Identity>) {
          return q;
        } else if constexpr (std::is_same_v<T, PlaneMap::Affine>) {
          Vec rhs = q - node.b;
          Vec out = Vec::zero(m.dim);
          for (int i = 0; i < m.dim; ++i)
            for (int j = 0; j < m.dim; ++j)
              out[i] += node.Minv[size_t(i)][size_t(j)] * rhs[j];
          return out;
        } else if constexpr (std::is_same_v<T, PlaneMap::Spin>) {
          // norms are preserved bitwise, so -psi at the same radius inverts
          double theta = -node.psi.eval(norm(q));
          return rotate12_exactnorm(q, theta);
        } else if constexpr (std::is_same_v<T, PlaneMap::TubeSpin>) {
          return tube_apply(node, q, -1);
        } else if constexpr (std::is_same_v<T, PlaneMap::Compose>) {
          Vec cur = q;
          for (const auto& part : node.parts) cur = inverse_evaluate(*part, cur);
          return cur;
        } else {
          // pieces map their region onto itself; locate q by pull-back
          for (const auto& pc : node.pieces) {
            Vec cand = inverse_evaluate(*pc.map, q);
            if (pc.region.contains(cand)) return cand;
          }
          if (node.default_identity) return q;
          fail("OutsideDomain", "point in no glued region image");
        }
      },
      m.v);
}

}  // namespace bilip
