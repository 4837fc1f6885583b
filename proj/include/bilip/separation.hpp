#pragma once
// Separating a marked subset of an s-separated point set inside the strip
// R x [0,w] by a bilipschitz curve. The curve is a constant-speed zig-zag
// with per-point square detours; the marked points end up below the curve,
// the rest above.

#include <map>

#include "bilip/geom.hpp"

namespace bilip {

struct StripConfig {
  double s = 1, w = 1;
  Interval window{0, 0};  // x-range of interest
  double r() const { return s / 100.0; }
  void validate() const {
    if (!(0 < s && s < 1 && 1 <= w)) fail("BadStrip", "need 0 < s < 1 <= w");
    if (!(window.lo < window.hi)) fail("BadStrip", "empty window");
  }
};

struct MarkedNet {
  std::vector<Pt> X;
  std::vector<bool> Y_mask;  // same length; true = separate downward
  void validate() const {
    if (X.size() != Y_mask.size()) fail("BadNet", "mask length mismatch");
  }
};

// ---------------------------------------------------------------------------
// Base zig-zag: constant speed (w+8r)/8r, period 16r in the parameter (and in
// x), teeth of width 8r and height w. Within one period starting at t0:
//   (t0,0) -> up to (t0,w) at t0+p1 -> (t0+8r,w) at t0+8r
//          -> down to (t0+8r,0) at t0+8r+p1 -> (t0+16r,0),
// where p1 = 8wr/(w+8r). First coordinate never lags t by more than 8r.
// Tails continue the bottom runs horizontally at full speed.

inline double zigzag_p1(double w, double r) { return 8 * w * r / (w + 8 * r); }
inline double zigzag_speed(double w, double r) { return (w + 8 * r) / (8 * r); }

inline Polyline base_zigzag(const StripConfig& cfg) {
  cfg.validate();
  const double r = cfg.r(), w = cfg.w;
  const double period = 16 * r;
  const double p1 = zigzag_p1(w, r);
  long k_lo = long(std::floor(cfg.window.lo / period));
  long k_hi = long(std::ceil(cfg.window.hi / period));
  if (k_hi <= k_lo) k_hi = k_lo + 1;
  if (k_hi - k_lo > 500000) fail("WindowTooLarge", "zig-zag would need too many teeth");

  Polyline c;
  for (long k = k_lo; k < k_hi; ++k) {
    double t0 = 16 * r * double(k);
    double x0 = t0;  // vertex x equals period start
    c.breakpoints.insert(c.breakpoints.end(), {t0, t0 + p1, t0 + 8 * r, t0 + 8 * r + p1});
    c.vertices.insert(c.vertices.end(),
                      {Pt{x0, 0}, Pt{x0, w}, Pt{x0 + 8 * r, w}, Pt{x0 + 8 * r, 0}});
  }
  double t_end = 16 * r * double(k_hi);
  c.breakpoints.push_back(t_end);
  c.vertices.push_back(Pt{t_end, 0});
  double v = zigzag_speed(w, r);
  c.tails = {Pt{v, 0}, Pt{v, 0}};  // extend the bottom runs
  c.window = {c.breakpoints.front(), c.breakpoints.back()};
  c.validate();
  return c;
}

}  // namespace bilip
