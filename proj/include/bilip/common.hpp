#pragma once
// Shared vocabulary: planar points, small d-dimensional vectors (d <= 3),
// intervals/boxes, a portable seeded RNG, and the error convention.
//
// All numeric work is double precision with a single global tolerance EPS,
// except where a construction claims exact lattice membership -- those code
// paths carry their own rational arithmetic (see rational.hpp).

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace bilip {

inline constexpr double EPS = 1e-9;
inline constexpr double PI = 3.14159265358979323846264338327950288;

// Errors carry a short machine-readable kind ("RadiusTooLarge", ...) plus a
// human message with the witness. CLI maps kind!="" input errors to exit 1.
struct Error : std::runtime_error {
  std::string kind;
  Error(std::string k, const std::string& msg)
      : std::runtime_error(k + ": " + msg), kind(std::move(k)) {}
};

[[noreturn]] inline void fail(const std::string& kind, const std::string& msg) {
  throw Error(kind, msg);
}

// ---------------------------------------------------------------------------
// planar point

struct Pt {
  double x = 0, y = 0;
};

inline Pt operator+(Pt a, Pt b) { return {a.x + b.x, a.y + b.y}; }
inline Pt operator-(Pt a, Pt b) { return {a.x - b.x, a.y - b.y}; }
inline Pt operator*(double s, Pt a) { return {s * a.x, s * a.y}; }
inline Pt operator*(Pt a, double s) { return {s * a.x, s * a.y}; }
inline Pt operator/(Pt a, double s) { return {a.x / s, a.y / s}; }
inline bool operator==(Pt a, Pt b) { return a.x == b.x && a.y == b.y; }
inline double dot(Pt a, Pt b) { return a.x * b.x + a.y * b.y; }
inline double cross(Pt a, Pt b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Pt a) { return dot(a, a); }
inline double norm(Pt a) { return std::sqrt(norm2(a)); }
inline double dist(Pt a, Pt b) { return norm(a - b); }

inline bool finite(Pt p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// ---------------------------------------------------------------------------
// small vector with runtime dimension (2 or 3; capacity 3)

struct Vec {
  std::array<double, 3> c{0, 0, 0};
  int d = 2;

  Vec() = default;
  Vec(double x, double y) : c{x, y, 0}, d(2) {}
  Vec(double x, double y, double z) : c{x, y, z}, d(3) {}
  explicit Vec(Pt p) : c{p.x, p.y, 0}, d(2) {}
  static Vec zero(int dim) {
    Vec v;
    v.d = dim;
    return v;
  }
  double& operator[](int i) { return c[size_t(i)]; }
  double operator[](int i) const { return c[size_t(i)]; }
  Pt pt() const { return {c[0], c[1]}; }
};

inline Vec operator+(Vec a, const Vec& b) {
  for (int i = 0; i < a.d; ++i) a[i] += b[i];
  return a;
}
inline Vec operator-(Vec a, const Vec& b) {
  for (int i = 0; i < a.d; ++i) a[i] -= b[i];
  return a;
}
inline Vec operator*(double s, Vec a) {
  for (int i = 0; i < a.d; ++i) a[i] *= s;
  return a;
}
inline double dot(const Vec& a, const Vec& b) {
  double s = 0;
  for (int i = 0; i < a.d; ++i) s += a[i] * b[i];
  return s;
}
inline double norm2(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }
inline double dist(const Vec& a, const Vec& b) { return norm(a - b); }
inline bool operator==(const Vec& a, const Vec& b) {
  if (a.d != b.d) return false;
  for (int i = 0; i < a.d; ++i)
    if (a[i] != b[i]) return false;
  return true;
}

// ---------------------------------------------------------------------------
// intervals and axis boxes

struct Interval {
  double lo = 0, hi = 0;
  double len() const { return hi - lo; }
  bool contains(double t) const { return lo <= t && t <= hi; }
  double clamp(double t) const { return t < lo ? lo : (t > hi ? hi : t); }
};

struct Box {
  // axis-aligned box in R^d, d <= 3
  std::array<Interval, 3> iv;
  int d = 2;
  static Box of(Interval x, Interval y) { return Box{{x, y, {}}, 2}; }
  static Box of(Interval x, Interval y, Interval z) { return Box{{x, y, z}, 3}; }
  bool contains(const Vec& p) const {
    for (int i = 0; i < d; ++i)
      if (!iv[size_t(i)].contains(p[i])) return false;
    return true;
  }
  bool contains(Pt p) const { return contains(Vec(p)); }
};

// ---------------------------------------------------------------------------
// deterministic RNG
//
// mt19937_64's raw stream is pinned by the standard; the std distributions
// are not, so we map to doubles ourselves to keep outputs byte-stable.

struct Rng {
  std::mt19937_64 g;
  explicit Rng(uint64_t seed) : g(seed) {}

  // uniform in [0,1)
  double uniform() {
    return double(g() >> 11) * 0x1.0p-53;
  }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  // inclusive integer range
  int64_t uniform_int(int64_t lo, int64_t hi) {
    uint64_t span = uint64_t(hi - lo) + 1;
    return lo + int64_t(g() % span);
  }
  Pt in_box(const Box& b) {
    return {uniform(b.iv[0].lo, b.iv[0].hi), uniform(b.iv[1].lo, b.iv[1].hi)};
  }
  Vec in_boxd(const Box& b) {
    Vec v = Vec::zero(b.d);
    for (int i = 0; i < b.d; ++i) v[i] = uniform(b.iv[size_t(i)].lo, b.iv[size_t(i)].hi);
    return v;
  }
  Pt unit_dir() {
    double a = uniform(0, 2 * PI);
    return {std::cos(a), std::sin(a)};
  }
  Vec unit_dird(int d) {
    // rejection-sampled gaussian-free direction
    for (;;) {
      Vec v = Vec::zero(d);
      for (int i = 0; i < d; ++i) v[i] = uniform(-1, 1);
      double n2 = norm2(v);
      if (n2 > 1e-8 && n2 <= 1.0) return (1.0 / std::sqrt(n2)) * v;
    }
  }
};

// Seed convention: BILIP_SEED env var overrides any configured seed.
inline uint64_t effective_seed(uint64_t configured) {
  if (const char* s = std::getenv("BILIP_SEED")) {
    try {
      return std::stoull(s);
    } catch (...) {
      fail("BadSeed", std::string("BILIP_SEED not an integer: ") + s);
    }
  }
  return configured;
}

}  // namespace bilip
