#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

// Lattice substrate: geometry, extension rules, binary masks, scalar fields,
// ball stencils. Everything is immutable after construction and safe to share
// across threads.

namespace rperi {

using Idx = std::array<int, 3>;

inline Idx make_idx(int x, int y = 0, int z = 0) { return {x, y, z}; }

inline Idx add(const Idx& a, const Idx& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Idx sub(const Idx& a, const Idx& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Idx neg(const Idx& a) { return {-a[0], -a[1], -a[2]}; }
inline long long dot(const Idx& a, const Idx& b) {
  return (long long)a[0] * b[0] + (long long)a[1] * b[1] + (long long)a[2] * b[2];
}
inline long long sqnorm(const Idx& a) { return dot(a, a); }

struct GridGeometry {
  int dim = 2;
  std::array<int, 3> shape{1, 1, 1};   // unused axes stay 1
  double h = 1.0;
  std::array<bool, 3> periodic{false, false, false};
  std::array<double, 3> origin{0.0, 0.0, 0.0};

  GridGeometry() = default;
  GridGeometry(int dim_, std::array<int, 3> shape_, double h_,
               std::array<bool, 3> periodic_ = {false, false, false},
               std::array<double, 3> origin_ = {0.0, 0.0, 0.0})
      : dim(dim_), shape(shape_), h(h_), periodic(periodic_), origin(origin_) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("dim must be 1, 2 or 3");
    if (h <= 0.0) throw std::invalid_argument("spacing must be positive");
    for (int i = dim; i < 3; ++i) shape[i] = 1;
    for (int i = 0; i < 3; ++i)
      if (shape[i] < 1) throw std::invalid_argument("shape entries must be >= 1");
  }

  long long cell_count() const {
    return (long long)shape[0] * shape[1] * shape[2];
  }
  bool in_window(const Idx& k) const {
    for (int i = 0; i < dim; ++i)
      if (k[i] < 0 || k[i] >= shape[i]) return false;
    for (int i = dim; i < 3; ++i)
      if (k[i] != 0) return false;
    return true;
  }
  long long flatten(const Idx& k) const {
    return ((long long)k[2] * shape[1] + k[1]) * shape[0] + k[0];
  }
  Idx unflatten(long long f) const {
    Idx k{0, 0, 0};
    k[0] = (int)(f % shape[0]);
    f /= shape[0];
    k[1] = (int)(f % shape[1]);
    k[2] = (int)(f / shape[1]);
    return k;
  }
  // cell center of index k along axis i is origin_i + (k_i + 1/2) h
  std::array<double, 3> center(const Idx& k) const {
    return {origin[0] + (k[0] + 0.5) * h, origin[1] + (k[1] + 0.5) * h,
            origin[2] + (k[2] + 0.5) * h};
  }
  double cell_measure() const {
    double m = 1.0;
    for (int i = 0; i < dim; ++i) m *= h;
    return m;
  }
};

// Evaluation at lattice points outside the stored window. Pure and total.
struct ExtensionRule {
  enum class Kind {
    constant_inside,    // exterior cells belong to the set
    constant_outside,   // exterior cells do not belong to the set
    half_space,         // exterior membership: normal . center <= offset
    periodic,           // wrap every axis
    mirror              // reflect at the window faces
  };
  Kind kind = Kind::constant_outside;
  Idx normal{0, 0, 0};
  double offset = 0.0;

  static ExtensionRule constant_inside() { return {Kind::constant_inside, {0, 0, 0}, 0.0}; }
  static ExtensionRule constant_outside() { return {Kind::constant_outside, {0, 0, 0}, 0.0}; }
  static ExtensionRule half_space(Idx n, double c) {
    if (n[0] == 0 && n[1] == 0 && n[2] == 0)
      throw std::invalid_argument("half_space normal must be nonzero");
    return {Kind::half_space, n, c};
  }
  static ExtensionRule periodic() { return {Kind::periodic, {0, 0, 0}, 0.0}; }
  static ExtensionRule mirror() { return {Kind::mirror, {0, 0, 0}, 0.0}; }
};

inline int wrap_index(int k, int n) {
  int m = k % n;
  return m < 0 ? m + n : m;
}
inline int mirror_index(int k, int n) {
  // reflect into [0, n) with period 2n
  int m = wrap_index(k, 2 * n);
  return m < n ? m : 2 * n - 1 - m;
}

// Dense bit field over a GridGeometry plus an extension rule; membership is
// defined for every integer index. Optional lattice identification shifts
// (periods) are applied before the window lookup, which is how strip domains
// on a quotient lattice are represented.
class BinaryMask {
 public:
  GridGeometry geom;
  ExtensionRule extension = ExtensionRule::constant_outside();
  std::vector<Idx> periods;  // cell-unit identification shifts, may be empty

  BinaryMask() = default;
  explicit BinaryMask(const GridGeometry& g,
                      ExtensionRule ext = ExtensionRule::constant_outside())
      : geom(g), extension(ext), bits_((size_t)g.cell_count(), 0) {}

  bool bit(long long flat) const { return bits_[(size_t)flat] != 0; }
  bool bit(const Idx& k) const { return bits_[(size_t)geom.flatten(k)] != 0; }
  void set_bit(const Idx& k, bool v) { bits_[(size_t)geom.flatten(k)] = v ? 1 : 0; }
  const std::vector<uint8_t>& raw() const { return bits_; }
  std::vector<uint8_t>& raw() { return bits_; }

  // Reduce an index modulo the identification shifts.
  Idx canonical(Idx k) const {
    if (periods.empty()) return k;
    for (const Idx& p : periods) {
      long long pp = sqnorm(p);
      if (pp == 0) continue;
      long long t = dot(k, p);
      long long m = t >= 0 ? t / pp : -((-t + pp - 1) / pp);
      k = {k[0] - (int)(m * p[0]), k[1] - (int)(m * p[1]), k[2] - (int)(m * p[2])};
    }
    return k;
  }

  // Total membership query, extension-aware.
  bool contains(Idx k) const {
    k = canonical(k);
    if (geom.in_window(k)) return bit(k);
    switch (extension.kind) {
      case ExtensionRule::Kind::constant_inside:
        return true;
      case ExtensionRule::Kind::constant_outside:
        return false;
      case ExtensionRule::Kind::periodic: {
        Idx w = k;
        for (int i = 0; i < geom.dim; ++i) w[i] = wrap_index(k[i], geom.shape[i]);
        for (int i = geom.dim; i < 3; ++i) w[i] = 0;
        return bit(w);
      }
      case ExtensionRule::Kind::mirror: {
        Idx w = k;
        for (int i = 0; i < geom.dim; ++i) w[i] = mirror_index(k[i], geom.shape[i]);
        for (int i = geom.dim; i < 3; ++i) w[i] = 0;
        return bit(w);
      }
      case ExtensionRule::Kind::half_space: {
        auto c = geom.center(k);
        double v = extension.normal[0] * c[0] + extension.normal[1] * c[1] +
                   extension.normal[2] * c[2];
        return v <= extension.offset;
      }
    }
    return false;
  }

  long long count_set() const {
    long long n = 0;
    for (uint8_t b : bits_) n += b;
    return n;
  }

  BinaryMask complement() const {
    BinaryMask out = *this;
    out.extension = complement_rule(extension);
    for (auto& b : out.bits_) b = b ? 0 : 1;
    return out;
  }

  static ExtensionRule complement_rule(const ExtensionRule& e) {
    switch (e.kind) {
      case ExtensionRule::Kind::constant_inside: return ExtensionRule::constant_outside();
      case ExtensionRule::Kind::constant_outside: return ExtensionRule::constant_inside();
      case ExtensionRule::Kind::half_space: {
        // complement of {n.x <= c} is {(-n).x <= -c} up to the measure-zero face
        ExtensionRule r = e;
        r.normal = neg(e.normal);
        r.offset = -e.offset;
        return r;
      }
      default: return e;  // periodic/mirror commute with complement
    }
  }

 private:
  std::vector<uint8_t> bits_;
};

inline BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b) {
  BinaryMask out = a;
  for (size_t i = 0; i < out.raw().size(); ++i)
    out.raw()[i] = (a.raw()[i] && b.raw()[i]) ? 1 : 0;
  return out;
}
inline BinaryMask mask_or(const BinaryMask& a, const BinaryMask& b) {
  BinaryMask out = a;
  for (size_t i = 0; i < out.raw().size(); ++i)
    out.raw()[i] = (a.raw()[i] || b.raw()[i]) ? 1 : 0;
  return out;
}
inline long long mask_xor_count(const BinaryMask& a, const BinaryMask& b) {
  long long n = 0;
  for (size_t i = 0; i < a.raw().size(); ++i)
    if (a.raw()[i] != b.raw()[i]) ++n;
  return n;
}

// One real per cell; extension is zero or periodic.
class ScalarField {
 public:
  enum class Ext { zero, periodic };
  GridGeometry geom;
  Ext extension = Ext::zero;

  ScalarField() = default;
  explicit ScalarField(const GridGeometry& g, Ext ext = Ext::zero)
      : geom(g), extension(ext), values_((size_t)g.cell_count(), 0.0) {}

  double at(const Idx& k) const {
    if (geom.in_window(k)) return values_[(size_t)geom.flatten(k)];
    if (extension == Ext::zero) return 0.0;
    Idx w = k;
    for (int i = 0; i < geom.dim; ++i) w[i] = wrap_index(k[i], geom.shape[i]);
    for (int i = geom.dim; i < 3; ++i) w[i] = 0;
    return values_[(size_t)geom.flatten(w)];
  }
  void set(const Idx& k, double v) { values_[(size_t)geom.flatten(k)] = v; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

 private:
  std::vector<double> values_;
};

// Largest integer T with T <= (r/h)^2, tolerant of representation noise so
// that exact ties |k| h = r land inside the closed ball.
inline long long sq_cell_radius(double r, double h) {
  if (r < 0) return -1;
  long double t = (long double)r / h;
  t *= t;
  return (long long)std::floor(t * (1.0L + 1e-12L) + 1e-9L);
}

// Integer offsets realizing the closed Euclidean ball |k| h <= r.
struct BallStencil {
  double r = 0.0;
  double h = 1.0;
  int dim = 2;
  std::vector<Idx> offsets;  // lexicographically sorted, symmetric under negation

  long long cardinality() const { return (long long)offsets.size(); }
};

inline BallStencil ball_stencil(double r, double h, int dim, int radius_cap = 256) {
  if (r <= 0.0) throw std::invalid_argument("stencil radius must be positive");
  if (h <= 0.0) throw std::invalid_argument("spacing must be positive");
  if (dim < 1 || dim > 3) throw std::invalid_argument("dim must be 1, 2 or 3");
  long long t = sq_cell_radius(r, h);
  long long m = (long long)std::floor(std::sqrt((double)t)) + 1;
  while (m * m > t) --m;
  if (m > radius_cap)
    throw std::invalid_argument("stencil radius r/h = " + std::to_string(m) +
                                " exceeds cap " + std::to_string(radius_cap));
  BallStencil s;
  s.r = r;
  s.h = h;
  s.dim = dim;
  int mz = dim >= 3 ? (int)m : 0;
  int my = dim >= 2 ? (int)m : 0;
  for (int z = -mz; z <= mz; ++z)
    for (int y = -my; y <= my; ++y)
      for (int x = -(int)m; x <= (int)m; ++x) {
        long long q = (long long)x * x + (long long)y * y + (long long)z * z;
        if (q <= t) s.offsets.push_back({x, y, z});
      }
  std::sort(s.offsets.begin(), s.offsets.end());
  return s;
}

inline double volume(const BinaryMask& mask) {
  return (double)mask.count_set() * mask.geom.cell_measure();
}

}  // namespace rperi
