#pragma once

#include "rperi/grid.hpp"

// Cell subsets used to localize energies: the whole stored window, an index
// rectangle, a ball around a point, or a band lo < n.c < hi.

namespace rperi {

struct Window {
  enum class Kind { all, rect, ball, band };
  Kind kind = Kind::all;
  Idx lo{0, 0, 0}, hi{0, 0, 0};           // rect, inclusive cell bounds
  std::array<double, 3> center{0, 0, 0};  // ball
  double R = 0.0;
  Idx normal{0, 0, 0};                    // band: lo_v < normal.center(k) < hi_v
  double lo_v = 0.0, hi_v = 0.0;

  static Window all() { return {}; }
  static Window rect(Idx lo, Idx hi) {
    Window w; w.kind = Kind::rect; w.lo = lo; w.hi = hi; return w;
  }
  static Window ball(std::array<double, 3> c, double R) {
    Window w; w.kind = Kind::ball; w.center = c; w.R = R; return w;
  }
  static Window band(Idx n, double lo, double hi) {
    Window w; w.kind = Kind::band; w.normal = n; w.lo_v = lo; w.hi_v = hi; return w;
  }

  bool contains(const Idx& k, const GridGeometry& geom) const {
    switch (kind) {
      case Kind::all:
        return true;
      case Kind::rect:
        for (int i = 0; i < geom.dim; ++i)
          if (k[i] < lo[i] || k[i] > hi[i]) return false;
        return true;
      case Kind::ball: {
        auto c = geom.center(k);
        double d2 = 0;
        for (int i = 0; i < geom.dim; ++i) {
          double d = c[i] - center[i];
          d2 += d * d;
        }
        return d2 < R * R;
      }
      case Kind::band: {
        auto c = geom.center(k);
        double t = normal[0] * c[0] + normal[1] * c[1] + normal[2] * c[2];
        return t > lo_v && t < hi_v;
      }
    }
    return false;
  }
};

// Counts set cells inside the window; on quotient masks each identification
// class is counted once (through its canonical representative).
inline long long count_in_window(const BinaryMask& mask, const Window& window) {
  const GridGeometry& g = mask.geom;
  const bool quotient = !mask.periods.empty();
  long long n = 0;
  Idx k{0, 0, 0};
  for (k[2] = 0; k[2] < g.shape[2]; ++k[2])
    for (k[1] = 0; k[1] < g.shape[1]; ++k[1])
      for (k[0] = 0; k[0] < g.shape[0]; ++k[0]) {
        if (quotient && mask.canonical(k) != k) continue;
        if (mask.bit(k) && window.contains(k, g)) ++n;
      }
  return n;
}

inline double volume(const BinaryMask& mask, const Window& window) {
  return (double)count_in_window(mask, window) * mask.geom.cell_measure();
}

}  // namespace rperi
