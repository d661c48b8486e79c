#pragma once

#include "rperi/grid.hpp"

#include <functional>

// Shape rasterizers: a cell is set iff its center satisfies the shape
// predicate. Balls are half-open (|c - center| < R) so a degenerate R = 0
// ball is empty on every geometry.

namespace rperi {

struct Shape {
  enum class Kind { ball, half_space, annulus, stripes, bits };
  Kind kind = Kind::ball;
  std::array<double, 3> center{0, 0, 0};
  double R = 0.0;        // ball radius / annulus outer radius
  double R_in = 0.0;     // annulus inner radius
  Idx normal{0, 0, 0};   // half_space
  double offset = 0.0;   // half_space: normal . c <= offset
  double period = 1.0;   // stripes, along axis 0
  double duty = 0.5;
  std::vector<Idx> bits;

  static Shape ball(std::array<double, 3> c, double R) {
    if (R < 0) throw std::invalid_argument("ball radius must be >= 0");
    Shape s; s.kind = Kind::ball; s.center = c; s.R = R; return s;
  }
  static Shape half_space(Idx n, double off) {
    if (n[0] == 0 && n[1] == 0 && n[2] == 0)
      throw std::invalid_argument("half_space normal must be nonzero");
    Shape s; s.kind = Kind::half_space; s.normal = n; s.offset = off; return s;
  }
  static Shape annulus(std::array<double, 3> c, double R_in, double R_out) {
    if (R_in < 0 || R_out < R_in) throw std::invalid_argument("bad annulus radii");
    Shape s; s.kind = Kind::annulus; s.center = c; s.R_in = R_in; s.R = R_out; return s;
  }
  static Shape stripes(double period, double duty) {
    if (period <= 0 || duty < 0 || duty > 1) throw std::invalid_argument("bad stripes");
    Shape s; s.kind = Kind::stripes; s.period = period; s.duty = duty; return s;
  }
  static Shape explicit_bits(std::vector<Idx> b) {
    Shape s; s.kind = Kind::bits; s.bits = std::move(b); return s;
  }
};

inline BinaryMask rasterize(const Shape& shape, const GridGeometry& geom,
                            ExtensionRule ext = ExtensionRule::constant_outside()) {
  BinaryMask out(geom, ext);
  if (shape.kind == Shape::Kind::bits) {
    for (const Idx& k : shape.bits)
      if (geom.in_window(k)) out.set_bit(k, true);
    return out;
  }
  Idx k{0, 0, 0};
  for (k[2] = 0; k[2] < geom.shape[2]; ++k[2])
    for (k[1] = 0; k[1] < geom.shape[1]; ++k[1])
      for (k[0] = 0; k[0] < geom.shape[0]; ++k[0]) {
        auto c = geom.center(k);
        bool v = false;
        switch (shape.kind) {
          case Shape::Kind::ball: {
            double d2 = 0;
            for (int i = 0; i < geom.dim; ++i) {
              double d = c[i] - shape.center[i];
              d2 += d * d;
            }
            v = d2 < shape.R * shape.R;
            break;
          }
          case Shape::Kind::annulus: {
            double d2 = 0;
            for (int i = 0; i < geom.dim; ++i) {
              double d = c[i] - shape.center[i];
              d2 += d * d;
            }
            v = d2 >= shape.R_in * shape.R_in && d2 < shape.R * shape.R;
            break;
          }
          case Shape::Kind::half_space: {
            double t = shape.normal[0] * c[0] + shape.normal[1] * c[1] +
                       shape.normal[2] * c[2];
            v = t <= shape.offset;
            break;
          }
          case Shape::Kind::stripes: {
            double t = c[0] / shape.period;
            double f = t - std::floor(t);
            v = f < shape.duty;
            break;
          }
          case Shape::Kind::bits:
            break;
        }
        if (v) out.set_bit(k, true);
      }
  return out;
}

inline BinaryMask rasterize_predicate(
    const GridGeometry& geom,
    const std::function<bool(const std::array<double, 3>&)>& pred,
    ExtensionRule ext = ExtensionRule::constant_outside()) {
  BinaryMask out(geom, ext);
  Idx k{0, 0, 0};
  for (k[2] = 0; k[2] < geom.shape[2]; ++k[2])
    for (k[1] = 0; k[1] < geom.shape[1]; ++k[1])
      for (k[0] = 0; k[0] < geom.shape[0]; ++k[0])
        if (pred(geom.center(k))) out.set_bit(k, true);
  return out;
}

}  // namespace rperi
