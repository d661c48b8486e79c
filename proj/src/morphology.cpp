#include "rperi/morphology.hpp"

#include <algorithm>

namespace rperi {
namespace {

// 1D pass: f[i] = min over set cells j of (i-j)^2, via nearest set index on
// each side.
void line_init(const uint8_t* bits, long long n, long long stride,
               long long* out, long long out_stride) {
  long long last = -kDistInf;
  for (long long i = 0; i < n; ++i) {
    if (bits[i * stride]) last = i;
    long long d = i - last;
    out[i * out_stride] = d >= (1 << 26) ? kDistInf : d * d;
  }
  last = kDistInf;
  for (long long i = n - 1; i >= 0; --i) {
    if (bits[i * stride]) last = i;
    long long d = last - i;
    long long v = d >= (1 << 26) ? kDistInf : d * d;
    if (v < out[i * out_stride]) out[i * out_stride] = v;
  }
}

// Lower envelope of parabolas f[j] + (i-j)^2 (Felzenszwalb-Huttenlocher).
// Unreachable entries carry kDistInf; sums stay below 2^53 so the double
// arithmetic on integer values is exact and no special casing is needed.
void line_envelope(long long* f, long long n, long long stride,
                   std::vector<long long>& v, std::vector<double>& z,
                   std::vector<long long>& scratch) {
  v.resize((size_t)n);
  z.resize((size_t)n + 1);
  scratch.resize((size_t)n);
  for (long long i = 0; i < n; ++i) scratch[(size_t)i] = f[i * stride];
  long long k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  for (long long q = 1; q < n; ++q) {
    double s;
    while (true) {
      long long p = v[(size_t)k];
      s = ((double)(scratch[(size_t)q] + q * q) -
           (double)(scratch[(size_t)p] + p * p)) /
          (double)(2 * (q - p));
      if (s <= z[(size_t)k])
        --k;  // z[0] = -inf guards the bottom
      else
        break;
    }
    ++k;
    v[(size_t)k] = q;
    z[(size_t)k] = s;
    z[(size_t)k + 1] = std::numeric_limits<double>::infinity();
  }
  long long j = 0;
  for (long long i = 0; i < n; ++i) {
    while (z[(size_t)j + 1] < (double)i) ++j;
    long long p = v[(size_t)j];
    long long val = scratch[(size_t)p] + (i - p) * (i - p);
    f[i * stride] = val >= kDistInf ? kDistInf : val;
  }
}

DistanceField edt_impl(const BinaryMask& mask, bool complemented, int horizon) {
  const GridGeometry& g = mask.geom;
  std::array<int, 3> pad{0, 0, 0};
  for (int i = 0; i < g.dim; ++i) {
    bool per = g.periodic[i] ||
               mask.extension.kind == ExtensionRule::Kind::periodic;
    int hz = horizon < 0 ? std::max(g.shape[i], 1) : horizon;
    pad[i] = per ? g.shape[i] : hz;
  }
  std::array<long long, 3> P{g.shape[0] + 2LL * pad[0], g.shape[1] + 2LL * pad[1],
                             g.shape[2] + 2LL * pad[2]};
  size_t total = (size_t)(P[0] * P[1] * P[2]);
  std::vector<uint8_t> bits(total);
  bool any = false;
  {
    size_t at = 0;
    Idx k{0, 0, 0};
    for (long long z = 0; z < P[2]; ++z)
      for (long long y = 0; y < P[1]; ++y)
        for (long long x = 0; x < P[0]; ++x, ++at) {
          k = {(int)(x - pad[0]), (int)(y - pad[1]), (int)(z - pad[2])};
          bool b = mask.contains(k);
          if (complemented) b = !b;
          bits[at] = b ? 1 : 0;
          any = any || b;
        }
  }
  if (!any) {
    // nothing visible within the horizon; empty only if the extension cannot
    // supply far-away cells
    bool truly_empty =
        mask.extension.kind == (complemented ? ExtensionRule::Kind::constant_inside
                                             : ExtensionRule::Kind::constant_outside) ||
        mask.extension.kind == ExtensionRule::Kind::periodic ||
        mask.extension.kind == ExtensionRule::Kind::mirror;
    if (truly_empty) throw EmptySetError();
    DistanceField out{g, std::vector<long long>((size_t)g.cell_count(), kDistInf)};
    return out;
  }

  std::vector<long long> d(total);
  // axis 0
  for (long long z = 0; z < P[2]; ++z)
    for (long long y = 0; y < P[1]; ++y) {
      size_t base = (size_t)((z * P[1] + y) * P[0]);
      line_init(&bits[base], P[0], 1, &d[base], 1);
    }
  std::vector<long long> v;
  std::vector<double> zbuf;
  std::vector<long long> scratch;
  // axis 1
  if (g.dim >= 2)
    for (long long z = 0; z < P[2]; ++z)
      for (long long x = 0; x < P[0]; ++x) {
        size_t base = (size_t)(z * P[1] * P[0] + x);
        line_envelope(&d[base], P[1], P[0], v, zbuf, scratch);
      }
  // axis 2
  if (g.dim >= 3)
    for (long long y = 0; y < P[1]; ++y)
      for (long long x = 0; x < P[0]; ++x) {
        size_t base = (size_t)(y * P[0] + x);
        line_envelope(&d[base], P[2], P[1] * P[0], v, zbuf, scratch);
      }

  DistanceField out{g, std::vector<long long>((size_t)g.cell_count())};
  Idx k{0, 0, 0};
  for (k[2] = 0; k[2] < g.shape[2]; ++k[2])
    for (k[1] = 0; k[1] < g.shape[1]; ++k[1])
      for (k[0] = 0; k[0] < g.shape[0]; ++k[0]) {
        size_t at = (size_t)(((k[2] + pad[2]) * P[1] + k[1] + pad[1]) * P[0] +
                             k[0] + pad[0]);
        out.sq_cells[(size_t)g.flatten(k)] = d[at];
      }
  return out;
}

int threshold_horizon(const GridGeometry& g, double r) {
  long long t = sq_cell_radius(r, g.h);
  long long m = (long long)std::floor(std::sqrt((double)std::max(t, 0LL))) + 2;
  return (int)std::min<long long>(m, 1 << 20);
}

}  // namespace

DistanceField distance_transform(const BinaryMask& mask, int horizon) {
  return edt_impl(mask, false, horizon);
}
DistanceField distance_transform_complement(const BinaryMask& mask, int horizon) {
  return edt_impl(mask, true, horizon);
}

BinaryMask dilate(const BinaryMask& mask, double r) {
  if (r < 0) throw std::invalid_argument("dilate radius must be >= 0");
  BinaryMask out = mask;
  if (out.extension.kind == ExtensionRule::Kind::half_space) {
    double nn = std::sqrt((double)sqnorm(out.extension.normal));
    out.extension.offset += r * nn;
  }
  long long t = sq_cell_radius(r, mask.geom.h);
  try {
    DistanceField d = edt_impl(mask, false, threshold_horizon(mask.geom, r));
    for (size_t i = 0; i < out.raw().size(); ++i)
      out.raw()[i] = d.sq_cells[i] <= t ? 1 : 0;
  } catch (const EmptySetError&) {
    std::fill(out.raw().begin(), out.raw().end(), 0);
  }
  return out;
}

BinaryMask erode(const BinaryMask& mask, double r) {
  if (r < 0) throw std::invalid_argument("erode radius must be >= 0");
  BinaryMask out = mask;
  if (out.extension.kind == ExtensionRule::Kind::half_space) {
    double nn = std::sqrt((double)sqnorm(out.extension.normal));
    out.extension.offset -= r * nn;
  }
  long long t = sq_cell_radius(r, mask.geom.h);
  try {
    DistanceField d = edt_impl(mask, true, threshold_horizon(mask.geom, r));
    for (size_t i = 0; i < out.raw().size(); ++i)
      out.raw()[i] = d.sq_cells[i] > t ? 1 : 0;
  } catch (const EmptySetError&) {
    std::fill(out.raw().begin(), out.raw().end(), 1);
  }
  return out;
}

BinaryMask oscillation_field(const BinaryMask& mask, double r) {
  if (r <= 0) throw std::invalid_argument("oscillation radius must be positive");
  BinaryMask out = mask;
  out.extension = ExtensionRule::constant_outside();
  long long t = sq_cell_radius(r, mask.geom.h);
  int hz = threshold_horizon(mask.geom, r);
  std::vector<long long> din, dout;
  bool empty_in = false, empty_out = false;
  try {
    din = edt_impl(mask, false, hz).sq_cells;
  } catch (const EmptySetError&) {
    empty_in = true;
  }
  try {
    dout = edt_impl(mask, true, hz).sq_cells;
  } catch (const EmptySetError&) {
    empty_out = true;
  }
  for (size_t i = 0; i < out.raw().size(); ++i)
    out.raw()[i] = (!empty_in && !empty_out && din[i] <= t && dout[i] <= t) ? 1 : 0;
  return out;
}

CubeHull cube_hull(const BinaryMask& mask, double r) {
  const GridGeometry& g = mask.geom;
  double side = r / (4.0 * std::sqrt((double)g.dim));
  if (side < g.h * (1.0 - 1e-12)) throw CubeTooSmallError();
  int c = (int)std::ceil(side / g.h - 1e-9);  // whole cells, rounded up
  if (c < 1) c = 1;

  CubeHull out;
  out.cells_per_side = c;
  out.hull = BinaryMask(g, mask.extension);

  std::array<int, 3> nblk{1, 1, 1};
  for (int i = 0; i < g.dim; ++i) nblk[i] = (g.shape[i] + c - 1) / c;
  std::vector<uint8_t> occ((size_t)nblk[0] * nblk[1] * nblk[2], 0);
  auto blk = [&](const Idx& k) {
    return ((size_t)(k[2] / c) * nblk[1] + k[1] / c) * nblk[0] + k[0] / c;
  };
  Idx k{0, 0, 0};
  for (k[2] = 0; k[2] < g.shape[2]; ++k[2])
    for (k[1] = 0; k[1] < g.shape[1]; ++k[1])
      for (k[0] = 0; k[0] < g.shape[0]; ++k[0])
        if (mask.bit(k)) occ[blk(k)] = 1;
  long long sd = 0;
  for (k[2] = 0; k[2] < g.shape[2]; ++k[2])
    for (k[1] = 0; k[1] < g.shape[1]; ++k[1])
      for (k[0] = 0; k[0] < g.shape[0]; ++k[0]) {
        bool h = occ[blk(k)] != 0;
        out.hull.set_bit(k, h);
        if (h != mask.bit(k)) ++sd;
      }
  out.symm_diff_volume = (double)sd * g.cell_measure();

  long long faces = 0;
  for (k[2] = 0; k[2] < g.shape[2]; ++k[2])
    for (k[1] = 0; k[1] < g.shape[1]; ++k[1])
      for (k[0] = 0; k[0] < g.shape[0]; ++k[0]) {
        if (!out.hull.bit(k)) continue;
        for (int ax = 0; ax < g.dim; ++ax)
          for (int s = -1; s <= 1; s += 2) {
            Idx nb = k;
            nb[ax] += s;
            bool covered = g.in_window(nb) && out.hull.bit(nb);
            if (!covered) ++faces;
          }
      }
  double hface = 1.0;
  for (int i = 0; i < g.dim - 1; ++i) hface *= g.h;
  out.face_perimeter = (double)faces * hface;
  return out;
}

}  // namespace rperi
