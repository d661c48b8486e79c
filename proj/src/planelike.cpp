#include "rperi/planelike.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

namespace rperi {
namespace {

int igcd(int a, int b) { return std::gcd(std::abs(a), std::abs(b)); }

Idx scaled(const Idx& k, long long m) {
  return {(int)(k[0] * m), (int)(k[1] * m), (int)(k[2] * m)};
}

int cells_per_unit(double h) {
  double s = 1.0 / h;
  long long si = (long long)std::llround(s);
  if (si < 1 || std::abs(s - (double)si) > 1e-9 * s)
    throw SpecError("1/h must be an integer for lattice-periodic strips");
  return (int)si;
}

Idx origin_cell(const GridGeometry& g) {
  return {(int)std::llround(g.origin[0] / g.h), (int)std::llround(g.origin[1] / g.h),
          (int)std::llround(g.origin[2] / g.h)};
}

// does every x satisfy mask(x - k) => mask(x)?  (i.e. mask + k inside mask)
bool shift_subset(const BinaryMask& mask, const Idx& k) {
  const GridGeometry& g = mask.geom;
  int mx = std::abs(k[0]) + 1, my = std::abs(k[1]) + 1;
  Idx x{0, 0, 0};
  for (x[1] = -my; x[1] < g.shape[1] + my; ++x[1])
    for (x[0] = -mx; x[0] < g.shape[0] + mx; ++x[0])
      if (mask.contains(sub(x, k)) && !mask.contains(x)) return false;
  return true;
}

long long cube_cells(const BinaryMask& mask, const Idx& kmin, const Idx& j, int s,
                     int dim) {
  long long cnt = 0;
  Idx kg{0, 0, 0};
  int side = dim * s;
  for (int dy = 0; dy < (dim >= 2 ? side : 1); ++dy)
    for (int dx = 0; dx < side; ++dx) {
      kg = {j[0] * s + dx, j[1] * s + dy, 0};
      if (mask.contains(sub(kg, kmin))) ++cnt;
    }
  return cnt;
}

void stat_add(ClassStat& c, double t) {
  ++c.count;
  c.t_min = std::min(c.t_min, t);
  c.t_max = std::max(c.t_max, t);
}

// integer-coordinate cube corners j, one per period class, with cube-center
// height inside [t_lo, t_hi]
template <typename F>
void for_each_cube(const RationalDirection& dir, double t_lo, double t_hi, F&& f) {
  const Idx& K = dir.period_basis.at(0);
  long long kk = sqnorm(K);
  // bounding box of the fundamental parallelogram in j-space
  double lox = 1e18, hix = -1e18, loy = 1e18, hiy = -1e18;
  for (int a = 0; a <= 1; ++a)
    for (int b = 0; b <= 1; ++b) {
      double tb = b ? t_hi + 1.0 : t_lo - dir.dim - 1.0;
      double px = a * K[0] + tb * dir.omega_unit[0];
      double py = a * K[1] + tb * dir.omega_unit[1];
      lox = std::min(lox, px);
      hix = std::max(hix, px);
      loy = std::min(loy, py);
      hiy = std::max(hiy, py);
    }
  Idx j{0, 0, 0};
  for (j[1] = (int)std::floor(loy) - 1; j[1] <= (int)std::ceil(hiy) + 1; ++j[1])
    for (j[0] = (int)std::floor(lox) - 1; j[0] <= (int)std::ceil(hix) + 1; ++j[0]) {
      long long d = dot(j, K);
      if (d < 0 || d >= kk) continue;
      double tc = 0;
      for (int i = 0; i < dir.dim; ++i)
        tc += dir.omega_unit[(size_t)i] * (j[(size_t)i] + 0.5 * dir.dim);
      if (tc < t_lo || tc > t_hi) continue;
      f(j, tc);
    }
}

}  // namespace

RationalDirection rational_basis(Idx omega_int, int dim) {
  RationalDirection d;
  d.dim = dim;
  for (int i = dim; i < 3; ++i)
    if (omega_int[(size_t)i] != 0)
      throw SpecError("direction has components beyond the dimension");
  long long nn = sqnorm(omega_int);
  if (nn == 0) throw SpecError("direction must be nonzero");
  int g = 0;
  for (int i = 0; i < dim; ++i) g = igcd(g, omega_int[(size_t)i]);
  for (int i = 0; i < 3; ++i) d.omega_int[(size_t)i] = omega_int[(size_t)i] / std::max(g, 1);
  double norm = std::sqrt((double)sqnorm(d.omega_int));
  for (int i = 0; i < 3; ++i) d.omega_unit[(size_t)i] = d.omega_int[(size_t)i] / norm;

  if (dim == 2) {
    d.period_basis.push_back({d.omega_int[1], -d.omega_int[0], 0});
  } else if (dim == 3) {
    Idx k1;
    if (d.omega_int[0] == 0 && d.omega_int[1] == 0)
      k1 = {1, 0, 0};
    else {
      int gg = igcd(d.omega_int[0], d.omega_int[1]);
      k1 = {d.omega_int[1] / gg, -d.omega_int[0] / gg, 0};
    }
    const Idx& w = d.omega_int;
    Idx k2 = {w[1] * k1[2] - w[2] * k1[1], w[2] * k1[0] - w[0] * k1[2],
              w[0] * k1[1] - w[1] * k1[0]};
    int gg = igcd(igcd(k2[0], k2[1]), k2[2]);
    if (gg > 1)
      for (auto& c : k2) c /= gg;
    d.period_basis.push_back(k1);
    d.period_basis.push_back(k2);
  }
  for (const Idx& k : d.period_basis)
    if (dot(k, d.omega_int) != 0) throw std::logic_error("basis not orthogonal");
  return d;
}

double strip_height(const RationalDirection& dir, const GridGeometry& geom, const Idx& k) {
  auto c = geom.center(k);
  double t = 0;
  for (int i = 0; i < dir.dim; ++i) t += dir.omega_unit[(size_t)i] * c[(size_t)i];
  return t;
}

void StripSpec::validate() const {
  if (direction.dim != 2) throw SpecError("strips are implemented for dim 2");
  if (M < 2.0) throw SpecError("strip half-width M must be at least 2");
  if (r <= 0.0) throw SpecError("radius must be positive");
  if (eta < 0.0) throw SpecError("eta must be nonnegative");
  int s = cells_per_unit(h);
  const GridGeometry& gg = g_cell.geom;
  if (gg.dim != direction.dim || gg.shape[0] != s || gg.shape[1] != s ||
      std::abs(gg.h - h) > 1e-12)
    throw SpecError("forcing must be sampled on one unit period cell");
  double sum = 0, sup = 0;
  for (double v : g_cell.values()) {
    sum += v;
    sup = std::max(sup, std::abs(v));
  }
  double cellm = std::pow(h, direction.dim);
  if (std::abs(sum * cellm) > 1e-9 + 1.0 / (double)(1 << 20))
    throw SpecError("forcing must have zero average over the period cell");
  if (sup > eta + 1e-12) throw SpecError("forcing exceeds the eta bound");
  double klen = std::sqrt((double)sqnorm(direction.period_basis.at(0)));
  if (klen < r - 1e-12)
    throw SpecError("strip cross-section is below one stencil radius");
}

ScalarField checkerboard_forcing(double h, double eta, int dim) {
  int s = cells_per_unit(h);
  GridGeometry g(dim, {s, dim >= 2 ? s : 1, dim >= 3 ? s : 1}, h);
  ScalarField u(g, ScalarField::Ext::periodic);
  // sign(sin 2 pi x) factors: odd around the half-unit centers, so the sum
  // over the period cell vanishes exactly for every sampling s
  auto sgn = [](double x) {
    double v = std::sin(2.0 * M_PI * x);
    return std::abs(v) < 1e-12 ? 0.0 : (v > 0 ? 1.0 : -1.0);
  };
  Idx k{0, 0, 0};
  for (k[2] = 0; k[2] < g.shape[2]; ++k[2])
    for (k[1] = 0; k[1] < g.shape[1]; ++k[1])
      for (k[0] = 0; k[0] < g.shape[0]; ++k[0]) {
        auto c = g.center(k);
        double v = eta;
        for (int i = 0; i < dim; ++i) v *= sgn(c[(size_t)i]);
        u.set(k, v);
      }
  return u;
}

DirichletSpec build_strip(const StripSpec& spec) {
  spec.validate();
  const RationalDirection& dir = spec.direction;
  int s = cells_per_unit(spec.h);
  Idx P = scaled(dir.period_basis.at(0), s);  // identification shift, cells
  long long pp = sqnorm(P);

  // bounding box of {0 <= k.P < pp, |t| < 2M} in cell coordinates
  double bc = 2.0 * spec.M / spec.h + 2.0;
  double lox = 1e18, hix = -1e18, loy = 1e18, hiy = -1e18;
  for (int a = 0; a <= 1; ++a)
    for (int b = -1; b <= 1; b += 2) {
      double px = (double)a * P[0] + b * bc * dir.omega_unit[0];
      double py = (double)a * P[1] + b * bc * dir.omega_unit[1];
      lox = std::min(lox, px);
      hix = std::max(hix, px);
      loy = std::min(loy, py);
      hiy = std::max(hiy, py);
    }
  Idx kmin{(int)std::floor(lox) - 2, (int)std::floor(loy) - 2, 0};
  Idx kmax{(int)std::ceil(hix) + 2, (int)std::ceil(hiy) + 2, 0};
  GridGeometry geom(2, {kmax[0] - kmin[0] + 1, kmax[1] - kmin[1] + 1, 1}, spec.h,
                    {false, false, false},
                    {kmin[0] * spec.h, kmin[1] * spec.h, 0.0});

  DirichletSpec d;
  d.geom = geom;
  d.r = spec.r;
  d.capacity_scale = spec.capacity_scale;
  d.boundary = BinaryMask(geom, ExtensionRule::half_space(dir.omega_int, 0.0));
  d.window = BinaryMask(geom);
  d.free_cells = BinaryMask(geom);
  d.boundary.periods.push_back(P);
  d.window.periods.push_back(P);
  d.free_cells.periods.push_back(P);
  d.g = ScalarField(geom);

  const GridGeometry& gcg = spec.g_cell.geom;
  Idx k{0, 0, 0};
  for (k[1] = 0; k[1] < geom.shape[1]; ++k[1])
    for (k[0] = 0; k[0] < geom.shape[0]; ++k[0]) {
      double t = strip_height(dir, geom, k);
      d.boundary.set_bit(k, t <= 0.0);
      bool canon = d.boundary.canonical(k) == k;
      d.window.set_bit(k, canon && std::abs(t) < 2.0 * spec.M);
      d.free_cells.set_bit(k, canon && std::abs(t) < spec.M);
      Idx kg = add(k, kmin);
      Idx cell{wrap_index(kg[0], s), wrap_index(kg[1], s), 0};
      d.g.set(k, spec.g_cell.values()[(size_t)gcg.flatten(cell)]);
    }
  return d;
}

ColorCensus classify_cubes(const BinaryMask& mask, const RationalDirection& dir,
                           double r, double t_lo, double t_hi) {
  int s = cells_per_unit(mask.geom.h);
  Idx kmin = origin_cell(mask.geom);
  double full_measure = std::pow((double)dir.dim, dir.dim);
  long long full_cnt = 1;
  for (int i = 0; i < dir.dim; ++i) full_cnt *= dir.dim * s;
  double cellm = mask.geom.cell_measure();
  double thresh = std::pow(r, dir.dim);
  if (2.0 * thresh > full_measure + 1e-12)
    throw SpecError("census threshold r^n exceeds half the cube measure");

  ColorCensus out;
  for_each_cube(dir, t_lo, t_hi, [&](const Idx& j, double tc) {
    long long cnt = cube_cells(mask, kmin, j, s, dir.dim);
    if (cnt == full_cnt) {
      stat_add(out.black, tc);
      return;
    }
    if (cnt == 0) {
      stat_add(out.white, tc);
      return;
    }
    stat_add(out.grey, tc);
    bool fb = (double)cnt * cellm >= thresh - 1e-9;
    bool fw = (double)(full_cnt - cnt) * cellm >= thresh - 1e-9;
    if (fb) stat_add(out.foggy_black, tc);
    if (fw) stat_add(out.foggy_white, tc);
    if (fb && fw) stat_add(out.multicolored, tc);
    if (fb && !fw) stat_add(out.almost_black, tc);
    if (fw && !fb) stat_add(out.almost_white, tc);
  });
  return out;
}

bool color_monotone(const BinaryMask& mask, const RationalDirection& dir,
                    double t_lo, double t_hi) {
  int s = cells_per_unit(mask.geom.h);
  Idx kmin = origin_cell(mask.geom);
  bool ok = true;
  for_each_cube(dir, t_lo, t_hi, [&](const Idx& j, double) {
    if (!ok) return;
    long long base = cube_cells(mask, kmin, j, s, dir.dim);
    for (int i = 0; i < dir.dim; ++i) {
      int sg = dir.omega_int[(size_t)i];
      if (sg == 0) continue;
      Idx u{0, 0, 0};
      u[(size_t)i] = sg > 0 ? 1 : -1;  // omega . u >= 0
      if (cube_cells(mask, kmin, add(j, u), s, dir.dim) > base) ok = false;
    }
  });
  return ok;
}

bool layers_ordered(const ColorCensus& census) {
  const ClassStat* chain[] = {&census.black, &census.almost_black, &census.multicolored,
                              &census.almost_white, &census.white};
  double prev_min = -1e18, prev_max = -1e18;
  for (const ClassStat* c : chain) {
    if (c->count == 0) continue;
    if (c->t_min < prev_min - 1e-9 || c->t_max < prev_max - 1e-9) return false;
    prev_min = c->t_min;
    prev_max = c->t_max;
  }
  return true;
}

bool check_birkhoff(const BinaryMask& mask, const RationalDirection& dir) {
  int s = cells_per_unit(mask.geom.h);
  std::vector<std::pair<Idx, long long>> gens;  // cell shift, omega . shift sign
  for (const Idx& K : dir.period_basis) gens.push_back({scaled(K, s), 0});
  for (int i = 0; i < dir.dim; ++i) {
    Idx e{0, 0, 0};
    e[(size_t)i] = s;
    Idx u{0, 0, 0};
    u[(size_t)i] = 1;
    gens.push_back({e, dot(dir.omega_int, u)});
  }
  // the negated generators reduce to the same two inclusions
  for (const auto& [k, d] : gens) {
    if (d <= 0 && !shift_subset(mask, k)) return false;       // E + k inside E
    if (d >= 0 && !shift_subset(mask, neg(k))) return false;  // E inside E + k
  }
  return true;
}

PlanelikeResult construct_planelike(const StripSpec& spec) {
  if (spec.eta > 0.25 + 1e-12)
    throw SpecError("eta above the experimentally safe smallness bound 0.25");
  PlanelikeResult out;
  out.problem = build_strip(spec);
  out.problem.validate();
  MinimizerResult res = solve(out.problem, Canonical::minimal);

  const RationalDirection& dir = spec.direction;
  const GridGeometry& geom = out.problem.geom;
  auto layer_bounds = [&](const BinaryMask& m, double& lo, double& hi) {
    lo = 1e18;
    hi = -1e18;
    Idx k{0, 0, 0};
    for (k[1] = 0; k[1] < geom.shape[1]; ++k[1])
      for (k[0] = 0; k[0] < geom.shape[0]; ++k[0]) {
        if (!out.problem.window.bit(k)) continue;
        double t = strip_height(dir, geom, k);
        if (m.bit(k))
          hi = std::max(hi, t);
        else
          lo = std::min(lo, t);
      }
  };
  double lo = 0, hi = 0;
  layer_bounds(res.mask, lo, hi);

  // phase normalization: every unit lattice shift preserves g, so translates
  // moving t by any multiple of 1/|omega| are energy-equal and the minimal
  // minimizer hugs the lower constraint. Center the transition at t = 0 in
  // those elementary steps, realized by a Bezout vector with omega . u = 1
  // (omega is primitive); shifting by whole omega periods only cannot always
  // reconcile the M and 2M problems.
  int s = cells_per_unit(spec.h);
  long long a = dir.omega_int[0], b = dir.omega_int[1];
  long long r0 = a, r1 = b, x0 = 1, x1 = 0, y0 = 0, y1 = 1;
  while (r1 != 0) {
    long long q = r0 / r1;
    std::tie(r0, r1) = std::pair{r1, r0 - q * r1};
    std::tie(x0, x1) = std::pair{x1, x0 - q * x1};
    std::tie(y0, y1) = std::pair{y1, y0 - q * y1};
  }
  if (r0 < 0) {
    r0 = -r0;
    x0 = -x0;
    y0 = -y0;
  }
  if (r0 != 1) throw std::logic_error("direction is not primitive");
  Idx u_cells = scaled(Idx{(int)x0, (int)y0, 0}, s);
  double wlen = std::sqrt((double)sqnorm(dir.omega_int));
  out.shift_steps = (long long)std::llround(-(lo + hi) * wlen / 2.0);
  out.mask = res.mask;
  if (out.shift_steps != 0) {
    Idx shift = scaled(u_cells, out.shift_steps);
    Idx k{0, 0, 0};
    for (k[1] = 0; k[1] < geom.shape[1]; ++k[1])
      for (k[0] = 0; k[0] < geom.shape[0]; ++k[0])
        out.mask.set_bit(k, res.mask.contains(sub(k, shift)));
  }
  out.scaled_energy = evaluate_scaled(out.problem, out.mask);
  if (out.scaled_energy != res.scaled_energy)
    throw std::logic_error("phase normalization changed the strip energy");
  out.energy = evaluate(out.problem, out.mask);

  layer_bounds(out.mask, out.t_lo, out.t_hi);
  out.width = std::max(0.0, out.t_hi - out.t_lo);
  out.census = classify_cubes(out.mask, dir, spec.r, -2.0 * spec.M - 2.0,
                              2.0 * spec.M + 2.0);
  out.birkhoff_ok = check_birkhoff(out.mask, dir);
  return out;
}

}  // namespace rperi
