#include "rperi/energy.hpp"

#include "rperi/morphology.hpp"

#include <algorithm>
#include <map>

namespace rperi {

long long perimeter_count(const BinaryMask& mask, const Window& window, double r) {
  if (r <= 0) throw std::invalid_argument("perimeter radius must be positive");
  BinaryMask osc = oscillation_field(mask, r);
  return count_in_window(osc, window);
}

double perimeter_r(const BinaryMask& mask, const Window& window, double r) {
  return (double)perimeter_count(mask, window, r) * mask.geom.cell_measure() /
         (2.0 * r);
}

EnergyBreakdown energy(const BinaryMask& mask, const ScalarField& g,
                       const Window& window, double r) {
  EnergyBreakdown out;
  out.r = r;
  out.h = mask.geom.h;
  out.oscillation_cells = perimeter_count(mask, window, r);
  out.perimeter_term =
      (double)out.oscillation_cells * mask.geom.cell_measure() / (2.0 * r);
  const GridGeometry& geo = mask.geom;
  double bulk = 0.0;
  Idx k{0, 0, 0};
  for (k[2] = 0; k[2] < geo.shape[2]; ++k[2])
    for (k[1] = 0; k[1] < geo.shape[1]; ++k[1])
      for (k[0] = 0; k[0] < geo.shape[0]; ++k[0]) {
        if (!mask.periods.empty() && mask.canonical(k) != k) continue;
        if (mask.bit(k) && window.contains(k, geo)) bulk += g.at(k);
      }
  out.bulk_term = bulk * geo.cell_measure();
  out.total = out.perimeter_term + out.bulk_term;
  return out;
}

CoareaResult coarea_check(const ScalarField& u, const Window& window, double r) {
  const GridGeometry& geo = u.geom;
  constexpr long long kScale = 1 << 20;
  // quantized level set
  std::map<long long, int> levels;
  for (double v : u.values()) {
    if (!std::isfinite(v)) throw std::invalid_argument("field has non-finite values");
    levels[(long long)std::llround(v * kScale)] = 0;
  }
  long long ext_q = 0;
  if (u.extension == ScalarField::Ext::zero) levels[0] = 0;
  if (levels.size() > 64)
    throw std::invalid_argument("coarea_check: more than 64 distinct levels");
  std::vector<long long> lv;
  for (auto& [q, id] : levels) {
    id = (int)lv.size();
    lv.push_back(q);
  }

  auto quant = [&](const Idx& k) { return (long long)std::llround(u.at(k) * kScale); };

  // lhs: direct oscillation over the ball stencil
  BallStencil st = ball_stencil(r, geo.h, geo.dim);
  long long lhs = 0;
  Idx k{0, 0, 0};
  for (k[2] = 0; k[2] < geo.shape[2]; ++k[2])
    for (k[1] = 0; k[1] < geo.shape[1]; ++k[1])
      for (k[0] = 0; k[0] < geo.shape[0]; ++k[0]) {
        if (!window.contains(k, geo)) continue;
        long long mx = std::numeric_limits<long long>::min();
        long long mn = std::numeric_limits<long long>::max();
        for (const Idx& o : st.offsets) {
          long long q = quant(add(k, o));
          mx = std::max(mx, q);
          mn = std::min(mn, q);
        }
        lhs += mx - mn;
      }

  // rhs: perimeters of superlevel sets via the distance-transform route
  long long rhs = 0;
  for (size_t j = 0; j + 1 < lv.size(); ++j) {
    long long s = lv[j];
    ExtensionRule ext = ExtensionRule::constant_outside();
    if (u.extension == ScalarField::Ext::periodic)
      ext = ExtensionRule::periodic();
    else if (ext_q > s)
      ext = ExtensionRule::constant_inside();
    BinaryMask sup(geo, ext);
    for (size_t i = 0; i < sup.raw().size(); ++i)
      sup.raw()[i] =
          (long long)std::llround(u.values()[i] * kScale) > s ? 1 : 0;
    rhs += (lv[j + 1] - s) * perimeter_count(sup, window, r);
  }

  CoareaResult out;
  out.lhs_scaled = lhs;
  out.rhs_scaled = rhs;
  double unit = geo.cell_measure() / (double)kScale;
  out.lhs = (double)lhs * unit;
  out.rhs = (double)rhs * unit;
  return out;
}

long long submodularity_slack_count(const BinaryMask& A, const BinaryMask& B,
                                    const Window& window, double r) {
  return perimeter_count(A, window, r) + perimeter_count(B, window, r) -
         perimeter_count(mask_and(A, B), window, r) -
         perimeter_count(mask_or(A, B), window, r);
}

double submodularity_slack(const BinaryMask& A, const BinaryMask& B,
                           const Window& window, double r) {
  return (double)submodularity_slack_count(A, B, window, r) *
         A.geom.cell_measure() / (2.0 * r);
}

}  // namespace rperi
