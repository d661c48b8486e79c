#include "rperi/solver.hpp"

#include "rperi/io.hpp"
#include "rperi/maxflow.hpp"
#include "rperi/morphology.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace rperi {
namespace {

constexpr long long kForcing = -1;  // placeholder capacity, patched to the sentinel

long long quantized_forcing(const DirichletSpec& spec, long long flat) {
  double v = spec.g.values()[(size_t)flat] * 2.0 * spec.r * (double)spec.capacity_scale;
  if (std::abs(v) > 4.0e18) throw CapacityOverflow();
  return (long long)std::llround(v);
}

// free-cell id per flat index, -1 elsewhere
std::vector<int32_t> index_free(const DirichletSpec& spec, std::vector<long long>& flats) {
  std::vector<int32_t> id((size_t)spec.geom.cell_count(), -1);
  flats.clear();
  for (size_t i = 0; i < id.size(); ++i)
    if (spec.free_cells.raw()[i]) {
      id[i] = (int32_t)flats.size();
      flats.push_back((long long)i);
    }
  return id;
}

struct Resolved {
  int32_t id = -1;    // >= 0: free cell
  bool fixed_value = false;
};

Resolved resolve_cell(const DirichletSpec& spec, const std::vector<int32_t>& free_id,
                      Idx k) {
  Resolved out;
  Idx c = spec.boundary.canonical(k);
  if (spec.geom.in_window(c)) {
    out.id = free_id[(size_t)spec.geom.flatten(c)];
    if (out.id < 0) out.fixed_value = spec.boundary.bit(c);
  } else {
    out.fixed_value = spec.boundary.contains(k);
  }
  return out;
}

// Per-row binary-lifted interval nodes: level l >= 1 node (y, i) covers
// columns [i, i + 2^l). Forward tables fan out toward cells (for the alpha
// coverage side), reverse tables fan in from cells (beta side). Coverage is
// idempotent, so a segment is wired with at most two overlapping intervals.
struct IntervalTables {
  int W = 0, H = 0, levels = 0;
  std::vector<std::vector<int32_t>> fwd, rev;  // [level-1][y * span + i]

  int span(int l) const { return W - (1 << l) + 1; }
  int32_t fnode(int l, int y, int i) const {
    return fwd[(size_t)(l - 1)][(size_t)y * span(l) + i];
  }
  int32_t rnode(int l, int y, int i) const {
    return rev[(size_t)(l - 1)][(size_t)y * span(l) + i];
  }
};

IntervalTables build_tables(const DirichletSpec& spec,
                            const std::vector<int32_t>& free_id,
                            const std::vector<long long>& free_node, int max_len,
                            int& next_node, std::vector<CutGraph::Arc>& arcs) {
  IntervalTables t;
  t.W = spec.geom.shape[0];
  t.H = spec.geom.shape[1];
  t.levels = 0;
  while ((2 << t.levels) <= std::min(max_len, t.W)) ++t.levels;
  t.fwd.resize((size_t)t.levels);
  t.rev.resize((size_t)t.levels);
  for (int l = 1; l <= t.levels; ++l) {
    int sp = t.span(l);
    t.fwd[(size_t)(l - 1)].resize((size_t)sp * t.H);
    t.rev[(size_t)(l - 1)].resize((size_t)sp * t.H);
    for (int y = 0; y < t.H; ++y)
      for (int i = 0; i < sp; ++i) {
        int32_t f = next_node++;
        int32_t r = next_node++;
        t.fwd[(size_t)(l - 1)][(size_t)y * sp + i] = f;
        t.rev[(size_t)(l - 1)][(size_t)y * sp + i] = r;
        if (l == 1) {
          for (int dx = 0; dx < 2; ++dx) {
            int32_t fid = free_id[(size_t)y * t.W + i + dx];
            if (fid < 0) continue;
            int32_t cell = (int32_t)free_node[(size_t)fid];
            arcs.push_back({f, cell, kForcing});
            arcs.push_back({cell, r, kForcing});
          }
        } else {
          int half = 1 << (l - 1);
          arcs.push_back({f, t.fnode(l - 1, y, i), kForcing});
          arcs.push_back({f, t.fnode(l - 1, y, i + half), kForcing});
          arcs.push_back({t.rnode(l - 1, y, i), r, kForcing});
          arcs.push_back({t.rnode(l - 1, y, i + half), r, kForcing});
        }
      }
  }
  return t;
}

}  // namespace

void DirichletSpec::validate() const {
  auto same_geom = [&](const GridGeometry& g) {
    return g.dim == geom.dim && g.shape == geom.shape && g.h == geom.h;
  };
  if (!same_geom(window.geom) || !same_geom(free_cells.geom) ||
      !same_geom(boundary.geom) || !same_geom(g.geom))
    throw SpecError("window, free region, boundary and forcing must share the grid");
  if (r <= 0.0) throw SpecError("radius must be positive");
  if (capacity_scale <= 0) throw SpecError("capacity_scale must be positive");
  for (size_t i = 0; i < free_cells.raw().size(); ++i)
    if (free_cells.raw()[i] && !window.raw()[i])
      throw SpecError("free region must lie inside the window");
  // discrete erode-by-r constraint: every stencil read from a free cell
  // stays inside the window
  BinaryMask w = window;
  w.extension = ExtensionRule::constant_outside();
  w.periods = boundary.periods;
  BinaryMask ero = erode(w, r);
  for (size_t i = 0; i < free_cells.raw().size(); ++i)
    if (free_cells.raw()[i] && !ero.raw()[i])
      throw SpecError("free region must lie inside the r-erosion of the window");
}

CutGraph build_graph(const DirichletSpec& spec) {
  const GridGeometry& geom = spec.geom;
  const long long w = spec.capacity_scale;
  CutGraph g;
  g.offset = 0;
  std::vector<long long> free_flats;
  std::vector<int32_t> free_id = index_free(spec, free_flats);
  const int F = (int)free_flats.size();
  int next_node = 2;
  g.free_node.resize((size_t)F);
  g.free_flat = free_flats;
  for (int i = 0; i < F; ++i) g.free_node[(size_t)i] = next_node++;

  BallStencil st = ball_stencil(spec.r, geom.h, geom.dim);
  const long long T = sq_cell_radius(spec.r, geom.h);

  // bulk terms: free cells get terminal arcs, fixed-in window cells are
  // constants; negative parts fold into the offset
  for (size_t i = 0; i < spec.window.raw().size(); ++i) {
    if (!spec.window.raw()[i]) continue;
    int32_t fid = free_id[i];
    if (fid >= 0) {
      long long c = quantized_forcing(spec, (long long)i);
      if (c > 0)
        g.arcs.push_back({0, (int32_t)g.free_node[(size_t)fid], c});
      else if (c < 0) {
        g.arcs.push_back({(int32_t)g.free_node[(size_t)fid], 1, -c});
        g.offset += c;
      }
    } else if (spec.boundary.raw()[i]) {
      g.offset += quantized_forcing(spec, (long long)i);
    }
  }

  bool constant_ext = spec.boundary.extension.kind == ExtensionRule::Kind::constant_inside ||
                      spec.boundary.extension.kind == ExtensionRule::Kind::constant_outside;
  bool use_intervals = geom.dim == 2 && spec.boundary.periods.empty() &&
                       constant_ext && st.cardinality() > 2000;

  if (!use_intervals) {
    std::vector<int32_t> members;
    std::vector<int32_t> stamp((size_t)std::max(F, 1), -1);
    int round = 0;
    Idx x{0, 0, 0};
    for (x[2] = 0; x[2] < geom.shape[2]; ++x[2])
      for (x[1] = 0; x[1] < geom.shape[1]; ++x[1])
        for (x[0] = 0; x[0] < geom.shape[0]; ++x[0]) {
          if (!spec.window.bit(x)) continue;
          bool fixed_in = false, fixed_out = false;
          members.clear();
          ++round;
          for (const Idx& o : st.offsets) {
            Resolved res = resolve_cell(spec, free_id, add(x, o));
            if (res.id >= 0) {
              if (stamp[(size_t)res.id] != round) {
                stamp[(size_t)res.id] = round;
                members.push_back(res.id);
              }
            } else if (res.fixed_value) {
              fixed_in = true;
            } else {
              fixed_out = true;
            }
          }
          g.offset -= w;
          if (fixed_in)
            g.offset += w;
          else if (!members.empty()) {
            int32_t a = next_node++;
            g.arcs.push_back({0, a, w});
            for (int32_t m : members)
              g.arcs.push_back({a, (int32_t)g.free_node[(size_t)m], kForcing});
          }
          if (fixed_out)
            g.offset += w;
          else if (!members.empty()) {
            int32_t b = next_node++;
            g.arcs.push_back({b, 1, w});
            for (int32_t m : members)
              g.arcs.push_back({(int32_t)g.free_node[(size_t)m], b, kForcing});
          }
        }
  } else {
    // large-stencil path: per-row interval nodes replace the per-cell fanout
    const int W = geom.shape[0], H = geom.shape[1];
    const bool ext_in = spec.boundary.extension.kind == ExtensionRule::Kind::constant_inside;
    const int m = [&] {
      int mm = 0;
      while ((long long)(mm + 1) * (mm + 1) <= T) ++mm;
      return mm;
    }();
    std::vector<int> halfw((size_t)(2 * m + 1));
    for (int dy = -m; dy <= m; ++dy) {
      int hw = 0;
      while ((long long)(hw + 1) * (hw + 1) + (long long)dy * dy <= T) ++hw;
      halfw[(size_t)(dy + m)] = hw;
    }
    // per-row prefix counts of free and fixed-in cells
    std::vector<int32_t> pfree((size_t)H * (W + 1)), pfin((size_t)H * (W + 1));
    for (int y = 0; y < H; ++y) {
      int32_t af = 0, ai = 0;
      pfree[(size_t)y * (W + 1)] = 0;
      pfin[(size_t)y * (W + 1)] = 0;
      for (int xx = 0; xx < W; ++xx) {
        size_t flat = (size_t)y * W + xx;
        if (free_id[flat] >= 0)
          ++af;
        else if (spec.boundary.raw()[flat])
          ++ai;
        pfree[(size_t)y * (W + 1) + xx + 1] = af;
        pfin[(size_t)y * (W + 1) + xx + 1] = ai;
      }
    }
    IntervalTables tab =
        build_tables(spec, free_id, g.free_node, 2 * m + 1, next_node, g.arcs);
    auto emit_cover = [&](int32_t hub, int y, int l, int rr, bool forward) {
      int len = rr - l + 1;
      if (len == 1) {
        int32_t fid = free_id[(size_t)y * W + l];
        if (fid >= 0) {
          int32_t cell = (int32_t)g.free_node[(size_t)fid];
          if (forward)
            g.arcs.push_back({hub, cell, kForcing});
          else
            g.arcs.push_back({cell, hub, kForcing});
        }
        return;
      }
      int lev = 31 - std::countl_zero((unsigned)len);
      int j = rr - (1 << lev) + 1;
      if (forward) {
        g.arcs.push_back({hub, tab.fnode(lev, y, l), kForcing});
        if (j != l) g.arcs.push_back({hub, tab.fnode(lev, y, j), kForcing});
      } else {
        g.arcs.push_back({tab.rnode(lev, y, l), hub, kForcing});
        if (j != l) g.arcs.push_back({tab.rnode(lev, y, j), hub, kForcing});
      }
    };

    Idx x{0, 0, 0};
    for (x[1] = 0; x[1] < H; ++x[1])
      for (x[0] = 0; x[0] < W; ++x[0]) {
        if (!spec.window.bit(x)) continue;
        bool fixed_in = false, fixed_out = false, any_free = false;
        for (int dy = -m; dy <= m; ++dy) {
          int y = x[1] + dy;
          int hw = halfw[(size_t)(dy + m)];
          int lo = x[0] - hw, hi = x[0] + hw;
          if (y < 0 || y >= H) {
            (ext_in ? fixed_in : fixed_out) = true;
            continue;
          }
          int cl = std::max(lo, 0), ch = std::min(hi, W - 1);
          if (cl > lo || ch < hi) (ext_in ? fixed_in : fixed_out) = true;
          if (cl > ch) continue;
          size_t base = (size_t)y * (W + 1);
          int nf = pfree[base + ch + 1] - pfree[base + cl];
          int ni = pfin[base + ch + 1] - pfin[base + cl];
          int total = ch - cl + 1;
          if (nf > 0) any_free = true;
          if (ni > 0) fixed_in = true;
          if (total - nf - ni > 0) fixed_out = true;
        }
        g.offset -= w;
        int32_t a = -1, b = -1;
        if (fixed_in)
          g.offset += w;
        else if (any_free) {
          a = next_node++;
          g.arcs.push_back({0, a, w});
        }
        if (fixed_out)
          g.offset += w;
        else if (any_free) {
          b = next_node++;
          g.arcs.push_back({b, 1, w});
        }
        if (a < 0 && b < 0) continue;
        for (int dy = -m; dy <= m; ++dy) {
          int y = x[1] + dy;
          if (y < 0 || y >= H) continue;
          int hw = halfw[(size_t)(dy + m)];
          int cl = std::max(x[0] - hw, 0), ch = std::min(x[0] + hw, W - 1);
          if (cl > ch) continue;
          size_t base = (size_t)y * (W + 1);
          if (pfree[base + ch + 1] - pfree[base + cl] == 0) continue;
          if (a >= 0) emit_cover(a, y, cl, ch, true);
          if (b >= 0) emit_cover(b, y, cl, ch, false);
        }
      }
  }

  g.node_count = next_node;
  // materialize the forcing sentinel: sum of finite capacities + 1
  __int128 sum = 0;
  for (const auto& arc : g.arcs)
    if (arc.cap >= 0) sum += arc.cap;
  if (sum > (__int128)1 << 62) throw CapacityOverflow();
  g.infinity = (long long)sum + 1;
  long long forcing_count = 0;
  for (auto& arc : g.arcs)
    if (arc.cap < 0) {
      arc.cap = g.infinity;
      ++forcing_count;
    }
  if ((__int128)g.infinity * (forcing_count + 1) > (__int128)1 << 62)
    throw CapacityOverflow();
  return g;
}

long long evaluate_scaled(const DirichletSpec& spec, const BinaryMask& mask) {
  BinaryMask osc = oscillation_field(mask, spec.r);
  long long scaled = 0;
  for (size_t i = 0; i < spec.window.raw().size(); ++i) {
    if (!spec.window.raw()[i]) continue;
    if (osc.raw()[i]) scaled += spec.capacity_scale;
    if (mask.raw()[i]) scaled += quantized_forcing(spec, (long long)i);
  }
  return scaled;
}

EnergyBreakdown evaluate(const DirichletSpec& spec, const BinaryMask& mask) {
  BinaryMask osc = oscillation_field(mask, spec.r);
  long long cells = 0, bulk = 0;
  for (size_t i = 0; i < spec.window.raw().size(); ++i) {
    if (!spec.window.raw()[i]) continue;
    if (osc.raw()[i]) ++cells;
    if (mask.raw()[i]) bulk += quantized_forcing(spec, (long long)i);
  }
  EnergyBreakdown e;
  e.r = spec.r;
  e.h = spec.geom.h;
  e.oscillation_cells = cells;
  e.perimeter_term = (double)cells * spec.geom.cell_measure() / (2.0 * spec.r);
  e.bulk_term = (double)bulk * spec.scaled_unit();
  e.total = (double)(cells * spec.capacity_scale + bulk) * spec.scaled_unit();
  return e;
}

BinaryMask materialize(const DirichletSpec& spec, uint32_t labeling) {
  BinaryMask mask = spec.boundary;
  int bit = 0;
  for (size_t i = 0; i < spec.free_cells.raw().size(); ++i)
    if (spec.free_cells.raw()[i]) {
      mask.raw()[i] = (labeling >> bit) & 1u;
      ++bit;
    }
  return mask;
}

MinimizerResult solve(const DirichletSpec& spec, Canonical canonical) {
  CutGraph g = build_graph(spec);
  MaxFlow mf((int64_t)g.node_count, (int64_t)g.arcs.size());
  mf.add_nodes(g.node_count);
  for (const auto& arc : g.arcs) mf.add_arc(arc.from, arc.to, arc.cap);
  { std::vector<CutGraph::Arc>().swap(g.arcs); }

  MinimizerResult out;
  out.canonical = canonical;
  out.flow_value = mf.max_flow(0, 1);
  out.scaled_energy = out.flow_value + g.offset;

  // source side = outside E; minimal E = minimal sink side, maximal E =
  // complement of the minimal source side
  std::vector<uint8_t> in_e;
  if (canonical == Canonical::maximal) {
    auto src = mf.min_cut_source_side(0);
    in_e.resize(src.size());
    for (size_t i = 0; i < src.size(); ++i) in_e[i] = src[i] ? 0 : 1;
  } else {
    in_e = mf.min_cut_sink_side(1);
  }

  out.mask = spec.boundary;
  for (size_t i = 0; i < g.free_node.size(); ++i)
    out.mask.raw()[(size_t)g.free_flat[i]] = in_e[(size_t)g.free_node[i]] ? 1 : 0;

  out.energy = evaluate(spec, out.mask);
  long long check = evaluate_scaled(spec, out.mask);
  if (check != out.scaled_energy)
    throw std::logic_error("cut decode disagrees with the oscillation-field energy");
  return out;
}

BruteForceResult brute_force(const DirichletSpec& spec) {
  std::vector<long long> free_flats;
  std::vector<int32_t> free_id = index_free(spec, free_flats);
  const int F = (int)free_flats.size();
  if (F > 20) throw TooLarge();

  const GridGeometry& geom = spec.geom;
  BallStencil st = ball_stencil(spec.r, geom.h, geom.dim);
  const long long w = spec.capacity_scale;

  struct CellTerm {
    uint32_t members = 0;
    bool fixed_in = false, fixed_out = false;
  };
  std::vector<CellTerm> terms;
  long long base = 0;
  std::vector<long long> c_free((size_t)F, 0);
  for (int i = 0; i < F; ++i)
    c_free[(size_t)i] = quantized_forcing(spec, free_flats[(size_t)i]);

  Idx x{0, 0, 0};
  for (x[2] = 0; x[2] < geom.shape[2]; ++x[2])
    for (x[1] = 0; x[1] < geom.shape[1]; ++x[1])
      for (x[0] = 0; x[0] < geom.shape[0]; ++x[0]) {
        if (!spec.window.bit(x)) continue;
        size_t flat = (size_t)geom.flatten(x);
        if (free_id[flat] < 0 && spec.boundary.raw()[flat])
          base += quantized_forcing(spec, (long long)flat);
        CellTerm t;
        for (const Idx& o : st.offsets) {
          Resolved res = resolve_cell(spec, free_id, add(x, o));
          if (res.id >= 0)
            t.members |= 1u << res.id;
          else if (res.fixed_value)
            t.fixed_in = true;
          else
            t.fixed_out = true;
        }
        base -= w;
        terms.push_back(t);
      }

  BruteForceResult out;
  out.free_flat = free_flats;
  const uint32_t full = F == 32 ? ~0u : ((1u << F) - 1);
  long long best = INT64_MAX;
  for (uint32_t lab = 0; lab <= full; ++lab) {
    long long e = base;
    for (const CellTerm& t : terms) {
      if (t.fixed_in || (t.members & lab)) e += w;
      if (t.fixed_out || (t.members & ~lab & full)) e += w;
    }
    for (int i = 0; i < F; ++i)
      if ((lab >> i) & 1u) e += c_free[(size_t)i];
    if (e < best) {
      best = e;
      out.argmin.clear();
    }
    if (e == best) out.argmin.push_back(lab);
    if (lab == full) break;  // avoid wrap at F = 32 (unreachable: F <= 20)
  }
  out.min_scaled = best;
  return out;
}

namespace {

nlohmann::json rows_from_bits(const std::vector<uint8_t>& bits, const GridGeometry& g) {
  auto rows = nlohmann::json::array();
  for (long long r = 0; r < (long long)g.shape[1] * g.shape[2]; ++r) {
    std::string s((size_t)g.shape[0], '0');
    for (int x = 0; x < g.shape[0]; ++x)
      if (bits[(size_t)(r * g.shape[0] + x)]) s[(size_t)x] = '1';
    rows.push_back(s);
  }
  return rows;
}

void bits_from_rows(const nlohmann::json& rows, const GridGeometry& g,
                    std::vector<uint8_t>& bits) {
  long long nrows = (long long)g.shape[1] * g.shape[2];
  if ((long long)rows.size() != nrows)
    throw SpecError("mask row count disagrees with the geometry");
  for (long long r = 0; r < nrows; ++r) {
    const std::string& s = rows[(size_t)r].get_ref<const std::string&>();
    if ((long long)s.size() != g.shape[0])
      throw SpecError("mask row width disagrees with the geometry");
    for (int x = 0; x < g.shape[0]; ++x)
      bits[(size_t)(r * g.shape[0] + x)] = s[(size_t)x] == '1' ? 1 : 0;
  }
}

}  // namespace

nlohmann::json spec_to_json(const DirichletSpec& spec) {
  nlohmann::json j;
  j["geometry"] = geometry_to_json(spec.geom);
  j["r"] = spec.r;
  j["capacity_scale"] = spec.capacity_scale;
  j["window"] = rows_from_bits(spec.window.raw(), spec.geom);
  j["free"] = rows_from_bits(spec.free_cells.raw(), spec.geom);
  j["boundary"] = rows_from_bits(spec.boundary.raw(), spec.geom);
  j["extension"] = extension_to_json(spec.boundary.extension);
  if (!spec.boundary.periods.empty()) {
    auto arr = nlohmann::json::array();
    for (const Idx& p : spec.boundary.periods) arr.push_back({p[0], p[1], p[2]});
    j["periods"] = arr;
  }
  auto gj = nlohmann::json::array();
  for (double v : spec.g.values()) gj.push_back(v);
  j["g"] = gj;
  return j;
}

DirichletSpec spec_from_json(const nlohmann::json& j) {
  DirichletSpec spec;
  spec.geom = geometry_from_json(j.at("geometry"));
  spec.r = j.at("r");
  spec.capacity_scale = j.value("capacity_scale", (long long)(1 << 20));
  spec.window = BinaryMask(spec.geom);
  spec.free_cells = BinaryMask(spec.geom);
  spec.boundary = BinaryMask(spec.geom, extension_from_json(j.at("extension")));
  bits_from_rows(j.at("window"), spec.geom, spec.window.raw());
  bits_from_rows(j.at("free"), spec.geom, spec.free_cells.raw());
  bits_from_rows(j.at("boundary"), spec.geom, spec.boundary.raw());
  if (j.contains("periods"))
    for (const auto& p : j["periods"])
      spec.boundary.periods.push_back(Idx{p[0], p[1], p[2]});
  spec.window.periods = spec.boundary.periods;
  spec.free_cells.periods = spec.boundary.periods;
  spec.g = ScalarField(spec.geom);
  const auto& gj = j.at("g");
  if (gj.size() != spec.g.values().size())
    throw SpecError("forcing length disagrees with the geometry");
  for (size_t i = 0; i < spec.g.values().size(); ++i) spec.g.values()[i] = gj[i];
  spec.validate();
  return spec;
}

}  // namespace rperi
