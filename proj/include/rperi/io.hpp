#pragma once

#include "rperi/grid.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

// Mask I/O: portable bitmap P4 plus a JSON sidecar carrying the geometry and
// extension rule. 3D masks are written as stacked slices (height = ny * nz).
// Scalar fields go to row-major CSV with the same sidecar.

namespace rperi {

inline nlohmann::json extension_to_json(const ExtensionRule& e) {
  nlohmann::json j;
  switch (e.kind) {
    case ExtensionRule::Kind::constant_inside: j["kind"] = "constant_inside"; break;
    case ExtensionRule::Kind::constant_outside: j["kind"] = "constant_outside"; break;
    case ExtensionRule::Kind::periodic: j["kind"] = "periodic"; break;
    case ExtensionRule::Kind::mirror: j["kind"] = "mirror"; break;
    case ExtensionRule::Kind::half_space:
      j["kind"] = "half_space";
      j["normal"] = {e.normal[0], e.normal[1], e.normal[2]};
      j["offset"] = e.offset;
      break;
  }
  return j;
}

inline ExtensionRule extension_from_json(const nlohmann::json& j) {
  std::string k = j.at("kind");
  if (k == "constant_inside") return ExtensionRule::constant_inside();
  if (k == "constant_outside") return ExtensionRule::constant_outside();
  if (k == "periodic") return ExtensionRule::periodic();
  if (k == "mirror") return ExtensionRule::mirror();
  if (k == "half_space") {
    auto n = j.at("normal");
    return ExtensionRule::half_space({n[0], n[1], n[2]}, j.at("offset"));
  }
  throw std::runtime_error("unknown extension kind: " + k);
}

inline nlohmann::json geometry_to_json(const GridGeometry& g) {
  return {
      {"dim", g.dim},
      {"shape", {g.shape[0], g.shape[1], g.shape[2]}},
      {"h", g.h},
      {"periodic", {g.periodic[0], g.periodic[1], g.periodic[2]}},
      {"origin", {g.origin[0], g.origin[1], g.origin[2]}},
  };
}

inline GridGeometry geometry_from_json(const nlohmann::json& j) {
  auto s = j.at("shape");
  auto p = j.at("periodic");
  auto o = j.at("origin");
  return GridGeometry(j.at("dim"), {s[0], s[1], s[2]}, j.at("h"),
                      {p[0], p[1], p[2]}, {o[0], o[1], o[2]});
}

// Write a file atomically: temp file in the same directory, then rename.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& data) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string());
    f.write(data.data(), (std::streamsize)data.size());
    if (!f) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::string mask_to_p4(const BinaryMask& m) {
  int w = m.geom.shape[0];
  long long rows = (long long)m.geom.shape[1] * m.geom.shape[2];
  std::ostringstream out;
  out << "P4\n" << w << " " << rows << "\n";
  int row_bytes = (w + 7) / 8;
  std::vector<uint8_t> row((size_t)row_bytes);
  for (long long r = 0; r < rows; ++r) {
    std::fill(row.begin(), row.end(), 0);
    for (int x = 0; x < w; ++x)
      if (m.bit(r * w + x)) row[(size_t)(x / 8)] |= (uint8_t)(0x80u >> (x % 8));
    out.write((const char*)row.data(), row_bytes);
  }
  return out.str();
}

inline void save_mask(const BinaryMask& m, const std::filesystem::path& pbm_path) {
  write_file_atomic(pbm_path, mask_to_p4(m));
  nlohmann::json side;
  side["geometry"] = geometry_to_json(m.geom);
  side["extension"] = extension_to_json(m.extension);
  if (!m.periods.empty()) {
    auto arr = nlohmann::json::array();
    for (const Idx& p : m.periods) arr.push_back({p[0], p[1], p[2]});
    side["periods"] = arr;
  }
  auto sp = pbm_path;
  sp += ".json";
  write_file_atomic(sp, side.dump(2) + "\n");
}

inline BinaryMask load_mask(const std::filesystem::path& pbm_path) {
  auto sp = pbm_path;
  sp += ".json";
  std::ifstream sf(sp);
  if (!sf) throw std::runtime_error("missing sidecar " + sp.string());
  nlohmann::json side = nlohmann::json::parse(sf);
  BinaryMask m(geometry_from_json(side.at("geometry")),
               extension_from_json(side.at("extension")));
  if (side.contains("periods"))
    for (const auto& p : side["periods"])
      m.periods.push_back(Idx{p[0], p[1], p[2]});

  std::ifstream f(pbm_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + pbm_path.string());
  std::string magic;
  long long w = 0, rows = 0;
  f >> magic >> w >> rows;
  if (magic != "P4") throw std::runtime_error("not a P4 bitmap: " + pbm_path.string());
  f.get();  // single whitespace after header
  if (w != m.geom.shape[0] ||
      rows != (long long)m.geom.shape[1] * m.geom.shape[2])
    throw std::runtime_error("bitmap dimensions disagree with sidecar");
  int row_bytes = (int)((w + 7) / 8);
  std::vector<char> row((size_t)row_bytes);
  for (long long r = 0; r < rows; ++r) {
    f.read(row.data(), row_bytes);
    if (!f) throw std::runtime_error("truncated bitmap " + pbm_path.string());
    for (long long x = 0; x < w; ++x)
      if (row[(size_t)(x / 8)] & (char)(0x80u >> (x % 8)))
        m.raw()[(size_t)(r * w + x)] = 1;
  }
  return m;
}

inline void save_field(const ScalarField& u, const std::filesystem::path& csv_path) {
  std::ostringstream out;
  out.precision(17);
  const auto& g = u.geom;
  for (int z = 0; z < g.shape[2]; ++z)
    for (int y = 0; y < g.shape[1]; ++y) {
      for (int x = 0; x < g.shape[0]; ++x) {
        if (x) out << ",";
        out << u.at({x, y, z});
      }
      out << "\n";
    }
  write_file_atomic(csv_path, out.str());
  nlohmann::json side;
  side["geometry"] = geometry_to_json(g);
  side["extension"] = u.extension == ScalarField::Ext::periodic ? "periodic" : "zero";
  auto sp = csv_path;
  sp += ".json";
  write_file_atomic(sp, side.dump(2) + "\n");
}

inline ScalarField load_field(const std::filesystem::path& csv_path) {
  auto sp = csv_path;
  sp += ".json";
  std::ifstream sf(sp);
  if (!sf) throw std::runtime_error("missing sidecar " + sp.string());
  nlohmann::json side = nlohmann::json::parse(sf);
  ScalarField u(geometry_from_json(side.at("geometry")),
                side.at("extension") == "periodic" ? ScalarField::Ext::periodic
                                                   : ScalarField::Ext::zero);
  std::ifstream f(csv_path);
  if (!f) throw std::runtime_error("cannot open " + csv_path.string());
  const auto& g = u.geom;
  std::string line;
  for (int z = 0; z < g.shape[2]; ++z)
    for (int y = 0; y < g.shape[1]; ++y) {
      if (!std::getline(f, line)) throw std::runtime_error("truncated field csv");
      std::istringstream ls(line);
      std::string cell;
      for (int x = 0; x < g.shape[0]; ++x) {
        if (!std::getline(ls, cell, ',')) throw std::runtime_error("short csv row");
        u.set({x, y, z}, std::stod(cell));
      }
    }
  return u;
}

}  // namespace rperi
