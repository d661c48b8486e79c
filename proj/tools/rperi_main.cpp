#include <CLI11.hpp>

#include "rperi/experiments.hpp"
#include "rperi/io.hpp"
#include "rperi/morphology.hpp"
#include "rperi/planelike.hpp"
#include "rperi/raster.hpp"

#include <iostream>
#include <numbers>
#include <sstream>

// Exit codes: 0 success, 2 invalid input or failed validation, 3 an assertion
// or experiment verdict failed.

namespace {

using namespace rperi;

constexpr int kExitOk = 0, kExitInvalid = 2, kExitFailed = 3;

// "all" | "ball:cx,cy,R" | "band:nx,ny,lo,hi"
Window parse_window(const std::string& s) {
  if (s.empty() || s == "all") return Window::all();
  auto colon = s.find(':');
  std::string kind = s.substr(0, colon);
  std::vector<double> v;
  if (colon != std::string::npos) {
    std::stringstream ss(s.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
  }
  if (kind == "ball" && v.size() == 3) return Window::ball({v[0], v[1], 0}, v[2]);
  if (kind == "band" && v.size() == 4)
    return Window::band({(int)v[0], (int)v[1], 0}, v[2], v[3]);
  throw SpecError("cannot parse window '" + s + "'");
}

void emit(const nlohmann::json& j, const std::string& out) {
  std::string text = j.dump(2);
  text.push_back('\n');
  if (out.empty())
    std::cout << text;
  else
    write_file_atomic(out, text);
}

nlohmann::json mask_rows_json(const BinaryMask& m) {
  nlohmann::json rows = nlohmann::json::array();
  const auto& g = m.geom;
  Idx k{0, 0, 0};
  for (k[2] = 0; k[2] < g.shape[2]; ++k[2])
    for (k[1] = 0; k[1] < g.shape[1]; ++k[1]) {
      std::string row(g.shape[0], '0');
      for (k[0] = 0; k[0] < g.shape[0]; ++k[0])
        if (m.bit(k)) row[(size_t)k[0]] = '1';
      rows.push_back(row);
    }
  return rows;
}

BinaryMask mask_from_rows_json(const nlohmann::json& j) {
  GridGeometry g = geometry_from_json(j.at("geometry"));
  BinaryMask m(g, extension_from_json(j.at("extension")));
  if (j.contains("periods"))
    for (const auto& p : j.at("periods"))
      m.periods.push_back({p.at(0).get<int>(), p.at(1).get<int>(), p.at(2).get<int>()});
  const auto& rows = j.at("rows");
  Idx k{0, 0, 0};
  size_t ri = 0;
  for (k[2] = 0; k[2] < g.shape[2]; ++k[2])
    for (k[1] = 0; k[1] < g.shape[1]; ++k[1], ++ri) {
      const std::string row = rows.at(ri).get<std::string>();
      if ((int)row.size() != g.shape[0]) throw SpecError("row length mismatch");
      for (k[0] = 0; k[0] < g.shape[0]; ++k[0])
        if (row[(size_t)k[0]] == '1') m.set_bit(k, true);
    }
  return m;
}

int run_selftest() {
  int failed = 0;
  auto check = [&](const std::string& name, bool ok) {
    std::cout << (ok ? "ok   " : "FAIL ") << name << "\n";
    if (!ok) ++failed;
  };

  GridGeometry g(2, {240, 240, 1}, 0.025, {false, false, false}, {-3, -3, 0});
  auto disk = rasterize(Shape::ball({0, 0, 0}, 2.0), g);
  double per = perimeter_r(disk, Window::all(), 0.25);
  check("disk perimeter near 4 pi", std::abs(per - 4 * std::numbers::pi) < 0.02 * 4 * std::numbers::pi);

  ScalarField u(g);
  for (size_t i = 0; i < u.values().size(); ++i)
    u.values()[i] = disk.raw()[i] ? 0.75 : -0.25;
  auto co = coarea_check(u, Window::all(), 0.25);
  check("coarea identity exact", co.lhs_scaled == co.rhs_scaled);

  GridGeometry gs(2, {8, 8, 1}, 1.0);
  DirichletSpec spec;
  spec.geom = gs;
  spec.window = BinaryMask(gs);
  spec.free_cells = BinaryMask(gs);
  spec.boundary = BinaryMask(gs);
  spec.g = ScalarField(gs);
  Idx k{0, 0, 0};
  for (k[1] = 0; k[1] < 8; ++k[1])
    for (k[0] = 0; k[0] < 8; ++k[0]) {
      spec.window.set_bit(k, true);
      if (k[0] >= 2 && k[0] <= 5 && k[1] >= 2 && k[1] <= 5) spec.free_cells.set_bit(k, true);
      if (k[0] < 4) spec.boundary.set_bit(k, true);
      spec.g.set(k, ((k[0] * 31 + k[1] * 17) % 7 - 3) / 16.0);
    }
  spec.r = 1.5;
  spec.validate();
  auto bf = brute_force(spec);
  auto res = solve(spec, Canonical::minimal);
  check("min-cut matches brute force", res.scaled_energy == bf.min_scaled);

  return failed ? kExitFailed : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nonlocal r-perimeters: evaluation, minimization, experiments"};
  // --h is a grid-spacing option, so help must not claim the short -h
  app.set_help_flag("--help", "print help and exit");
  app.require_subcommand(1);
  int jobs = 1;
  app.add_option("--jobs", jobs, "worker threads (reserved, computations are single threaded)");

  std::string mask_path, field_path, spec_path, out_path, mask_out, window_str;
  double r = 1.0, h = 0.1, M = 4.0, K = 20.0, eta = 0.05;
  uint64_t seed = 0;
  int samples = 100;
  std::string canonical = "minimal";

  auto* c_per = app.add_subcommand("perimeter", "Per_r of a stored mask");
  c_per->add_option("--mask", mask_path)->required();
  c_per->add_option("--r", r)->required();
  c_per->add_option("--window", window_str);
  c_per->add_option("--out", out_path);

  auto* c_en = app.add_subcommand("energy", "Per_r plus the bulk term");
  c_en->add_option("--mask", mask_path)->required();
  c_en->add_option("--field", field_path)->required();
  c_en->add_option("--r", r)->required();
  c_en->add_option("--window", window_str);
  c_en->add_option("--out", out_path);

  auto* c_solve = app.add_subcommand("solve", "global minimizer of a Dirichlet problem");
  c_solve->add_option("--spec", spec_path)->required();
  c_solve->add_option("--canonical", canonical)
      ->check(CLI::IsMember({"minimal", "maximal", "arbitrary"}));
  c_solve->add_option("--out", out_path);
  c_solve->add_option("--mask-out", mask_out);

  std::string omega_str = "1,1";
  auto* c_pl = app.add_subcommand("planelike", "planelike minimizer in a periodic medium");
  c_pl->add_option("--omega", omega_str, "integer direction a,b");
  c_pl->add_option("--M", M);
  c_pl->add_option("--r", r);
  c_pl->add_option("--eta", eta);
  c_pl->add_option("--h", h);
  c_pl->add_option("--out", out_path);
  c_pl->add_option("--mask-out", mask_out);

  std::string exp_name;
  auto* c_exp = app.add_subcommand("experiment", "run a named experiment battery");
  c_exp->add_option("--name", exp_name)
      ->required()
      ->check(CLI::IsMember({"isoperimetric", "relative_isoperimetric", "pw", "failcom",
                             "gamma", "oned"}));
  c_exp->add_option("--seed", seed);
  c_exp->add_option("--samples", samples);
  c_exp->add_option("--r", r);
  c_exp->add_option("--h", h);
  c_exp->add_option("--K", K);
  c_exp->add_option("--out", out_path);

  std::string in_path;
  auto* c_conv = app.add_subcommand("convert", "mask between P4+sidecar and JSON rows");
  c_conv->add_option("--in", in_path)->required();
  c_conv->add_option("--out", out_path)->required();

  app.add_subcommand("selftest", "quick built-in consistency checks");
  for (auto* sc : app.get_subcommands([](const CLI::App*) { return true; }))
    sc->set_help_flag("--help", "print help and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (c_per->parsed()) {
      auto m = load_mask(mask_path);
      auto win = parse_window(window_str);
      nlohmann::json j = {{"perimeter", perimeter_r(m, win, r)},
                          {"oscillation_cells", perimeter_count(m, win, r)},
                          {"r", r},
                          {"h", m.geom.h}};
      emit(j, out_path);
    } else if (c_en->parsed()) {
      auto m = load_mask(mask_path);
      auto gfield = load_field(field_path);
      auto win = parse_window(window_str);
      emit(to_json(energy(m, gfield, win, r)), out_path);
    } else if (c_solve->parsed()) {
      std::ifstream in(spec_path);
      if (!in) throw SpecError("cannot open spec '" + spec_path + "'");
      auto spec = spec_from_json(nlohmann::json::parse(in));
      Canonical mode = canonical == "maximal"   ? Canonical::maximal
                       : canonical == "minimal" ? Canonical::minimal
                                                : Canonical::arbitrary;
      auto res = solve(spec, mode);
      nlohmann::json j = {{"energy", to_json(res.energy)},
                          {"scaled_energy", res.scaled_energy},
                          {"flow_value", res.flow_value},
                          {"canonical", canonical}};
      emit(j, out_path);
      if (!mask_out.empty()) save_mask(res.mask, mask_out);
    } else if (c_pl->parsed()) {
      StripSpec s;
      std::stringstream ss(omega_str);
      std::string tok;
      std::vector<int> w;
      while (std::getline(ss, tok, ',')) w.push_back(std::stoi(tok));
      if (w.size() != 2) throw SpecError("omega must be two integers a,b");
      s.direction = rational_basis({w[0], w[1], 0});
      s.M = M;
      s.r = r;
      s.eta = eta;
      s.h = h;
      s.g_cell = checkerboard_forcing(h, eta);
      auto res = construct_planelike(s);
      auto census_json = [](const ClassStat& c) {
        return nlohmann::json{{"count", c.count}, {"t_min", c.t_min}, {"t_max", c.t_max}};
      };
      nlohmann::json j = {{"omega", {w[0], w[1]}},
                          {"energy", to_json(res.energy)},
                          {"scaled_energy", res.scaled_energy},
                          {"t_lo", res.t_lo},
                          {"t_hi", res.t_hi},
                          {"width", res.width},
                          {"shift_steps", res.shift_steps},
                          {"birkhoff", res.birkhoff_ok},
                          {"layers_ordered", layers_ordered(res.census)},
                          {"census",
                           {{"black", census_json(res.census.black)},
                            {"white", census_json(res.census.white)},
                            {"grey", census_json(res.census.grey)},
                            {"multicolored", census_json(res.census.multicolored)},
                            {"almost_black", census_json(res.census.almost_black)},
                            {"almost_white", census_json(res.census.almost_white)}}}};
      emit(j, out_path);
      if (!mask_out.empty()) save_mask(res.mask, mask_out);
      if (!res.birkhoff_ok) return kExitFailed;
    } else if (c_exp->parsed()) {
      Report rep;
      if (exp_name == "isoperimetric")
        rep = isoperimetric_sweep(2.0, r, h, samples, seed);
      else if (exp_name == "relative_isoperimetric")
        rep = relative_isoperimetric_sweep(1.0, r, h, samples, seed);
      else if (exp_name == "pw")
        rep = pw_sweep(1.0, r, h, samples, seed);
      else if (exp_name == "failcom")
        rep = failcom_experiment(r, K, h);
      else if (exp_name == "gamma")
        rep = gamma_sweep();
      else
        rep = oned_classification(24, r, seed);
      emit(rep.to_json(), out_path);
      if (!rep.all_pass()) return kExitFailed;
    } else if (c_conv->parsed()) {
      char magic[2] = {0, 0};
      {
        std::ifstream probe(in_path, std::ios::binary);
        if (!probe) throw SpecError("cannot open '" + in_path + "'");
        probe.read(magic, 2);
      }
      if (!(magic[0] == 'P' && magic[1] == '4')) {
        std::ifstream in(in_path);
        save_mask(mask_from_rows_json(nlohmann::json::parse(in)), out_path);
      } else {
        auto m = load_mask(in_path);
        nlohmann::json j = {{"geometry", geometry_to_json(m.geom)},
                            {"extension", extension_to_json(m.extension)},
                            {"rows", mask_rows_json(m)}};
        nlohmann::json pj = nlohmann::json::array();
        for (const auto& p : m.periods) pj.push_back({p[0], p[1], p[2]});
        j["periods"] = pj;
        emit(j, out_path);
      }
    } else {
      return run_selftest();
    }
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::runtime_error& e) {  // SpecError, I/O, overflow, size caps
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitOk;
}
