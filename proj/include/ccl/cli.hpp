#pragma once

// Command-line front end. Exit codes: 0 success, 2 validation error,
// 3 ambiguous sign decision or a point on an eps-boundary.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ccl/cones.hpp"
#include "ccl/oracle.hpp"
#include "ccl/report.hpp"
#include "ccl/steinian.hpp"
#include "ccl/wall.hpp"

namespace ccl {

namespace cli {

constexpr int kOk = 0;
constexpr int kInternal = 1;
constexpr int kValidation = 2;
constexpr int kIndeterminate = 3;

inline std::vector<std::string> split(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

inline std::vector<Rational> rationals(const std::string& s, std::size_t n, const char* what) {
  auto parts = split(s);
  if (parts.size() != n)
    throw ParseError(std::string(what) + ": expected " + std::to_string(n) + " comma-separated numbers, got '" + s + "'");
  std::vector<Rational> out;
  for (const auto& p : parts) out.push_back(parse_rational(p));
  return out;
}

inline IVec3 integers3(const std::string& s, const char* what) {
  IVec3 out{};
  auto q = rationals(s, 3, what);
  for (int i = 0; i < 3; ++i) {
    if (!is_integer(q[i])) throw ParseError(std::string(what) + ": entries must be integers");
    if (!q[i].get_num().fits_slong_p()) throw ParseError(std::string(what) + ": entry out of range");
    out[i] = q[i].get_num().get_si();
  }
  return out;
}

inline Window window(const std::string& s) {
  auto q = rationals(s, 4, "--window");
  Window w{to_double(q[0]), to_double(q[1]), to_double(q[2]), to_double(q[3])};
  if (!(w.x1 > w.x0) || !(w.y1 > w.y0)) throw ParseError("--window: need x0 < x1 and y0 < y1");
  return w;
}

/// Ten coefficients mu111 ... mu333 in that order, or lines muIJK=value.
/// Separators are whitespace and commas; '#' starts a comment.
inline TrilinearForm read_mu_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read mu file '" + path + "'");
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    line = line.substr(0, line.find('#'));
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream is(line);
    std::string t;
    while (is >> t) tokens.push_back(t);
  }
  std::array<Rational, 10> vals{};
  std::array<bool, 10> set{};
  std::size_t bare = 0;
  for (const auto& t : tokens) {
    auto eq = t.find('=');
    if (eq == std::string::npos) {
      if (bare >= 10) throw ParseError("mu file: more than ten values");
      vals[bare] = parse_rational(t);
      set[bare++] = true;
      continue;
    }
    std::string key = t.substr(0, eq);
    if (key.size() != 5 || key.rfind("mu", 0) != 0) throw ParseError("mu file: bad key '" + key + "'");
    std::array<int, 3> idx{key[2] - '1', key[3] - '1', key[4] - '1'};
    for (int i : idx)
      if (i < 0 || i > 2) throw ParseError("mu file: bad key '" + key + "'");
    std::sort(idx.begin(), idx.end());
    std::size_t slot = TrilinearForm::slot(idx[0], idx[1], idx[2]);
    vals[slot] = parse_rational(t.substr(eq + 1));
    set[slot] = true;
  }
  for (bool b : set)
    if (!b) throw ParseError("mu file: all ten coefficients mu111 ... mu333 are required");
  return TrilinearForm(vals);
}

inline nlohmann::json vec_json(const Vec3d& v) { return {v[0], v[1], v[2]}; }
inline nlohmann::json vec_json(const Vec3q& v) { return {to_string(v[0]), to_string(v[1]), to_string(v[2])}; }

inline void emit(std::ostream& out, const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw PreconditionError("cannot write '" + path + "'");
  f << text;
}

}  // namespace cli

/// Parses and runs one command. All output goes to `out`, diagnostics to `err`.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cubic forms, Hessians and positive index cones", "ccl"};
  app.require_subcommand(1, 1);
  app.set_config("--config", "", "key=value configuration file");
  std::optional<double> eps;
  app.add_option("--eps", eps, "float tolerance (default: CCL_EPS or 1e-9)")->check(CLI::PositiveNumber);

  std::string k_text, point, out_path, window_text = "-3,3,-3,3", mu_file, p1_text, c2_text, family_text, seed_text;
  int resolution = 4096, n = 200, heatmap = 0;
  long long b3 = 0, m = 12;

  auto add_k = [&](CLI::App* sub) { sub->add_option("--k", k_text, "parameter k (rational)")->required(); };

  auto* classify = app.add_subcommand("classify", "regime, Hessian parameter and component counts");
  add_k(classify);
  auto* plot = app.add_subcommand("plot", "SVG of the cubic, its Hessian and the asymptotes");
  add_k(plot);
  plot->add_option("--out", out_path, "output file (default stdout)");
  plot->add_option("--window", window_text, "x0,x1,y0,y1");
  plot->add_option("--resolution", resolution, "trace resolution")->check(CLI::Range(2, 1 << 20));
  plot->add_option("--heatmap", heatmap, "draw a signature heatmap on an n x n grid instead")
      ->check(CLI::Range(2, 4000));
  auto* region = app.add_subcommand("region", "region label of an affine point a,b");
  add_k(region);
  region->add_option("--point", point, "a,b")->required();
  auto* stein = app.add_subcommand("steinian", "Steinian image of a Hessian point x,y,z");
  add_k(stein);
  stein->add_option("--point", point, "x,y,z")->required();
  auto* cones = app.add_subcommand("cone-components", "components of the positive index cone as JSON");
  add_k(cones);
  auto* scan = app.add_subcommand("scan", "CSV grid scan of signs and signatures");
  add_k(scan);
  scan->add_option("--window", window_text, "x0,x1,y0,y1");
  scan->add_option("--n", n, "cells per side")->check(CLI::Range(2, 4000));
  scan->add_option("--out", out_path, "output file (default stdout)");
  auto* wall = app.add_subcommand("wall-check", "congruence conditions on (mu, p1)");
  wall->add_option("--mu-file", mu_file, "file with mu111 ... mu333")->required();
  wall->add_option("--p1", p1_text, "p1 as three integers")->required();
  auto* obstruct = app.add_subcommand("obstruct", "obstruction verdict for wall data");
  auto* fam_opt = obstruct->add_option("--family", family_text, "m,k with mu = m F_k");
  auto* mu_opt = obstruct->add_option("--mu-file", mu_file, "file with mu111 ... mu333");
  fam_opt->excludes(mu_opt);
  auto* p1_opt = obstruct->add_option("--p1", p1_text, "p1 as three integers");
  auto* c2_opt = obstruct->add_option("--c2", c2_text, "c2 as three integers; p1 = -2 c2");
  p1_opt->excludes(c2_opt);
  obstruct->add_option("--b3", b3, "third Betti number (even)");
  auto* gen = app.add_subcommand("gen-no-cy", "wall data with no Calabi-Yau structure");
  add_k(gen);
  gen->add_option("--m", m, "multiplier (even, >= 10)");
  gen->add_option("--b3", b3, "third Betti number (even)");
  gen->add_option("--p1-seed", seed_text, "starting p1 for k < 1");
  gen->add_option("--c2", c2_text, "c2 direction for k > 1 (default 1,1,-2)");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? cli::kOk : cli::kValidation;
  }

  Tolerance tol = Tolerance::from_env();
  if (eps) tol.eps = *eps;

  try {
    if (*classify) {
      Rational k = parse_rational(k_text);
      Regime r = regime_of(k);
      nlohmann::json j = {{"k", to_string(k)}, {"regime", to_string(r)}};
      if (sgn(k) != 0) j["hessian_param"] = to_string(hesse_param_dual(k));
      if (r != Regime::DegenerateCubic) {
        j["cubic_components"] = count_real_components(ParamCubic(k));
        nlohmann::json lines = nlohmann::json::array();
        for (const LineQ& l : asymptotes(k)) lines.push_back(cli::vec_json(l.c));
        j["asymptotes"] = lines;
      }
      if (!is_degenerate(r)) j["hessian_components"] = count_real_components(hessian_polynomial(ParamCubic(k).form().cubic()));
      out << j.dump(2) << "\n";
    } else if (*plot) {
      Rational k = parse_rational(k_text);
      PlotConfig cfg;
      cfg.window = cli::window(window_text);
      cfg.resolution = resolution;
      std::string svg = heatmap > 0 ? render_heatmap(grid_scan(k, cfg.window, heatmap, tol)) : plot_figure(k, cfg);
      cli::emit(out, out_path, svg);
    } else if (*region) {
      Rational k = parse_rational(k_text);
      auto ab = cli::rationals(point, 2, "--point");
      Vec3d a{to_double(ab[0]), to_double(ab[1]), 1.0};
      RegionResult res = classify_region(k, a, tol);
      nlohmann::json j = {{"k", to_string(k)},
                          {"point", {a[0], a[1]}},
                          {"label", res.label.str()},
                          {"predicted_arcs", predicted_arc_count(res.label.kind)},
                          {"boundary", res.boundary}};
      if (res.alternative) j["alternative"] = res.alternative->str();
      out << j.dump(2) << "\n";
      if (res.boundary) return cli::kIndeterminate;
    } else if (*stein) {
      Rational k = parse_rational(k_text);
      auto q = cli::rationals(point, 3, "--point");
      Vec3q uq{q[0], q[1], q[2]};
      nlohmann::json j = {{"k", to_string(k)}};
      bool on_exact = !uq.is_zero() && sgn(hessian_value(ParamCubic(k), uq)) == 0;
      if (on_exact) {
        j["exact"] = true;
        j["image"] = cli::vec_json(steinian(k, uq));
      } else {
        j["exact"] = false;
        j["image"] = cli::vec_json(steinian(k, to_double(uq), tol));
      }
      out << j.dump(2) << "\n";
    } else if (*cones) {
      Rational k = parse_rational(k_text);
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& c : enumerate_cone_components(k)) arr.push_back(c.to_json());
      out << nlohmann::json{{"k", to_string(k)}, {"count", arr.size()}, {"components", arr}}.dump(2) << "\n";
    } else if (*scan) {
      Rational k = parse_rational(k_text);
      cli::emit(out, out_path, grid_scan(k, cli::window(window_text), n, tol).to_csv());
    } else if (*wall) {
      TrilinearForm mu = cli::read_mu_file(mu_file);
      CongruenceResult cr = check_wall_congruences(mu, cli::integers3(p1_text, "--p1"));
      nlohmann::json j = {{"ok", cr.ok}};
      if (!cr.ok) j["witness"] = {{"condition", cr.condition}, {"x", cr.x}, {"y", cr.y}, {"message", cr.message}};
      out << j.dump(2) << "\n";
    } else if (*obstruct) {
      if (family_text.empty() && mu_file.empty()) throw ParseError("obstruct: give --family or --mu-file");
      WallData data;
      IVec3 p1{0, 0, 0};
      if (!p1_text.empty()) p1 = cli::integers3(p1_text, "--p1");
      if (!family_text.empty()) {
        auto parts = cli::split(family_text);
        if (parts.size() != 2) throw ParseError("--family: expected m,k");
        Rational mq = parse_rational(parts[0]);
        if (!is_integer(mq) || sgn(mq) <= 0) throw ParseError("--family: m must be a positive integer");
        Rational k = parse_rational(parts[1]);
        long long mm = mq.get_num().get_si();
        data = c2_text.empty() ? WallData::from_family(mm, k, p1, b3)
                               : WallData::from_c2_direction(mm, k, cli::integers3(c2_text, "--c2"), b3);
      } else {
        if (!c2_text.empty()) {
          IVec3 c2 = cli::integers3(c2_text, "--c2");
          p1 = {-2 * c2[0], -2 * c2[1], -2 * c2[2]};
        }
        data = WallData(cli::read_mu_file(mu_file), p1, b3);
      }
      Verdict v = decide_obstruction(data);
      nlohmann::json j = v.to_json();
      j["input"] = data.to_json();
      out << j.dump(2) << "\n";
    } else if (*gen) {
      Rational k = parse_rational(k_text);
      IVec3 seed{0, 0, 0}, dir{1, 1, -2};
      if (!seed_text.empty()) seed = cli::integers3(seed_text, "--p1-seed");
      if (!c2_text.empty()) dir = cli::integers3(c2_text, "--c2");
      WallData w = generate_no_cy_example(k, m, b3, seed, dir);
      out << nlohmann::json{{"wall", w.to_json()}, {"verdict", decide_obstruction(w).to_json()}}.dump(2) << "\n";
    }
  } catch (const IndeterminateError& e) {
    err << "indeterminate: " << e.what() << "\n";
    return cli::kIndeterminate;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return cli::kValidation;
  } catch (const DegenerateParameter& e) {
    err << "error: " << e.what() << "\n";
    return cli::kValidation;
  } catch (const IntegralityError& e) {
    err << "error: " << e.what() << "\n";
    return cli::kValidation;
  } catch (const InvalidBranch& e) {
    err << "error: " << e.what() << "\n";
    return cli::kValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return cli::kInternal;
  }
  return cli::kOk;
}

inline int run_cli(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, out, err);
}

}  // namespace ccl
