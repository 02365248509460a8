#include "thermosol/config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

namespace thermosol {

namespace {
using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

const json& member(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing required field");
  return *it;
}

double num_field(const json& j, const char* key, const std::string& path) {
  const json& v = member(j, key, path);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

int int_field(const json& j, const char* key, const std::string& path) {
  const json& v = member(j, key, path);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  return v.get<int>();
}

std::string str_field(const json& j, const char* key,
                      const std::string& path) {
  const json& v = member(j, key, path);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

std::string str_or(const json& j, const char* key, const std::string& path,
                   const std::string& dflt) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) return dflt;
  if (!it->is_string()) fail(path + "." + key, "expected a string");
  return it->get<std::string>();
}

void vec2_or(const json& j, const char* key, const std::string& path,
             double out[2]) {
  auto it = j.find(key);
  if (it == j.end()) {
    out[0] = out[1] = 0.0;
    return;
  }
  if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() ||
      !(*it)[1].is_number())
    fail(path + "." + key, "expected an array of 2 numbers");
  out[0] = (*it)[0].get<double>();
  out[1] = (*it)[1].get<double>();
}

template <typename F>
auto with_path(const std::string& path, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    fail(path, e.what());
  }
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("JSON parse error: ") + e.what());
  }
}

Scenario scenario_from_json(const json& j, int grid_override,
                            const std::string& root) {
  const json& jg = member(j, "grid", root);
  int nx = int_field(jg, "nx", root + ".grid");
  int ny = int_field(jg, "ny", root + ".grid");
  const double lx = num_field(jg, "lx", root + ".grid");
  const double ly = num_field(jg, "ly", root + ".grid");
  if (grid_override > 0) nx = ny = grid_override;
  if (nx < 4 || ny < 4) fail(root + ".grid", "nx and ny must be >= 4");
  if (!(lx > 0.0) || !(ly > 0.0))
    fail(root + ".grid", "lx and ly must be > 0");
  Grid2D g(nx, ny, lx, ly);

  const json& jp = member(j, "params", root);
  const std::string pp = root + ".params";
  ModelParams mp;
  mp.a = num_field(jp, "a", pp);
  mp.b = num_field(jp, "b", pp);
  mp.L = num_field(jp, "L", pp);
  mp.K = num_field(jp, "K", pp);
  vec2_or(jp, "grav_T", pp, mp.grav_T);
  vec2_or(jp, "grav_C", pp, mp.grav_C);
  const std::string fspec = str_field(jp, "f", pp);
  mp.f = with_path(pp + ".f", [&] { return parse_equilibrium(fspec); });
  with_path(pp, [&] {
    mp.validate();
    return 0;
  });

  const json& ji = member(j, "initial", root);
  const std::string ip = root + ".initial";
  VelocityProfile v0p = with_path(ip + ".v", [&] {
    return parse_velocity_profile(str_or(ji, "v", ip, "zero"));
  });
  FieldProfile T0p = with_path(ip + ".T", [&] {
    return parse_field_profile(str_or(ji, "T", ip, "zero"), g);
  });
  FieldProfile C0p = with_path(ip + ".C", [&] {
    return parse_field_profile(str_or(ji, "C", ip, "zero"), g);
  });

  const json& jb = member(j, "boundary", root);
  const std::string bp = root + ".boundary";
  BoundaryProfile gbc = with_path(bp + ".g", [&] {
    return parse_boundary_profile(str_or(jb, "g", bp, "zero"), g);
  });
  BoundaryProfile hbc = with_path(bp + ".h", [&] {
    return parse_boundary_profile(str_or(jb, "h", bp, "zero"), g);
  });

  const double t_final = num_field(j, "t_final", root);
  if (!(t_final > 0.0)) fail(root + ".t_final", "must be > 0");

  return Scenario::make(g, mp, v0p, T0p, C0p, gbc, hbc, t_final);
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}
}  // namespace

Scenario load_scenario_json(const std::string& text, int grid_override) {
  return scenario_from_json(parse_text(text), grid_override, "scenario");
}

Scenario load_scenario_file(const std::string& path, int grid_override) {
  return load_scenario_json(slurp(path), grid_override);
}

TwinSpec load_twin_json(const std::string& text, int grid_override) {
  json j = parse_text(text);
  TwinSpec ts;
  ts.base = scenario_from_json(j, grid_override, "twin");
  auto coeffs = [&](const char* key) {
    const json& jc = member(j, key, "twin");
    TwinCoeffs c;
    c.L = num_field(jc, "L", std::string("twin.") + key);
    c.K = num_field(jc, "K", std::string("twin.") + key);
    if (!(c.L > 0.0) || !(c.K > 0.0))
      fail(std::string("twin.") + key, "L and K must be > 0");
    return c;
  };
  ts.coeffs1 = coeffs("coeffs1");
  ts.coeffs2 = coeffs("coeffs2");
  return ts;
}

TwinSpec load_twin_file(const std::string& path, int grid_override) {
  return load_twin_json(slurp(path), grid_override);
}

// ---------------------------------------------------------------------------
// emitters

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string json_number(double x) {
  if (std::isnan(x)) return "\"nan\"";
  if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
  return format_double(x);
}

namespace {
std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

void emit_array(std::ostringstream& o, const std::vector<double>& v) {
  o << '[';
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) o << ',';
    o << json_number(v[i]);
  }
  o << ']';
}
}  // namespace

std::string trajectory_csv(const Trajectory& tr) {
  std::ostringstream o;
  o << "t,norm_v_sq,int_grad_v_sq,sup_T,norm_C_sq,norm_C_4,int_grad_C_sq,"
       "int_C_sq\n";
  for (size_t i = 0; i < tr.size(); ++i)
    o << format_double(tr.t[i]) << ',' << format_double(tr.norm_v_sq[i]) << ','
      << format_double(tr.int_grad_v_sq[i]) << ','
      << format_double(tr.sup_T[i]) << ',' << format_double(tr.norm_C_sq[i])
      << ',' << format_double(tr.norm_C_4[i]) << ','
      << format_double(tr.int_grad_C_sq[i]) << ','
      << format_double(tr.int_C_sq[i]) << '\n';
  return o.str();
}

std::string twin_csv(const TwinReport& rep) {
  std::ostringstream o;
  o << "t,F,bound,ratio\n";
  for (size_t i = 0; i < rep.t.size(); ++i)
    o << format_double(rep.t[i]) << ',' << format_double(rep.F[i]) << ','
      << format_double(rep.bound[i]) << ',' << format_double(rep.ratio[i])
      << '\n';
  return o.str();
}

namespace {
void emit_branches(std::ostringstream& o, const LedgerBranches& br) {
  o << "{\"h_zero\":" << (br.h_zero ? "true" : "false")
    << ",\"n_nonpositive\":" << (br.n_nonpositive ? "true" : "false")
    << ",\"overflow_time\":" << json_number(br.overflow_time) << '}';
}
}  // namespace

std::string twin_json(const TwinReport& rep) {
  std::ostringstream o;
  o << "{\n";
  o << "  \"l\": " << json_number(rep.l) << ",\n";
  o << "  \"k\": " << json_number(rep.k) << ",\n";
  o << "  \"alpha1\": " << json_number(rep.alpha1) << ",\n";
  o << "  \"alpha2\": " << json_number(rep.alpha2) << ",\n";
  o << "  \"max_F\": " << json_number(rep.max_F) << ",\n";
  o << "  \"max_ratio\": " << json_number(rep.max_ratio) << ",\n";
  o << "  \"samples\": " << rep.t.size() << ",\n";
  o << "  \"branches\": ";
  emit_branches(o, rep.branches);
  o << ",\n";
  o << "  \"pass\": " << (rep.pass ? "true" : "false") << "\n";
  o << "}\n";
  return o.str();
}

std::string ledger_json(const DataConstants& dc, const std::string& note) {
  std::ostringstream o;
  o << "{\n";
  o << "  \"geometry\": {\"lambda1\":" << json_number(dc.geometry.lambda1)
    << ",\"psi1\":" << json_number(dc.geometry.psi1)
    << ",\"c1\":" << json_number(dc.geometry.c1)
    << ",\"c2\":" << json_number(dc.geometry.c2)
    << ",\"omega_sob\":" << json_number(dc.geometry.omega_sob)
    << ",\"measure\":" << json_number(dc.geometry.measure)
    << ",\"perimeter\":" << json_number(dc.geometry.perimeter)
    << ",\"rellich_inflation\":" << dc.geometry.rellich_inflation << "},\n";
  o << "  \"free_parameters\": {\"gamma1\":" << json_number(dc.fp.gamma1)
    << ",\"gamma2\":" << json_number(dc.fp.gamma2)
    << ",\"zeta3\":" << json_number(dc.fp.zeta3)
    << ",\"omega1\":" << json_number(dc.fp.omega1)
    << ",\"eps1\":" << json_number(dc.fp.eps1)
    << ",\"eps2\":" << json_number(dc.fp.eps2)
    << ",\"delta1\":" << json_number(dc.fp.delta1) << "},\n";
  o << "  \"fixed_choices\": {\"lambda\":" << json_number(dc.fixed.lambda)
    << ",\"omega2\":" << json_number(dc.fixed.omega2)
    << ",\"eps\":" << json_number(dc.fixed.eps)
    << ",\"alpha\":" << json_number(dc.fixed.alpha_th)
    << ",\"beta\":" << json_number(dc.fixed.beta_th)
    << ",\"gamma\":" << json_number(dc.fixed.gamma_th)
    << ",\"zeta\":" << json_number(dc.fixed.zeta_th)
    << ",\"mu\":" << json_number(dc.fixed.mu) << "},\n";
  o << "  \"scalars\": {\"T_m\":" << json_number(dc.T_m)
    << ",\"h_m\":" << json_number(dc.h_m) << ",\"m\":" << json_number(dc.m)
    << ",\"d1\":" << json_number(dc.d1) << ",\"d2\":" << json_number(dc.d2)
    << ",\"d4\":" << json_number(dc.d4) << ",\"d5\":" << json_number(dc.d5)
    << ",\"N\":" << json_number(dc.N) << ",\"M\":" << json_number(dc.M)
    << ",\"alpha1\":" << json_number(dc.alpha1)
    << ",\"alpha2\":" << json_number(dc.alpha2)
    << ",\"d6_term_vC_as_written\":" << json_number(dc.d6_term_vC_as_written)
    << ",\"d6_term_vC_substituted\":"
    << json_number(dc.d6_term_vC_substituted) << "},\n";
  o << "  \"branches\": ";
  emit_branches(o, dc.branches);
  o << ",\n";
  const std::pair<const char*, const std::vector<double>*> curves[] = {
      {"t", &dc.times},
      {"d6", &dc.d6},
      {"d8", &dc.d8},
      {"d9", &dc.d9},
      {"d10", &dc.d10},
      {"R", &dc.R},
      {"bound_C_sq", &dc.bound_C_sq},
      {"bound_int_gradC_sq", &dc.bound_int_gradC_sq},
      {"bound_int_C_sq", &dc.bound_int_C_sq}};
  o << "  \"curves\": {\n";
  for (size_t i = 0; i < std::size(curves); ++i) {
    o << "    \"" << curves[i].first << "\": ";
    emit_array(o, *curves[i].second);
    o << (i + 1 < std::size(curves) ? ",\n" : "\n");
  }
  o << "  },\n";
  o << "  \"objective\": " << json_number(dc.objective()) << ",\n";
  o << "  \"tuner\": \"" << json_escape(note) << "\"\n";
  o << "}\n";
  return o.str();
}

std::string verification_json(const VerificationReport& rep) {
  std::ostringstream o;
  o << "{\n  \"checks\": [\n";
  for (size_t i = 0; i < rep.checks.size(); ++i) {
    const CheckResult& c = rep.checks[i];
    o << "    {\"name\":\"" << json_escape(c.name)
      << "\",\"lhs\":" << json_number(c.lhs)
      << ",\"rhs\":" << json_number(c.rhs)
      << ",\"margin\":" << json_number(c.margin)
      << ",\"pass\":" << (c.pass ? "true" : "false") << ",\"note\":\""
      << json_escape(c.note) << "\"}"
      << (i + 1 < rep.checks.size() ? ",\n" : "\n");
  }
  o << "  ],\n  \"all_pass\": " << (rep.all_pass ? "true" : "false") << "\n}\n";
  return o.str();
}

std::string scaling_json(const ScalingResult& res) {
  std::ostringstream o;
  o << "{\n  \"factors\": ";
  emit_array(o, res.factors);
  o << ",\n  \"max_F\": ";
  emit_array(o, res.max_F);
  o << ",\n  \"slope\": " << json_number(res.slope);
  o << ",\n  \"residual\": " << json_number(res.residual);
  o << ",\n  \"inconclusive\": " << (res.inconclusive ? "true" : "false")
    << "\n}\n";
  return o.str();
}

std::string sobolev_json(const SobolevReport& rep) {
  std::ostringstream o;
  o << "{\"samples\":" << rep.samples << ",\"failures\":" << rep.failures
    << ",\"worst_ratio\":" << json_number(rep.worst_ratio)
    << ",\"pass\":" << (rep.pass ? "true" : "false") << "}\n";
  return o.str();
}

// ---------------------------------------------------------------------------
// CLI

namespace {
int emit_output(const std::string& out_dir, const std::string& fname,
                const std::string& content) {
  if (out_dir.empty()) {
    std::cout << content;
    return 0;
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  const auto path = std::filesystem::path(out_dir) / fname;
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot write '" << path.string() << "'\n";
    return 2;
  }
  f << content;
  return 0;
}

std::vector<double> parse_factors(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      size_t pos = 0;
      const double v = std::stod(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("--factors: '" + tok + "' is not a number");
    }
  }
  if (out.empty()) throw ConfigError("--factors: empty list");
  return out;
}
}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"thermosolutal convection workbench: simulation, a priori "
               "constant ledger, and structural-stability verification"};
  app.name("thermosol");

  std::string out_dir;
  int grid_override = 0;
  int time_samples = 1000;
  std::uint64_t seed = 12345;
  app.add_option("--out", out_dir,
                 "write outputs into this directory instead of stdout");
  app.add_option("--grid-override", grid_override,
                 "override the configured resolution with nx = ny = N")
      ->check(CLI::PositiveNumber);
  app.add_option("--time-samples", time_samples,
                 "boundary-data samples used by the constant ledger")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "seed for randomized checks");
  app.require_subcommand(1);

  std::string solve_path, constants_path, twin_path, scaling_path, verify_path;
  std::string factors_str = "0.1,0.05,0.025";
  bool tune = false;
  int sob_grid = 128, sob_samples = 100;

  CLI::App* c_solve =
      app.add_subcommand("solve", "run one scenario and emit trajectory CSV");
  c_solve->add_option("scenario", solve_path, "scenario JSON file")
      ->required();

  CLI::App* c_constants = app.add_subcommand(
      "constants", "emit the a priori constant ledger as JSON");
  c_constants->add_option("scenario", constants_path, "scenario JSON file")
      ->required();
  c_constants->add_flag("--tune", tune,
                        "optimize the free parameters before emitting");

  CLI::App* c_twin = app.add_subcommand(
      "twin", "two solves differing only in reaction coefficients; "
              "emit per-step difference vs bound");
  c_twin->add_option("twinspec", twin_path, "twin JSON file")->required();

  CLI::App* c_scaling = app.add_subcommand(
      "scaling", "perturbation scaling study over a list of factors");
  c_scaling->add_option("twinspec", scaling_path, "twin JSON file")
      ->required();
  c_scaling->add_option("--factors", factors_str,
                        "comma-separated perturbation factors");

  CLI::App* c_verify = app.add_subcommand(
      "verify", "run the full inequality battery for one scenario");
  c_verify->add_option("scenario", verify_path, "scenario JSON file")
      ->required();

  CLI::App* c_sobolev = app.add_subcommand(
      "sobolev", "randomized check of the quartic Sobolev inequality");
  c_sobolev->add_option("--grid", sob_grid, "grid resolution (square)")
      ->check(CLI::PositiveNumber);
  c_sobolev->add_option("--samples", sob_samples, "number of random fields")
      ->check(CLI::PositiveNumber);

  for (CLI::App* sub :
       {c_solve, c_constants, c_twin, c_scaling, c_verify, c_sobolev})
    sub->fallthrough();

  std::vector<const char*> argv;
  argv.push_back("thermosol");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_solve->parsed()) {
      Scenario sc = load_scenario_file(solve_path, grid_override);
      Trajectory tr = simulate(sc);
      return emit_output(out_dir, "trajectory.csv", trajectory_csv(tr));
    }

    if (c_constants->parsed()) {
      Scenario sc = load_scenario_file(constants_path, grid_override);
      GeometryConstants geo = GeometryConstants::compute(sc.grid);
      ScenarioData sd = ScenarioData::sample(sc, time_samples);
      FreeParameters fp;
      std::string note = "default free parameters";
      if (tune) fp = tune_free_parameters(sd, geo, 500, &note);
      DataConstants dc = DataConstants::compute(sd, geo, fp);
      return emit_output(out_dir, "constants.json", ledger_json(dc, note));
    }

    if (c_twin->parsed()) {
      TwinSpec ts = load_twin_file(twin_path, grid_override);
      if (std::fabs(ts.l()) > 0.5 * ts.coeffs1.L ||
          std::fabs(ts.k()) > 0.5 * ts.coeffs1.K)
        std::cerr << "warning: perturbation exceeds 50% of the reference "
                     "coefficients; the bound stays valid but the constants "
                     "are far from the perturbative regime\n";
      TwinReport rep = twin_run(ts);
      int rc = emit_output(out_dir, "twin.csv", twin_csv(rep));
      if (rc == 0 && !out_dir.empty())
        rc = emit_output(out_dir, "twin.json", twin_json(rep));
      else if (out_dir.empty())
        std::cerr << twin_json(rep);
      return rep.pass ? rc : 1;
    }

    if (c_scaling->parsed()) {
      TwinSpec ts = load_twin_file(scaling_path, grid_override);
      ScalingResult res = scaling_study(ts, parse_factors(factors_str));
      const int rc = emit_output(out_dir, "scaling.json", scaling_json(res));
      if (res.inconclusive) {
        std::cerr << "scaling inconclusive: all differences below round-off\n";
        return 1;
      }
      std::cerr << "slope " << format_double(res.slope) << "\n";
      return rc;
    }

    if (c_verify->parsed()) {
      Scenario sc = load_scenario_file(verify_path, grid_override);
      VerifyOptions opt;
      opt.seed = seed;
      VerificationReport rep = verify_all(sc, FreeParameters{}, opt);
      const int rc =
          emit_output(out_dir, "verify.json", verification_json(rep));
      return rep.all_pass ? rc : 1;
    }

    if (c_sobolev->parsed()) {
      Grid2D g(sob_grid, sob_grid, 1.0, 1.0);
      SobolevReport rep = sobolev_check(g, sob_samples, seed);
      const int rc = emit_output(out_dir, "sobolev.json", sobolev_json(rep));
      return rep.pass ? rc : 1;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const BlowUpError& e) {
    std::cerr << "solver blow-up: " << e.what() << "\n";
    return 3;
  } catch (const CflError& e) {
    std::cerr << "time-step failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace thermosol
