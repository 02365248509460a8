#include "thermosol/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "thermosol/elliptic.hpp"

namespace thermosol {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double vec_max(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

// worst sample of lhs[i] <= rhs[i]*(1+rel) + abs over shared grids
CheckResult curve_check(const std::string& name, const std::vector<double>& lhs,
                        const std::vector<double>& rhs, double rel,
                        double abs) {
  CheckResult c;
  c.name = name;
  c.margin = rel;
  double worst = -kInf;
  size_t worst_i = 0;
  for (size_t i = 0; i < lhs.size(); ++i) {
    const double gap = lhs[i] - (rhs[i] * (1.0 + rel) + abs);
    if (gap > worst || (gap == worst && lhs[i] > lhs[worst_i])) {
      worst = gap;
      worst_i = i;
    }
  }
  if (!lhs.empty()) {
    c.lhs = lhs[worst_i];
    c.rhs = rhs[worst_i];
  }
  c.pass = worst <= 0.0;
  return c;
}
}  // namespace

// ---------------------------------------------------------------------------

TwinReport twin_run(const TwinSpec& ts, const FreeParameters& fp,
                    double rel_margin, double abs_floor) {
  if (!(ts.coeffs1.L > 0) || !(ts.coeffs1.K > 0) || !(ts.coeffs2.L > 0) ||
      !(ts.coeffs2.K > 0))
    throw ConfigError("twin_run: reaction coefficients must be positive");

  Scenario sc1 = ts.base;
  sc1.params.L = ts.coeffs1.L;
  sc1.params.K = ts.coeffs1.K;
  Scenario sc2 = ts.base;
  sc2.params.L = ts.coeffs2.L;
  sc2.params.K = ts.coeffs2.K;

  Stepper s1(sc1), s2(sc2);
  SolutionState st1 = SolutionState::initial(sc1);
  SolutionState st2 = SolutionState::initial(sc2);

  TwinReport rep;
  rep.l = ts.l();
  rep.k = ts.k();
  rep.t.push_back(0.0);
  rep.F.push_back(0.0);

  const double T = ts.base.t_final;
  while (st1.t < T * (1.0 - 1e-14)) {
    const double dt =
        std::min({s1.suggest_dt(st1), s2.suggest_dt(st2), T - st1.t});
    s1.advance(st1, dt);
    s2.advance(st2, dt);
    const double F = vec_diff_l2_sq(st1.v, st2.v) + diff_l2_sq(st1.T, st2.T) +
                     diff_l2_sq(st1.C, st2.C);
    rep.t.push_back(st1.t);
    rep.F.push_back(F);
  }

  GeometryConstants geo = GeometryConstants::compute(ts.base.grid);
  ScenarioData sd1 = ScenarioData::sample_at(sc1, rep.t);
  ScenarioData sd2 = sd1;
  sd2.params = sc2.params;
  DataConstants dc1 = DataConstants::compute(sd1, geo, fp);
  DataConstants dc2 = DataConstants::compute(sd2, geo, fp);

  // pair-1 constants everywhere except the ||C_2||^2 factor, which takes
  // the pair-2 a priori bound
  const double sup_C2_bound = vec_max(dc2.bound_C_sq);
  Alphas al = compute_alphas(sd1.params.a, ts.coeffs1.K, dc1.m, dc1.d2,
                             sup_C2_bound);
  rep.alpha1 = al.alpha1;
  rep.alpha2 = al.alpha2;
  rep.branches = dc1.branches;

  const size_t n = rep.t.size();
  rep.bound.resize(n);
  rep.ratio.resize(n);
  rep.pass = true;
  for (size_t i = 0; i < n; ++i) {
    rep.bound[i] =
        theorem_bound(dc1.R[i], rep.alpha1, rep.alpha2, rep.l, rep.k);
    rep.ratio[i] = (rep.bound[i] > 0.0)  ? rep.F[i] / rep.bound[i]
                   : (rep.F[i] == 0.0)   ? 0.0
                                         : kInf;
    rep.max_F = std::max(rep.max_F, rep.F[i]);
    rep.max_ratio = std::max(rep.max_ratio, rep.ratio[i]);
    if (rep.F[i] > rep.bound[i] * (1.0 + rel_margin) + abs_floor)
      rep.pass = false;
  }
  return rep;
}

ScalingResult scaling_study(const TwinSpec& base,
                            const std::vector<double>& factors,
                            const FreeParameters& fp) {
  if (factors.size() < 3)
    throw ConfigError("scaling_study: need at least 3 factors");
  const double l0 = base.l(), k0 = base.k();
  const double scale = std::max(std::fabs(l0), std::fabs(k0));
  if (!(scale > 0.0))
    throw ConfigError("scaling_study: base twin has zero perturbation");
  const double dl = l0 / scale, dk = k0 / scale;

  ScalingResult out;
  out.factors = factors;
  for (double f : factors) {
    if (!(f > 0.0)) throw ConfigError("scaling_study: factors must be > 0");
    TwinSpec ts = base;
    ts.coeffs2.L = ts.coeffs1.L - f * dl;
    ts.coeffs2.K = ts.coeffs1.K - f * dk;
    TwinReport rep = twin_run(ts, fp);
    out.max_F.push_back(rep.max_F);
  }

  bool all_tiny = true;
  for (double F : out.max_F)
    if (F >= 1e-14) all_tiny = false;
  if (all_tiny) {
    out.inconclusive = true;
    return out;
  }

  // least squares in log space
  const size_t n = factors.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    const double x = std::log(factors[i]);
    const double y = std::log(std::max(out.max_F[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  out.slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - out.slope * sx) / n;
  double rss = 0;
  for (size_t i = 0; i < n; ++i) {
    const double r = std::log(std::max(out.max_F[i], 1e-300)) -
                     (out.slope * std::log(factors[i]) + intercept);
    rss += r * r;
  }
  out.residual = std::sqrt(rss / n);
  return out;
}

// ---------------------------------------------------------------------------

SobolevReport sobolev_check(const Grid2D& g, int n_samples, uint64_t seed,
                            double rel_margin) {
  std::mt19937_64 rng(seed);
  auto u01 = [&rng]() { return (rng() >> 11) * 0x1.0p-53; };

  SobolevReport rep;
  rep.samples = n_samples;
  BoundaryTrace zero_bv(g);

  for (int s = 0; s < n_samples; ++s) {
    ScalarField w1(g), w2(g);
    for (ScalarField* comp : {&w1, &w2}) {
      const int n_modes = 1 + static_cast<int>(rng() % 8);
      for (int q = 0; q < n_modes; ++q) {
        const int mx = 1 + static_cast<int>(rng() % 8);
        const int my = 1 + static_cast<int>(rng() % 8);
        const double amp = 2.0 * u01() - 1.0;
        for (int j = 0; j < g.ny; ++j)
          for (int i = 0; i < g.nx; ++i)
            comp->at(i, j) += amp * std::sin(mx * kPi * g.xc(i) / g.lx) *
                              std::sin(my * kPi * g.yc(j) / g.ly);
      }
    }

    double lhs = 0.0;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double m2 = w1.at(i, j) * w1.at(i, j) + w2.at(i, j) * w2.at(i, j);
        lhs += m2 * m2;
      }
    lhs *= g.dx * g.dy;

    const double i2 = l2_norm_sq(w1) + l2_norm_sq(w2);
    const double grad = grad_norm_sq(w1, zero_bv) + grad_norm_sq(w2, zero_bv);
    const double rhs = 0.5 * i2 * grad;
    const double ratio = (rhs > 0.0) ? lhs / rhs : (lhs == 0.0 ? 0.0 : kInf);
    rep.worst_ratio = std::max(rep.worst_ratio, ratio);
    if (lhs > rhs * (1.0 + rel_margin) + 1e-12) ++rep.failures;
  }
  rep.pass = (rep.failures == 0);
  return rep;
}

// ---------------------------------------------------------------------------

const CheckResult* VerificationReport::find(const std::string& name) const {
  for (const CheckResult& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

VerificationReport verify_all(const Scenario& sc, const FreeParameters& fp,
                              const VerifyOptions& opt) {
  VerificationReport rep;
  Trajectory traj = simulate(sc);
  GeometryConstants geo = GeometryConstants::compute(sc.grid);
  ScenarioData sd = ScenarioData::sample_at(sc, traj.t);
  DataConstants dc = DataConstants::compute(sd, geo, fp);
  const size_t n = traj.size();

  {
    CheckResult c;
    c.name = "max-principle";
    c.lhs = vec_max(traj.sup_T);
    c.rhs = dc.T_m;
    c.pass = c.lhs <= c.rhs + opt.max_principle_tol;
    c.note = "sup_t sup_x |T| vs temperature data ceiling";
    rep.checks.push_back(c);
  }
  {
    CheckResult c;
    c.name = "incompressibility";
    c.lhs = traj.max_div;
    c.rhs = opt.div_tol;
    c.pass = c.lhs <= c.rhs;
    c.note = "worst discrete divergence after projection";
    rep.checks.push_back(c);
  }
  {
    std::vector<double> lhs(n), rhs(n);
    for (size_t i = 0; i < n; ++i) {
      lhs[i] = traj.norm_v_sq[i] + traj.int_grad_v_sq[i];
      rhs[i] = dc.d5 + 2.0 / geo.lambda1 * traj.int_C_sq[i];
    }
    CheckResult c = curve_check("energy-velocity", lhs, rhs, opt.rel_margin,
                                opt.abs_floor);
    c.note = "velocity energy vs data + measured concentration forcing";
    rep.checks.push_back(c);
  }
  {
    CheckResult c = curve_check("C-l2-integral", traj.int_C_sq,
                                dc.bound_int_C_sq, opt.rel_margin,
                                opt.abs_floor);
    c.note = "time integral of ||C||^2 vs exponential-kernel data bound";
    rep.checks.push_back(c);
  }
  {
    CheckResult c = curve_check("C-l2", traj.norm_C_sq, dc.bound_C_sq,
                                opt.rel_margin, opt.abs_floor);
    c.note = "||C||^2 vs a priori curve";
    rep.checks.push_back(c);
  }
  {
    CheckResult c = curve_check("C-grad-integral", traj.int_grad_C_sq,
                                dc.bound_int_gradC_sq, opt.rel_margin,
                                opt.abs_floor);
    c.note = "time integral of ||grad C||^2 vs a priori curve";
    rep.checks.push_back(c);
  }
  {
    CheckResult c = curve_check("C-l4", traj.norm_C_4, dc.d9, opt.rel_margin,
                                opt.abs_floor);
    c.note = "||C||_4^4 vs a priori curve";
    rep.checks.push_back(c);
  }
  {
    std::vector<double> lhs(n);
    for (size_t i = 0; i < n; ++i)
      lhs[i] = traj.norm_v_sq[i] + traj.int_grad_v_sq[i];
    CheckResult c =
        curve_check("velocity-d10", lhs, dc.d10, opt.rel_margin, opt.abs_floor);
    c.note = "velocity energy vs fully a priori curve";
    rep.checks.push_back(c);
  }

  {
    // harmonic-extension lemma batteries on the scenario grid
    EllipticSolution tors = torsion_function(sc.grid);
    RellichConstants rc{geo.c1, geo.c2, geo.rellich_inflation};
    std::vector<BoundaryTrace> fam = harmonic_test_family(sc.grid);
    CheckResult c1r, c2r;
    c1r.name = "harmonic-gradient-control";
    c1r.note = "gradient + normal derivative vs tangential data, 20 traces";
    c1r.margin = opt.rel_margin;
    c1r.pass = true;
    c2r.name = "harmonic-torsion-control";
    c2r.note = "weighted gradient + l2 vs boundary l2, 20 traces";
    c2r.margin = opt.rel_margin;
    c2r.pass = true;
    double worst1 = -kInf, worst2 = -kInf;
    for (const BoundaryTrace& q : fam) {
      LemmaCheck l1 = check_dirichlet_boundary_control(q, rc, opt.rel_margin);
      if (!l1.pass) c1r.pass = false;
      const double gap1 = l1.lhs - l1.rhs * (1.0 + opt.rel_margin);
      if (gap1 > worst1) {
        worst1 = gap1;
        c1r.lhs = l1.lhs;
        c1r.rhs = l1.rhs;
      }
      LemmaCheck l2 =
          check_torsion_boundary_control(q, tors, 1e-6 + opt.rel_margin);
      if (!l2.pass) c2r.pass = false;
      const double gap2 = l2.lhs - l2.rhs * (1.0 + 1e-6 + opt.rel_margin);
      if (gap2 > worst2) {
        worst2 = gap2;
        c2r.lhs = l2.lhs;
        c2r.rhs = l2.rhs;
      }
    }
    rep.checks.push_back(c1r);
    rep.checks.push_back(c2r);
  }

  {
    SobolevReport sb =
        sobolev_check(sc.grid, opt.sobolev_samples, opt.seed, opt.rel_margin);
    CheckResult c;
    c.name = "sobolev";
    c.lhs = sb.worst_ratio;
    c.rhs = 1.0;
    c.margin = opt.rel_margin;
    c.pass = sb.pass;
    c.note = "worst quartic/energy-product ratio over random fields";
    rep.checks.push_back(c);
  }

  {
    const double p = opt.theorem_rel_perturbation;
    TwinSpec ts;
    ts.base = sc;
    ts.coeffs1 = {sc.params.L, sc.params.K};
    ts.coeffs2 = {(1.0 - p) * sc.params.L, (1.0 - p) * sc.params.K};
    TwinReport tw = twin_run(ts, fp, opt.rel_margin, opt.abs_floor);
    CheckResult c =
        curve_check("theorem", tw.F, tw.bound, opt.rel_margin, opt.abs_floor);
    c.note = "squared twin-difference vs continuous-dependence bound";
    rep.checks.push_back(c);
  }

  rep.all_pass = true;
  for (const CheckResult& c : rep.checks)
    if (!c.pass) rep.all_pass = false;
  return rep;
}

// ---------------------------------------------------------------------------
// Scenario suite

namespace {
struct SuiteConfig {
  const char* v0;
  const char* T0;
  const char* g;
  const char* C0;
  const char* h;
  double grav_T[2];
  double grav_C[2];
  const char* f;
  double a, b, L, K;
};

SuiteConfig suite_config(const std::string& name) {
  if (name == "zero")
    return {"zero", "zero", "zero", "zero", "zero",
            {0, 0},  {0, 0}, "linear:0,1", 1, 1, 1, 1};
  if (name == "constant-T")
    return {"zero", "constant:0.5", "constant:0.5", "zero", "zero",
            {0, 0},  {0, 0}, "linear:0,1", 1, 1, 1, 1};
  if (name == "convective")
    return {"zero", "sine-mode:1,1", "zero", "zero", "zero",
            {0, 1},  {0, 1}, "linear:0,1", 1, 1, 1, 1};
  if (name == "reactive")
    return {"zero", "sine-mode:1,1", "zero", "zero", "ramp:0,0.5,0.25",
            {0, 0},  {0, 0}, "tanh:2", 1, 1, 0.8, 1.2};
  if (name == "adversarial")
    return {"vortex:0.05", "zero", "ramp:0,0.5,1.5", "zero",
            "boundary-sine:2,0.5,0,0.25",
            {0, 1},  {0.6, -0.8}, "quadratic:0.1,0.4,0.15", 1, 1, 1.2, 0.7};
  if (name == "ode-reduction")
    return {"zero", "zero", "zero", "constant:1", "ode-relax:1,0.25,1.6",
            {0, 0},  {0, 0}, "linear:0.5,0", 1, 1, 0.8, 1.6};
  throw ConfigError("unknown suite scenario '" + name + "'");
}
}  // namespace

Scenario make_suite_scenario(const std::string& name, int n) {
  SuiteConfig c = suite_config(name);
  Grid2D g(n, n, 1.0, 1.0);
  ModelParams mp;
  mp.a = c.a;
  mp.b = c.b;
  mp.L = c.L;
  mp.K = c.K;
  mp.grav_T[0] = c.grav_T[0];
  mp.grav_T[1] = c.grav_T[1];
  mp.grav_C[0] = c.grav_C[0];
  mp.grav_C[1] = c.grav_C[1];
  mp.f = parse_equilibrium(c.f);
  return Scenario::make(g, mp, parse_velocity_profile(c.v0),
                        parse_field_profile(c.T0, g),
                        parse_field_profile(c.C0, g),
                        parse_boundary_profile(c.g, g),
                        parse_boundary_profile(c.h, g), 1.0);
}

const std::vector<std::string>& suite_scenario_names() {
  static const std::vector<std::string> names = {
      "zero", "constant-T", "convective", "reactive", "adversarial"};
  return names;
}

TwinSpec make_reference_twin(double l, double k, int n) {
  TwinSpec ts;
  ts.base = make_suite_scenario("convective", n);
  ts.coeffs1 = {1.0, 1.0};
  ts.coeffs2 = {1.0 - l, 1.0 - k};
  return ts;
}

}  // namespace thermosol
