// Acceptance battery for the convection verification workbench.
//
// Each numbered criterion prints exactly one line:
//   PASS criterion N: <what was checked> (<timing/diagnostics>)
//   FAIL criterion N: <what was checked> (<which number broke>)
// The process exits nonzero if any criterion fails.
//
// Criteria (resolutions and budgets are part of the contract):
//   1  first membrane eigenvalue and torsion maximum at 128^2, 1% of theory,
//      under 10 s each
//   2  harmonic-extension boundary lemmas on all 20 power traces at 128^2,
//      zero failures
//   3  100 seeded random Sobolev fields at 128^2 within 2%, under 30 s
//   4  temperature maximum principle on the five-suite at 64^2, under 2 min
//      of combined solver time
//   5  every ledger curve dominates its measured trajectory (2% margin) for
//      default and tuned free parameters, all five scenarios
//   6  twin perturbations (0.1,0), (0,0.1), (0.05,0.05): difference energy
//      below the theorem envelope at every sample; identical twins below
//      1e-12; under 5 min
//   7  perturbation scaling slope = 2.0 +/- 0.1 in both coefficient
//      directions, factors {0.1, 0.05, 0.025}, under 10 min
//   8  spatially uniform reaction matches the scalar ODE within 1e-6 at t=1
//   9  tuned free parameters never raise the bound objective on any suite
//      scenario

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "thermosol/bounds.hpp"
#include "thermosol/convection.hpp"
#include "thermosol/domain.hpp"
#include "thermosol/elliptic.hpp"
#include "thermosol/harness.hpp"

using namespace thermosol;

namespace {

double now_s() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

int g_failures = 0;

void report(int id, bool pass, const std::string& text,
            const std::string& detail) {
  std::printf("%s criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", id,
              text.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// worst violation of lhs <= rhs * (1 + margin) + floor over the curve;
// returns true when none
bool curve_le(const std::vector<double>& lhs, const std::vector<double>& rhs,
              double margin, double floor_abs, double* worst_gap) {
  bool ok = true;
  double worst = -1e300;
  for (size_t i = 0; i < lhs.size(); ++i) {
    double gap = lhs[i] - (rhs[i] * (1.0 + margin) + floor_abs);
    if (gap > worst) worst = gap;
    if (gap > 0.0) ok = false;
  }
  if (worst_gap) *worst_gap = worst;
  return ok;
}

}  // namespace

int main() {
  // ------------------------------------------------------------------ 1
  {
    Grid2D g(128, 128, 1.0, 1.0);
    double t0 = now_s();
    double lam = membrane_eigenvalue(g);
    double t_lam = now_s() - t0;
    t0 = now_s();
    EllipticSolution tor = torsion_function(g);
    double tor_max = 0.0;
    for (double v : tor.field.data) tor_max = std::max(tor_max, v);
    double t_tor = now_s() - t0;

    const double lam_ref = 2.0 * kPi * kPi;
    const double tor_ref = 0.07367135227369116;  // unit-square series value
    double e_lam = std::fabs(lam - lam_ref) / lam_ref;
    double e_tor = std::fabs(tor_max - tor_ref) / tor_ref;
    bool pass = e_lam <= 0.01 && e_tor <= 0.01 && t_lam < 10.0 && t_tor < 10.0;
    report(1, pass,
           "membrane eigenvalue and torsion maximum at 128^2 match theory "
           "within 1%",
           fmt("lambda1 %.6f vs %.6f [rel %.2e, %.1fs], torsion max %.6f vs "
               "%.6f [rel %.2e, %.1fs]",
               lam, lam_ref, e_lam, t_lam, tor_max, tor_ref, e_tor, t_tor));
  }

  // ------------------------------------------------------------------ 2
  {
    Grid2D g(128, 128, 1.0, 1.0);
    RellichConstants rc = rellich_constants(g);
    EllipticSolution tor = torsion_function(g);
    int fail1 = 0, fail2 = 0, n = 0;
    for (const BoundaryTrace& q : harmonic_test_family(g)) {
      ++n;
      if (!check_dirichlet_boundary_control(q, rc).pass) ++fail1;
      if (!check_torsion_boundary_control(q, tor).pass) ++fail2;
    }
    bool pass = (n == 20) && fail1 == 0 && fail2 == 0;
    report(2, pass,
           "harmonic-extension boundary lemmas hold on all 20 power traces "
           "at 128^2",
           fmt("%d traces, %d gradient-control failures, %d torsion-control "
               "failures, rellich inflation %d",
               n, fail1, fail2, rc.inflation_doublings));
  }

  // ------------------------------------------------------------------ 3
  {
    double t0 = now_s();
    SobolevReport rep = sobolev_check(Grid2D(128, 128, 1.0, 1.0), 100, 12345,
                                      0.02);
    double el = now_s() - t0;
    bool pass = rep.pass && rep.samples == 100 && rep.failures == 0 && el < 30.0;
    report(3, pass,
           "100 seeded random fields satisfy the interpolation inequality at "
           "128^2 within 2%",
           fmt("failures %d/100, worst lhs/rhs %.4f, %.1fs", rep.failures,
               rep.worst_ratio, el));
  }

  // ------------------------------------------------ shared suite solves
  // One forward solve per scenario at 64^2 feeds criteria 4, 5, and 9.
  struct SuiteRun {
    std::string name;
    Trajectory traj;
    DataConstants dc_default, dc_tuned;
  };
  std::vector<SuiteRun> runs;
  double sim_time = 0.0;
  {
    GeometryConstants geo = GeometryConstants::compute(Grid2D(64, 64, 1.0, 1.0));
    for (const std::string& name : suite_scenario_names()) {
      Scenario sc = make_suite_scenario(name, 64);
      double t0 = now_s();
      SuiteRun run;
      run.name = name;
      run.traj = simulate(sc);
      sim_time += now_s() - t0;
      ScenarioData sd = ScenarioData::sample_at(sc, run.traj.t);
      run.dc_default = DataConstants::compute(sd, geo, FreeParameters{});
      FreeParameters tuned = tune_free_parameters(sd, geo, 500, nullptr);
      run.dc_tuned = DataConstants::compute(sd, geo, tuned);
      runs.push_back(std::move(run));
    }
  }

  // ------------------------------------------------------------------ 4
  {
    bool pass = sim_time < 120.0;
    std::string detail;
    for (const SuiteRun& r : runs) {
      MaxTempCheck chk = max_temp_check(r.traj, r.dc_default.T_m, 1e-8);
      if (!chk.pass) {
        pass = false;
        detail += fmt("[%s sup %.9f > T_m %.9f] ", r.name.c_str(), chk.sup,
                      chk.bound);
      }
    }
    detail += fmt("5 scenarios at 64^2, combined solve time %.1fs", sim_time);
    report(4, pass,
           "temperature never exceeds its data ceiling on the scenario suite",
           detail);
  }

  // ------------------------------------------------------------------ 5
  {
    bool pass = true;
    std::string worst_note = "all curves dominated";
    double worst_gap = -1e300;
    for (const SuiteRun& r : runs) {
      for (const DataConstants* dc : {&r.dc_default, &r.dc_tuned}) {
        const Trajectory& tr = r.traj;
        const char* which = (dc == &r.dc_default) ? "default" : "tuned";
        // velocity energy: ||v||^2 + int||grad v||^2 vs d5 + (2/l1) int||C||^2
        std::vector<double> vlhs(tr.size()), vrhs(tr.size());
        for (size_t i = 0; i < tr.size(); ++i) {
          vlhs[i] = tr.norm_v_sq[i] + tr.int_grad_v_sq[i];
          vrhs[i] = dc->d5 + 2.0 / dc->geometry.lambda1 * tr.int_C_sq[i];
        }
        struct Pair {
          const char* name;
          const std::vector<double>*lhs, *rhs;
        } pairs[] = {
            {"velocity-energy", &vlhs, &vrhs},
            {"int-C-sq", &tr.int_C_sq, &dc->bound_int_C_sq},
            {"C-sq", &tr.norm_C_sq, &dc->bound_C_sq},
            {"int-gradC-sq", &tr.int_grad_C_sq, &dc->bound_int_gradC_sq},
            {"C-fourth", &tr.norm_C_4, &dc->d9},
            {"velocity-d10", &vlhs, &dc->d10},
        };
        for (const Pair& p : pairs) {
          double gap = 0.0;
          if (!curve_le(*p.lhs, *p.rhs, 0.02, 1e-12, &gap)) {
            pass = false;
            worst_note = fmt("%s/%s/%s overshoots", r.name.c_str(), which,
                             p.name);
          }
          if (gap > worst_gap) worst_gap = gap;
        }
      }
    }
    report(5, pass,
           "every a priori ledger curve dominates its measured trajectory "
           "(default and tuned weights, 2% margin)",
           fmt("%s; worst gap %.3e", worst_note.c_str(), worst_gap));
  }

  // ------------------------------------------------------------------ 6
  {
    double t0 = now_s();
    bool pass = true;
    std::string detail;

    TwinReport ident = twin_run(make_reference_twin(0.0, 0.0, 64));
    if (ident.max_F > 1e-12) {
      pass = false;
      detail += fmt("[identical max_F %.3e] ", ident.max_F);
    }

    const double cases[][2] = {{0.1, 0.0}, {0.0, 0.1}, {0.05, 0.05}};
    for (const double* c : cases) {
      TwinReport rep = twin_run(make_reference_twin(c[0], c[1], 64));
      bool strict = true;
      for (size_t i = 0; i < rep.t.size(); ++i)
        if (rep.F[i] > rep.bound[i] + 1e-12) strict = false;
      if (!strict) {
        pass = false;
        detail += fmt("[(%.2f,%.2f) max ratio %.3e] ", c[0], c[1],
                      rep.max_ratio);
      } else {
        detail += fmt("(%.2f,%.2f) ratio %.1e ", c[0], c[1], rep.max_ratio);
      }
    }
    double el = now_s() - t0;
    pass = pass && el < 300.0;
    detail += fmt("identical max_F %.1e, %.1fs", ident.max_F, el);
    report(6, pass,
           "twin runs stay below the continuous-dependence envelope at every "
           "sample",
           detail);
  }

  // ------------------------------------------------------------------ 7
  {
    double t0 = now_s();
    ScalingResult rl =
        scaling_study(make_reference_twin(0.1, 0.0, 64), {0.1, 0.05, 0.025});
    ScalingResult rk =
        scaling_study(make_reference_twin(0.0, 0.1, 64), {0.1, 0.05, 0.025});
    double el = now_s() - t0;
    bool pass = !rl.inconclusive && !rk.inconclusive &&
                std::fabs(rl.slope - 2.0) <= 0.1 &&
                std::fabs(rk.slope - 2.0) <= 0.1 && el < 600.0;
    report(7, pass,
           "difference energy scales quadratically in each reaction "
           "coefficient",
           fmt("slope_L %.4f, slope_K %.4f, factors {0.1,0.05,0.025}, %.1fs",
               rl.slope, rk.slope, el));
  }

  // ------------------------------------------------------------------ 8
  {
    Scenario sc = make_suite_scenario("ode-reduction", 64);
    Trajectory tr = simulate(sc);
    // a C' = L f - K C with f = 1/2, C(0) = 1, K = 1.6, L = 0.8:
    // C(t) = 1/4 + 3/4 e^{-1.6 t}
    double exact = 0.25 + 0.75 * std::exp(-1.6);
    double got = std::sqrt(tr.norm_C_sq.back());
    double err = std::fabs(got - exact);
    bool pass = err <= 1e-6;
    report(8, pass,
           "spatially uniform reaction reproduces the scalar ODE at t = 1",
           fmt("|C_h - C| = %.3e (budget 1e-6)", err));
  }

  // ------------------------------------------------------------------ 9
  {
    bool pass = true;
    std::string detail;
    for (const SuiteRun& r : runs) {
      double dobj = r.dc_default.objective();
      double tobj = r.dc_tuned.objective();
      if (!(tobj <= dobj)) {
        pass = false;
        detail += fmt("[%s tuned %.4g > default %.4g] ", r.name.c_str(), tobj,
                      dobj);
      } else {
        detail += fmt("%s %.3g<=%.3g ", r.name.c_str(), tobj, dobj);
      }
    }
    report(9, pass, "tuning the free parameters never raises the objective",
           detail);
  }

  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all 9 criteria passed\n");
  return 0;
}
