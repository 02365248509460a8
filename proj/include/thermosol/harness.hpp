#pragma once
// Verification orchestration: twin runs realizing the continuous-dependence
// experiment (two forward solves differing only in the reaction coefficients
// L, K), perturbation scaling studies, the randomized Sobolev-inequality
// suite, the full inequality battery for one scenario, and the named
// scenario suite used by the acceptance tests.

#include <cstdint>
#include <string>
#include <vector>

#include "thermosol/bounds.hpp"
#include "thermosol/convection.hpp"

namespace thermosol {

struct TwinCoeffs {
  double L = 1.0, K = 1.0;
};

struct TwinSpec {
  Scenario base;       // shared grid, initial and boundary data
  TwinCoeffs coeffs1;  // reference pair (feeds the bound's constants)
  TwinCoeffs coeffs2;

  double l() const { return coeffs1.L - coeffs2.L; }
  double k() const { return coeffs1.K - coeffs2.K; }
};

struct TwinReport {
  std::vector<double> t;
  std::vector<double> F;      // ||v1-v2||^2 + ||T1-T2||^2 + ||C1-C2||^2
  std::vector<double> bound;  // R(t) (alpha1 l^2 + alpha2 k^2)
  std::vector<double> ratio;  // F/bound, 0 when both vanish
  double l = 0.0, k = 0.0;
  double alpha1 = 0.0, alpha2 = 0.0;
  double max_F = 0.0, max_ratio = 0.0;
  bool pass = false;
  LedgerBranches branches;
};

// Lockstep twin run: both solves advance with the shared time step
// min(dt1, dt2), so difference fields are formed at identical times.
// The bound uses pair-1 constants, except the ||C_2||^2 factor in alpha2,
// which comes from the pair-2 a priori ledger (as the estimate requires).
TwinReport twin_run(const TwinSpec& ts, const FreeParameters& fp = {},
                    double rel_margin = 0.02, double abs_floor = 1e-12);

struct ScalingResult {
  std::vector<double> factors;
  std::vector<double> max_F;
  double slope = 0.0;     // log-log least-squares slope of max_F vs factor
  double residual = 0.0;  // rms residual of the fit in log space
  bool inconclusive = false;  // every max_F below round-off floor
};

// Runs one twin per factor, scaling the base perturbation direction
// (l, k)/max(|l|, |k|) by each factor, and fits the quadratic-response
// slope. Factors must be positive; at least 3 are required.
ScalingResult scaling_study(const TwinSpec& base,
                            const std::vector<double>& factors,
                            const FreeParameters& fp = {});

struct SobolevReport {
  int samples = 0;
  int failures = 0;
  double worst_ratio = 0.0;  // max over samples of LHS/RHS
  bool pass = false;
};

// Randomized check of  int |w|^4 <= (1/2) int |w|^2 int |grad w|^2  on
// zero-boundary two-component fields built from <= 8 random sine modes per
// component (deterministic for a fixed seed).
SobolevReport sobolev_check(const Grid2D& g, int n_samples, uint64_t seed,
                            double rel_margin = 0.02);

struct CheckResult {
  std::string name;
  double lhs = 0.0, rhs = 0.0;  // worst-case pair over the samples checked
  double margin = 0.0;          // relative margin applied to rhs
  bool pass = false;
  std::string note;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool all_pass = false;

  const CheckResult* find(const std::string& name) const;
};

struct VerifyOptions {
  double rel_margin = 0.02;
  double abs_floor = 1e-12;
  double max_principle_tol = 1e-8;
  double div_tol = 1e-10;
  int sobolev_samples = 20;
  uint64_t seed = 12345;
  double theorem_rel_perturbation = 0.05;  // twin uses (1-p)L, (1-p)K
};

// Full battery for one scenario: simulate to t_final, then check the
// maximum principle, discrete incompressibility, the velocity energy
// inequality, every concentration bound against its ledger curve, the
// harmonic-extension lemmas on the polynomial family, the Sobolev suite,
// and the continuous-dependence theorem on a small twin perturbation.
VerificationReport verify_all(const Scenario& sc, const FreeParameters& fp,
                              const VerifyOptions& opt = {});

// ---------------------------------------------------------------------------
// Named scenario suite (unit square, a = b = 1, t_final = 1)

// names: zero | constant-T | convective | reactive | adversarial |
//        ode-reduction
Scenario make_suite_scenario(const std::string& name, int n = 64);
const std::vector<std::string>& suite_scenario_names();  // the five core ones

// Twin on the convective reference scenario with perturbation (l, k):
// coeffs1 = (1, 1), coeffs2 = (1 - l, 1 - k).
TwinSpec make_reference_twin(double l, double k, int n = 64);

}  // namespace thermosol
