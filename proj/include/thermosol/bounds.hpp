#pragma once
// The a priori constant ledger: every data-dependent constant in the
// energy-estimate chain for the reacting convection model, evaluated from
// initial/boundary data and domain geometry only (never from a computed
// solution). Curves are sampled on an ascending time grid; the Gronwall
// kernels are accumulated with exact exponential-kernel trapezoid
// recurrences, so arbitrary (non-uniform) grids are fine.
//
// Estimate chain implemented here:
//   T_m   = max(sup|T0|, sup_t sup_G |g|)          temperature ceiling
//   d1,d2 = max |f'|, max |f| on [-T_m, T_m]
//   d4    = T_final * m * d2^2                      >= int ||f||^2
//   d5    = ||v0||^2 + 2 m T_final T_m^2 / lambda1  velocity energy data
//   N, d6 = Gronwall rate and forcing for the concentration energy
//   d8(t) = int_0^t e^{N(t-s)} d6(s) ds
//   bounds: int||C||^2 <= d8,  ||C||^2 <= N d8,  int||grad C||^2 <= N a d8/2
//           (N <= 0: ||C||^2 <= 4 d6/a, int||grad C||^2 <= 2 d6)
//   d9(t) >= ||C||_4^4,   d10 = d5 + (2/lambda1) d8 >= ||v||^2 + int||grad v||^2
//   M, alpha1, alpha2, R(t): the continuous-dependence bound
//   R(t)(alpha1 l^2 + alpha2 k^2) on the squared difference of two runs.

#include <string>
#include <vector>

#include "thermosol/convection.hpp"
#include "thermosol/elliptic.hpp"

namespace thermosol {

// Inequality weights the estimates leave open; any positive values yield
// valid bounds. Defaults are all 1.
struct FreeParameters {
  double gamma1 = 1.0;  // splits the L f-vs-C arithmetic-geometric mean
  double gamma2 = 1.0;  // splits the L f-vs-H mean
  double zeta3 = 1.0;   // splits the K C-vs-H mean
  double omega1 = 1.0;  // splits the C-vs-dH/dt mean
  double eps1 = 1.0;    // splits the L f-vs-I mean (4-norm chain)
  double eps2 = 1.0;    // splits the K C-vs-I mean (4-norm chain)
  double delta1 = 1.0;  // splits the C-vs-I mean (4-norm chain)

  void validate() const;
  std::vector<double> as_vector() const;
  static FreeParameters from_vector(const std::vector<double>& v);
};

// Weights the estimate chain fixes explicitly (evaluated verbatim).
struct FixedChoices {
  double lambda = 0.5;    // C-vs-H weight
  double omega2 = 0.0;    // 1/(b h_m); +inf when h_m = 0
  double eps = 0.0;       // (2K/(3L))^{3/4}, kills the ||C||_4^4 remainder
  double alpha_th = 0.0;  // K1/(L1 d1); +inf when d1 = 0
  double beta_th = 0.0;   // K1/2
  double gamma_th = 0.0;  // K1/2
  double zeta_th = 0.0;   // 2/b
  double mu = 0.0;        // 2a/b^2

  static FixedChoices from(const ModelParams& mp, double d1, double h_m);
};

// ---------------------------------------------------------------------------
// Curve utilities (ascending time grids, first sample defines t[0])

// cumulative trapezoid integral, out[0] = 0
std::vector<double> cumtrapz(const std::vector<double>& t,
                             const std::vector<double>& v);
// q(t) = int_0^t e^{rate (t-s)} v(s) ds by the exact recurrence
// q_{k+1} = e^{rate dt} q_k + (dt/2)(e^{rate dt} v_k + v_{k+1})
std::vector<double> exp_kernel_integral(const std::vector<double>& t,
                                        double rate,
                                        const std::vector<double>& v);
// R(t) = int_0^t exp[M(t-s) + w (D(t)-D(s))] ds with D = cumtrapz(d10);
// overflow_time (if non-null) receives the first time R stops being finite,
// or -1 when it never overflows
std::vector<double> gronwall_kernel(const std::vector<double>& t, double M,
                                    const std::vector<double>& d10, double w,
                                    double* overflow_time);
// running maximum
std::vector<double> running_sup(const std::vector<double>& v);

// ---------------------------------------------------------------------------
// Scenario data reductions: everything the ledger may consume, sampled on a
// time grid. Purely data: initial fields and boundary traces, no solution.

struct ScenarioData {
  Grid2D grid;
  ModelParams params;
  double t_final = 0.0;

  double norm_v0_sq = 0.0;
  double norm_C0_sq = 0.0;
  double sup_C0 = 0.0;
  double sup_T0 = 0.0;

  std::vector<double> times;
  std::vector<double> Qh2;     // circ h^2
  std::vector<double> Qht2;    // circ (dh/dt)^2
  std::vector<double> Qhs2;    // circ |tangential dh/ds|^2
  std::vector<double> Qh6;     // circ h^6
  std::vector<double> Qh2ht2;  // circ (h^2 dh/dt)^2
  std::vector<double> Qh3s2;   // circ |tangential d(h^3)/ds|^2
  std::vector<double> g_sup;   // sup_G |g(t)|
  std::vector<double> h_sup;   // sup_G |h(t)|

  // n_samples uniform intervals on [0, t_final] (n_samples+1 points)
  static ScenarioData sample(const Scenario& sc, int n_samples = 1000);
  // explicit ascending grid; must start at 0 and end at t_final
  static ScenarioData sample_at(const Scenario& sc,
                                const std::vector<double>& times);
};

// ---------------------------------------------------------------------------
// Granular ledger operations

double compute_Tm(double sup_T0, double sup_g);

struct FDataBounds {
  double d1 = 0.0;  // max |f'| on [-T_m, T_m]
  double d2 = 0.0;  // max |f|  on [-T_m, T_m]
};
FDataBounds f_data_bounds(const EquilibriumFunction& f, double T_m);

double compute_d4(double d2, double m, double t_final);
double compute_d5(double norm_v0_sq, double m, double t_final, double T_m,
                  double lambda1);
double compute_N(double a, double b, double K, double L, double h_m,
                 double lambda1, const FreeParameters& fp);

struct D6Terms {
  std::vector<double> curve;       // the full d6(t)
  double term_vC_as_written = 0.0;   // b h_m d5 / (2 omega2 lambda1)
  double term_vC_substituted = 0.0;  // b^2 h_m^2 d5 / (2 lambda1)
  bool h_zero = false;               // omega2 singular; substituted form used
};
D6Terms compute_d6(const ScenarioData& sd, const GeometryConstants& geo,
                   const FreeParameters& fp, double d4, double d5, double h_m);

std::vector<double> compute_d8(const std::vector<double>& t, double N,
                               const std::vector<double>& d6);

// 4 d6/a + max(N,0) d8  >=  ||C(t)||^2
// 2 d6 + max(N,0) a d8 / 2  >=  int_0^t ||grad C||^2
// d8  >=  int_0^t ||C||^2
// The d6 carry term keeps the first two valid for every sign of N; with
// the carry dropped the curves degenerate as N -> 0+ although the solution
// does not (they reduce to the plain N d8 / N a d8 / 2 forms when d6 = 0).
struct CBoundCurves {
  std::vector<double> C_sq;
  std::vector<double> int_gradC_sq;
  std::vector<double> int_C_sq;
  bool n_nonpositive = false;  // N <= 0: the N-term vanished entirely
};
CBoundCurves apriori_C_bounds(double N, double a, const std::vector<double>& d6,
                              const std::vector<double>& d8);

std::vector<double> compute_d9(const ScenarioData& sd,
                               const GeometryConstants& geo,
                               const FreeParameters& fp,
                               const FixedChoices& fixed, double d2, double d5,
                               double h_m, const std::vector<double>& d8,
                               const CBoundCurves& cb);

std::vector<double> compute_d10(double d5, double lambda1,
                                const std::vector<double>& d8);

double compute_M(double omega_sob, double b, double a, double d9_sup,
                 double T_m, double lambda1, double L1, double K1, double d1);

struct Alphas {
  double alpha1 = 0.0;  // (2/(a K1)) m d2^2        multiplies l^2
  double alpha2 = 0.0;  // (2/(a K1)) sup bound(||C||^2)   multiplies k^2
};
Alphas compute_alphas(double a, double K1, double m, double d2,
                      double sup_C_bound);

double theorem_bound(double R_t, double alpha1, double alpha2, double l,
                     double k);

// ---------------------------------------------------------------------------
// Full ledger

struct LedgerBranches {
  bool h_zero = false;
  bool n_nonpositive = false;
  double overflow_time = -1.0;  // first time R(t) overflowed, -1 if never
};

struct DataConstants {
  GeometryConstants geometry;
  FreeParameters fp;
  FixedChoices fixed;

  double T_m = 0.0, h_m = 0.0, m = 0.0;
  double d1 = 0.0, d2 = 0.0, d4 = 0.0, d5 = 0.0;
  double N = 0.0, M = 0.0;
  double alpha1 = 0.0, alpha2 = 0.0;
  double d6_term_vC_as_written = 0.0;
  double d6_term_vC_substituted = 0.0;

  std::vector<double> times;
  std::vector<double> d6, d8, d9, d10, R;
  std::vector<double> bound_C_sq, bound_int_gradC_sq, bound_int_C_sq;

  LedgerBranches branches;

  static DataConstants compute(const ScenarioData& sd,
                               const GeometryConstants& geo,
                               const FreeParameters& fp);

  // R(t_final) * (alpha1 + alpha2), the tuner objective
  double objective() const;
};

// Coordinate descent over log-parameters with multiplicative steps,
// at most max_evals ledger evaluations; never returns parameters whose
// objective exceeds the default objective. diagnostic (optional) receives
// a short status string.
FreeParameters tune_free_parameters(const ScenarioData& sd,
                                    const GeometryConstants& geo,
                                    int max_evals = 500,
                                    std::string* diagnostic = nullptr);

}  // namespace thermosol
