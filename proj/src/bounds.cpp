#include "thermosol/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace thermosol {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void FreeParameters::validate() const {
  const double vals[] = {gamma1, gamma2, zeta3, omega1, eps1, eps2, delta1};
  for (double v : vals)
    if (!(v > 0.0) || !std::isfinite(v))
      throw ConfigError("FreeParameters: all weights must be positive finite");
}

std::vector<double> FreeParameters::as_vector() const {
  return {gamma1, gamma2, zeta3, omega1, eps1, eps2, delta1};
}

FreeParameters FreeParameters::from_vector(const std::vector<double>& v) {
  FreeParameters fp;
  fp.gamma1 = v[0];
  fp.gamma2 = v[1];
  fp.zeta3 = v[2];
  fp.omega1 = v[3];
  fp.eps1 = v[4];
  fp.eps2 = v[5];
  fp.delta1 = v[6];
  return fp;
}

FixedChoices FixedChoices::from(const ModelParams& mp, double d1, double h_m) {
  FixedChoices fc;
  fc.lambda = 0.5;
  fc.omega2 = (h_m > 0.0) ? 1.0 / (mp.b * h_m) : kInf;
  fc.eps = std::pow(2.0 * mp.K / (3.0 * mp.L), 0.75);
  fc.alpha_th = (d1 > 0.0) ? mp.K / (mp.L * d1) : kInf;
  fc.beta_th = 0.5 * mp.K;
  fc.gamma_th = 0.5 * mp.K;
  fc.zeta_th = 2.0 / mp.b;
  fc.mu = 2.0 * mp.a / (mp.b * mp.b);
  return fc;
}

// ---------------------------------------------------------------------------
// Curve utilities

std::vector<double> cumtrapz(const std::vector<double>& t,
                             const std::vector<double>& v) {
  std::vector<double> out(t.size(), 0.0);
  for (size_t k = 1; k < t.size(); ++k)
    out[k] = out[k - 1] + 0.5 * (t[k] - t[k - 1]) * (v[k] + v[k - 1]);
  return out;
}

std::vector<double> exp_kernel_integral(const std::vector<double>& t,
                                        double rate,
                                        const std::vector<double>& v) {
  std::vector<double> out(t.size(), 0.0);
  for (size_t k = 1; k < t.size(); ++k) {
    const double dt = t[k] - t[k - 1];
    const double e = std::exp(rate * dt);
    out[k] = e * out[k - 1] + 0.5 * dt * (e * v[k - 1] + v[k]);
  }
  return out;
}

std::vector<double> gronwall_kernel(const std::vector<double>& t, double M,
                                    const std::vector<double>& d10, double w,
                                    double* overflow_time) {
  if (overflow_time) *overflow_time = -1.0;
  std::vector<double> out(t.size(), 0.0);
  bool overflowed = false;
  for (size_t k = 1; k < t.size(); ++k) {
    const double dt = t[k] - t[k - 1];
    const double dD = 0.5 * dt * (d10[k] + d10[k - 1]);
    const double e = std::exp(M * dt + w * dD);
    out[k] = e * out[k - 1] + 0.5 * dt * (e + 1.0);
    if (!overflowed && !std::isfinite(out[k])) {
      overflowed = true;
      if (overflow_time) *overflow_time = t[k];
      out[k] = kInf;
    } else if (overflowed) {
      out[k] = kInf;
    }
  }
  return out;
}

std::vector<double> running_sup(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  double m = -kInf;
  for (size_t k = 0; k < v.size(); ++k) {
    m = std::max(m, v[k]);
    out[k] = m;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Scenario data reductions

ScenarioData ScenarioData::sample(const Scenario& sc, int n_samples) {
  if (n_samples < 2) throw ConfigError("ScenarioData: need >= 2 intervals");
  std::vector<double> ts(static_cast<size_t>(n_samples) + 1);
  for (int k = 0; k <= n_samples; ++k)
    ts[k] = sc.t_final * static_cast<double>(k) / n_samples;
  ts.back() = sc.t_final;
  return sample_at(sc, ts);
}

ScenarioData ScenarioData::sample_at(const Scenario& sc,
                                     const std::vector<double>& times) {
  if (times.size() < 2 || times.front() != 0.0)
    throw ConfigError("ScenarioData: time grid must start at 0");
  for (size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1]))
      throw ConfigError("ScenarioData: time grid must be ascending");

  ScenarioData sd;
  sd.grid = sc.grid;
  sd.params = sc.params;
  sd.t_final = sc.t_final;
  sd.norm_v0_sq = vec_l2_sq(sc.v0);
  sd.norm_C0_sq = l2_norm_sq(sc.C0);
  sd.sup_C0 = linf_norm(sc.C0);
  sd.sup_T0 = linf_norm(sc.T0);
  sd.times = times;

  const size_t n = times.size();
  sd.Qh2.resize(n);
  sd.Qht2.resize(n);
  sd.Qhs2.resize(n);
  sd.Qh6.resize(n);
  sd.Qh2ht2.resize(n);
  sd.Qh3s2.resize(n);
  sd.g_sup.resize(n);
  sd.h_sup.resize(n);

  for (size_t k = 0; k < n; ++k) {
    const double t = times[k];
    BoundaryTrace h = sc.h_trace(t);
    BoundaryTrace ht = sc.h_dt_trace(t);
    BoundaryTrace hs = tangential_derivative(h);
    BoundaryTrace h3 = transform(h, [](double x) { return x * x * x; });
    BoundaryTrace h3s = tangential_derivative(h3);

    double q2 = 0, qt2 = 0, qs2 = 0, q6 = 0, q2t2 = 0, q3s2 = 0;
    for (size_t i = 0; i < h.size(); ++i) {
      const double w = h.weights[i];
      const double hv = h.values[i], htv = ht.values[i];
      const double h2 = hv * hv;
      q2 += h2 * w;
      qt2 += htv * htv * w;
      qs2 += hs.values[i] * hs.values[i] * w;
      q6 += h2 * h2 * h2 * w;
      q2t2 += (h2 * htv) * (h2 * htv) * w;
      q3s2 += h3s.values[i] * h3s.values[i] * w;
    }
    sd.Qh2[k] = q2;
    sd.Qht2[k] = qt2;
    sd.Qhs2[k] = qs2;
    sd.Qh6[k] = q6;
    sd.Qh2ht2[k] = q2t2;
    sd.Qh3s2[k] = q3s2;
    sd.g_sup[k] = sc.g_trace(t).max_abs();
    sd.h_sup[k] = h.max_abs();
  }
  return sd;
}

// ---------------------------------------------------------------------------
// Granular operations

double compute_Tm(double sup_T0, double sup_g) {
  return std::max(sup_T0, sup_g);
}

FDataBounds f_data_bounds(const EquilibriumFunction& f, double T_m) {
  FDataBounds out;
  if (!f.value || !f.deriv)
    throw ConfigError("f_data_bounds: equilibrium function missing");

  // dense scan of [-T_m, T_m], then two rounds of local ternary refinement
  // around each argmax
  const int n = 10000;
  const double lo = -T_m, hi = T_m;
  double arg1 = 0.0, arg2 = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = (T_m == 0.0) ? 0.0 : lo + (hi - lo) * i / n;
    const double fv = std::fabs(f.value(x));
    const double dv = std::fabs(f.deriv(x));
    if (!std::isfinite(fv) || !std::isfinite(dv))
      throw InvalidFieldError("f_data_bounds: non-finite f on the T range");
    if (dv > out.d1) {
      out.d1 = dv;
      arg1 = x;
    }
    if (fv > out.d2) {
      out.d2 = fv;
      arg2 = x;
    }
    if (T_m == 0.0) break;
  }
  auto refine = [&](const std::function<double(double)>& fn, double x0,
                    double current) {
    double a = std::max(lo, x0 - (hi - lo) / n);
    double b = std::min(hi, x0 + (hi - lo) / n);
    for (int round = 0; round < 2; ++round) {
      const int m = 64;
      double best = current, bx = x0;
      for (int i = 0; i <= m; ++i) {
        const double x = a + (b - a) * i / m;
        const double v = std::fabs(fn(x));
        if (v > best) {
          best = v;
          bx = x;
        }
      }
      current = best;
      const double span = (b - a) / m;
      a = std::max(lo, bx - span);
      b = std::min(hi, bx + span);
    }
    return current;
  };
  if (T_m > 0.0) {
    out.d1 = refine(f.deriv, arg1, out.d1);
    out.d2 = refine(f.value, arg2, out.d2);
  }
  return out;
}

double compute_d4(double d2, double m, double t_final) {
  return t_final * m * d2 * d2;
}

double compute_d5(double norm_v0_sq, double m, double t_final, double T_m,
                  double lambda1) {
  return norm_v0_sq + 2.0 * m * t_final * T_m * T_m / lambda1;
}

double compute_N(double a, double b, double K, double L, double h_m,
                 double lambda1, const FreeParameters& fp) {
  const double hb = h_m * b / lambda1;
  return (4.0 / a) * (-K + a / (2.0 * fp.omega1) + hb * hb +
                      0.5 * L * fp.gamma1 + K / (2.0 * fp.zeta3));
}

D6Terms compute_d6(const ScenarioData& sd, const GeometryConstants& geo,
                   const FreeParameters& fp, double d4, double d5,
                   double h_m) {
  const ModelParams& mp = sd.params;
  const double a = mp.a, b = mp.b, L = mp.L, K = mp.K;
  const double psi1 = geo.psi1, lambda1 = geo.lambda1;

  D6Terms out;
  out.h_zero = (h_m == 0.0);
  out.term_vC_substituted = b * b * h_m * h_m * d5 / (2.0 * lambda1);
  out.term_vC_as_written =
      out.h_zero ? 0.0 : b * h_m * d5 * (b * h_m) / 2.0 / lambda1;

  const double term_C0 = a * sd.norm_C0_sq;
  const double term_f = 0.5 * L * d4 * (1.0 / fp.gamma1 + 1.0 / fp.gamma2);
  const double coef_h2int = 0.5 * L * fp.gamma2 * psi1 + 0.5 * psi1 * K * fp.zeta3;
  const double coef_ht = 0.5 * fp.omega1 * a * psi1;
  const double c_ratio = geo.c2 / geo.c1;

  std::vector<double> int_Qh2 = cumtrapz(sd.times, sd.Qh2);
  std::vector<double> int_Qht2 = cumtrapz(sd.times, sd.Qht2);
  std::vector<double> int_Qhs2 = cumtrapz(sd.times, sd.Qhs2);

  out.curve.resize(sd.times.size());
  for (size_t k = 0; k < sd.times.size(); ++k) {
    out.curve[k] = term_C0 + 1.5 * psi1 * sd.Qh2[k] + out.term_vC_substituted +
                   term_f + coef_ht * int_Qht2[k] +
                   std::sqrt(c_ratio * int_Qh2[k] * int_Qhs2[k]) +
                   coef_h2int * int_Qh2[k];
  }
  return out;
}

std::vector<double> compute_d8(const std::vector<double>& t, double N,
                               const std::vector<double>& d6) {
  return exp_kernel_integral(t, N, d6);
}

CBoundCurves apriori_C_bounds(double N, double a, const std::vector<double>& d6,
                              const std::vector<double>& d8) {
  // Both bounds come from the pre-Gronwall inequality
  //   (a/4) ||C||^2 + (1/2) int ||grad C||^2 <= d6 + (N a/4) int ||C||^2
  // with int ||C||^2 <= d8. Keeping the d6 carry term makes the curves
  // valid for every N (the pure N*d8 form collapses as N -> 0+ while the
  // solution does not); at N <= 0 the N-term is dropped entirely and the
  // fallback branch is recorded.
  CBoundCurves out;
  out.int_C_sq = d8;
  const size_t n = d8.size();
  out.C_sq.resize(n);
  out.int_gradC_sq.resize(n);
  const double Np = std::max(N, 0.0);
  out.n_nonpositive = (N <= 0.0);
  for (size_t k = 0; k < n; ++k) {
    out.C_sq[k] = 4.0 * d6[k] / a + Np * d8[k];
    out.int_gradC_sq[k] = 2.0 * d6[k] + 0.5 * Np * a * d8[k];
  }
  return out;
}

std::vector<double> compute_d9(const ScenarioData& sd,
                               const GeometryConstants& geo,
                               const FreeParameters& fp,
                               const FixedChoices& fixed, double d2, double d5,
                               double h_m, const std::vector<double>& d8,
                               const CBoundCurves& cb) {
  const ModelParams& mp = sd.params;
  const double a = mp.a, b = mp.b, L = mp.L, K = mp.K;
  const double psi1 = geo.psi1, lambda1 = geo.lambda1;
  const double m = sd.grid.measure();
  const double eps4 = std::pow(fixed.eps, 4.0);

  // time integral of sqrt(Qh2 * Qh3s2) and of Qh6
  std::vector<double> mixed(sd.times.size());
  for (size_t k = 0; k < mixed.size(); ++k)
    mixed[k] = std::sqrt(sd.Qh2[k] * sd.Qh3s2[k]);
  std::vector<double> int_mixed = cumtrapz(sd.times, mixed);
  std::vector<double> int_Qh6 = cumtrapz(sd.times, sd.Qh6);

  // running sup of sqrt(circ (h^2 h_t)^2)
  std::vector<double> rootq(sd.times.size());
  for (size_t k = 0; k < rootq.size(); ++k) rootq[k] = std::sqrt(sd.Qh2ht2[k]);
  std::vector<double> sup_rootq = running_sup(rootq);

  const double term_C0 = 0.75 * a * sd.norm_C0_sq;
  const double coef_I = (0.5 * a / fp.delta1 + 0.5 * a) * psi1;
  const double coef_f4 = 0.25 * L / eps4 * m * std::pow(d2, 4.0);
  const double coef_f2 = 0.5 * L / fp.eps1 * m * d2 * d2;
  const double coef_h6int = (0.5 * fp.eps1 * L + 0.5 * K / fp.eps2) * psi1;
  const double c_root = std::sqrt(geo.c2 / geo.c1);

  std::vector<double> out(sd.times.size());
  for (size_t k = 0; k < out.size(); ++k) {
    const double t = sd.times[k];
    double quarter_a_d9 =
        term_C0 + 0.5 * a * fp.delta1 * cb.C_sq[k] + coef_I * sd.Qh6[k] +
        std::sqrt(psi1) * sup_rootq[k] * std::sqrt(t * d8[k]) +
        c_root * int_mixed[k] + coef_f4 * t + coef_f2 * t +
        coef_h6int * int_Qh6[k] + 0.5 * K * fp.eps2 * d8[k] +
        std::pow(h_m, 3.0) * b * std::sqrt(cb.int_gradC_sq[k]) *
            std::sqrt(d5 / lambda1 + 2.0 / (lambda1 * lambda1) * d8[k]);
    out[k] = 4.0 / a * quarter_a_d9;
  }
  return out;
}

std::vector<double> compute_d10(double d5, double lambda1,
                                const std::vector<double>& d8) {
  std::vector<double> out(d8.size());
  for (size_t k = 0; k < d8.size(); ++k) out[k] = d5 + 2.0 / lambda1 * d8[k];
  return out;
}

double compute_M(double omega_sob, double b, double a, double d9_sup,
                 double T_m, double lambda1, double L1, double K1, double d1) {
  const double branch1 =
      omega_sob * std::pow(b, 4.0) * d9_sup / (8.0 * a * a) + 0.5 * T_m * T_m;
  const double branch2 = 4.0 / lambda1 + L1 * L1 * d1 * d1 / (a * K1);
  return std::max(branch1, branch2);
}

Alphas compute_alphas(double a, double K1, double m, double d2,
                      double sup_C_bound) {
  Alphas out;
  out.alpha1 = 2.0 / (a * K1) * m * d2 * d2;
  out.alpha2 = 2.0 / (a * K1) * sup_C_bound;
  return out;
}

double theorem_bound(double R_t, double alpha1, double alpha2, double l,
                     double k) {
  return R_t * (alpha1 * l * l + alpha2 * k * k);
}

// ---------------------------------------------------------------------------
// Full ledger

DataConstants DataConstants::compute(const ScenarioData& sd,
                                     const GeometryConstants& geo,
                                     const FreeParameters& fp) {
  fp.validate();
  DataConstants dc;
  dc.geometry = geo;
  dc.fp = fp;
  dc.times = sd.times;

  const ModelParams& mp = sd.params;
  dc.m = sd.grid.measure();
  double sup_g = 0.0, sup_h = 0.0;
  for (double v : sd.g_sup) sup_g = std::max(sup_g, v);
  for (double v : sd.h_sup) sup_h = std::max(sup_h, v);
  dc.T_m = compute_Tm(sd.sup_T0, sup_g);
  dc.h_m = sup_h;

  FDataBounds fb = f_data_bounds(mp.f, dc.T_m);
  dc.d1 = fb.d1;
  dc.d2 = fb.d2;
  dc.fixed = FixedChoices::from(mp, dc.d1, dc.h_m);

  dc.d4 = compute_d4(dc.d2, dc.m, sd.t_final);
  dc.d5 = compute_d5(sd.norm_v0_sq, dc.m, sd.t_final, dc.T_m, geo.lambda1);
  dc.N = compute_N(mp.a, mp.b, mp.K, mp.L, dc.h_m, geo.lambda1, fp);

  D6Terms d6t = compute_d6(sd, geo, fp, dc.d4, dc.d5, dc.h_m);
  dc.d6 = std::move(d6t.curve);
  dc.d6_term_vC_as_written = d6t.term_vC_as_written;
  dc.d6_term_vC_substituted = d6t.term_vC_substituted;
  dc.branches.h_zero = d6t.h_zero;

  dc.d8 = compute_d8(dc.times, dc.N, dc.d6);
  CBoundCurves cb = apriori_C_bounds(dc.N, mp.a, dc.d6, dc.d8);
  dc.bound_C_sq = cb.C_sq;
  dc.bound_int_gradC_sq = cb.int_gradC_sq;
  dc.bound_int_C_sq = cb.int_C_sq;
  dc.branches.n_nonpositive = cb.n_nonpositive;

  dc.d9 = compute_d9(sd, geo, fp, dc.fixed, dc.d2, dc.d5, dc.h_m, dc.d8, cb);
  dc.d10 = compute_d10(dc.d5, geo.lambda1, dc.d8);

  double d9_sup = 0.0, C_bound_sup = 0.0;
  for (double v : dc.d9) d9_sup = std::max(d9_sup, v);
  for (double v : dc.bound_C_sq) C_bound_sup = std::max(C_bound_sup, v);

  dc.M = compute_M(geo.omega_sob, mp.b, mp.a, d9_sup, dc.T_m, geo.lambda1,
                   mp.L, mp.K, dc.d1);
  Alphas al = compute_alphas(mp.a, mp.K, dc.m, dc.d2, C_bound_sup);
  dc.alpha1 = al.alpha1;
  dc.alpha2 = al.alpha2;

  dc.R = gronwall_kernel(dc.times, dc.M, dc.d10, geo.omega_sob,
                         &dc.branches.overflow_time);
  return dc;
}

double DataConstants::objective() const {
  return R.back() * (alpha1 + alpha2);
}

// ---------------------------------------------------------------------------
// Tuner

FreeParameters tune_free_parameters(const ScenarioData& sd,
                                    const GeometryConstants& geo,
                                    int max_evals, std::string* diagnostic) {
  FreeParameters best;
  int evals = 0;
  auto eval = [&](const FreeParameters& fp) -> double {
    ++evals;
    double obj = DataConstants::compute(sd, geo, fp).objective();
    return std::isfinite(obj) ? obj : kInf;
  };

  double best_obj = eval(best);
  if (best_obj == 0.0) {
    if (diagnostic) *diagnostic = "objective zero at defaults; nothing to tune";
    return best;
  }
  bool any_finite = std::isfinite(best_obj);

  std::vector<double> x = best.as_vector();
  double factor = 2.0;
  while (factor >= 1.05 && evals < max_evals) {
    bool improved = false;
    for (size_t i = 0; i < x.size() && evals + 2 <= max_evals; ++i) {
      for (double mult : {factor, 1.0 / factor}) {
        std::vector<double> trial = x;
        trial[i] *= mult;
        const double obj = eval(FreeParameters::from_vector(trial));
        if (std::isfinite(obj)) any_finite = true;
        if (obj < best_obj) {
          best_obj = obj;
          x = trial;
          improved = true;
        }
      }
    }
    if (!improved) factor = std::sqrt(factor);
  }

  if (!any_finite) {
    if (diagnostic)
      *diagnostic = "objective non-finite at every probed point; defaults kept";
    return FreeParameters{};
  }
  if (diagnostic) *diagnostic = "tuned";
  return FreeParameters::from_vector(x);
}

}  // namespace thermosol
