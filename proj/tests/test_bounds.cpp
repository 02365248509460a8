// Tests for the a priori constant ledger: every scalar and curve is pinned
// against hand-evaluated closed forms, plus structural checks (branch flags,
// Gronwall recurrences on non-uniform grids, tuner descent and determinism).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "thermosol/bounds.hpp"
#include "thermosol/convection.hpp"
#include "thermosol/domain.hpp"
#include "thermosol/profiles.hpp"

using namespace thermosol;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> uniform_times(double t_final, int n) {
  std::vector<double> t(n + 1);
  for (int k = 0; k <= n; ++k) t[k] = t_final * k / n;
  t.back() = t_final;
  return t;
}

Scenario scenario_32(const char* v0, const char* T0, const char* C0,
                     const char* g, const char* h, const char* f,
                     const ModelParams& base, double t_final) {
  Grid2D grid(32, 32, 1.0, 1.0);
  ModelParams mp = base;
  mp.f = parse_equilibrium(f);
  return Scenario::make(grid, mp, parse_velocity_profile(v0),
                        parse_field_profile(T0, grid),
                        parse_field_profile(C0, grid),
                        parse_boundary_profile(g, grid),
                        parse_boundary_profile(h, grid), t_final);
}

// A hand-picked geometry so curve oracles do not depend on any solver.
GeometryConstants toy_geometry() {
  GeometryConstants geo;
  geo.lambda1 = 20.0;
  geo.psi1 = 0.3;
  geo.c1 = 1.0;
  geo.c2 = 9.0;
  geo.omega_sob = 0.5;
  geo.measure = 1.0;
  geo.perimeter = 4.0;
  return geo;
}

}  // namespace

TEST_CASE("temperature ceiling is the larger of initial and wall suprema") {
  CHECK(compute_Tm(1.0, 0.5) == 1.0);
  CHECK(compute_Tm(0.0, 2.0) == 2.0);
  CHECK(compute_Tm(0.0, 0.0) == 0.0);
}

TEST_CASE("equilibrium data bounds are exact for standard shapes") {
  SUBCASE("identity: slope 1, peak at the ceiling") {
    FDataBounds fb = f_data_bounds(parse_equilibrium("linear:0,1"), 2.0);
    CHECK(fb.d1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fb.d2 == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("constant: zero slope even on a degenerate range") {
    FDataBounds fb = f_data_bounds(parse_equilibrium("linear:0.5,0"), 0.0);
    CHECK(fb.d1 == 0.0);
    CHECK(fb.d2 == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("saturating tanh: slope max at 0, value max at the edge") {
    FDataBounds fb = f_data_bounds(parse_equilibrium("tanh:2"), 1.0);
    CHECK(fb.d1 == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(fb.d2 == doctest::Approx(std::tanh(2.0)).epsilon(1e-12));
  }
  SUBCASE("upward quadratic: both maxima at the right endpoint") {
    FDataBounds fb = f_data_bounds(parse_equilibrium("quadratic:0.1,0.4,0.15"), 2.0);
    CHECK(fb.d2 == doctest::Approx(0.1 + 0.4 * 2.0 + 0.15 * 4.0).epsilon(1e-12));
    CHECK(fb.d1 == doctest::Approx(0.4 + 0.3 * 2.0).epsilon(1e-12));
  }
}

TEST_CASE("forcing and velocity data constants follow their closed forms") {
  CHECK(compute_d4(3.0, 2.0, 0.5) == doctest::Approx(9.0).epsilon(1e-14));
  // d5 = ||v0||^2 + 2 m T_final T_m^2 / lambda1
  double d5 = compute_d5(0.25, 1.0, 1.0, 1.0, 2.0 * kPi * kPi);
  CHECK(d5 == doctest::Approx(0.25 + 1.0 / (kPi * kPi)).epsilon(1e-14));
}

TEST_CASE("concentration growth rate hits the reference value at defaults") {
  // a = b = K = L = 1, no wall concentration: the four surviving terms are
  // -1 + 1/2 + 1/2 + 1/2, scaled by 4.
  FreeParameters fp;
  CHECK(compute_N(1.0, 1.0, 1.0, 1.0, 0.0, 2.0 * kPi * kPi, fp) == 2.0);

  // full formula with every term alive, evaluated by hand:
  // (4/2)(-1 + 2/(2*0.5) + (0.2*3/4)^2 + 0.5*0.5*2 + 1/(2*4)) = 3.295
  FreeParameters fp2;
  fp2.gamma1 = 2.0;
  fp2.omega1 = 0.5;
  fp2.zeta3 = 4.0;
  CHECK(compute_N(2.0, 3.0, 1.0, 0.5, 0.2, 4.0, fp2) ==
        doctest::Approx(3.295).epsilon(1e-14));
}

TEST_CASE("fixed inequality weights are evaluated verbatim") {
  ModelParams mp;
  mp.a = 2.0;
  mp.b = 4.0;
  mp.L = 0.5;
  mp.K = 3.0;
  FixedChoices fc = FixedChoices::from(mp, 0.25, 0.5);
  CHECK(fc.lambda == 0.5);
  CHECK(fc.omega2 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(fc.eps == doctest::Approx(std::pow(4.0, 0.75)).epsilon(1e-14));
  CHECK(fc.alpha_th == doctest::Approx(24.0).epsilon(1e-14));
  CHECK(fc.beta_th == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(fc.gamma_th == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(fc.zeta_th == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(fc.mu == doctest::Approx(0.25).epsilon(1e-14));

  // singular branches become +inf rather than dividing by zero
  CHECK(FixedChoices::from(mp, 0.0, 0.5).alpha_th == kInf);
  CHECK(FixedChoices::from(mp, 0.25, 0.0).omega2 == kInf);
}

TEST_CASE("free parameters validate and round-trip through vectors") {
  FreeParameters fp;
  CHECK_NOTHROW(fp.validate());
  fp.eps2 = 0.0;
  CHECK_THROWS_AS(fp.validate(), ConfigError);
  fp.eps2 = -1.0;
  CHECK_THROWS_AS(fp.validate(), ConfigError);

  FreeParameters src;
  src.gamma1 = 2.0;
  src.gamma2 = 3.0;
  src.zeta3 = 4.0;
  src.omega1 = 5.0;
  src.eps1 = 6.0;
  src.eps2 = 7.0;
  src.delta1 = 8.0;
  FreeParameters dst = FreeParameters::from_vector(src.as_vector());
  CHECK(dst.gamma1 == 2.0);
  CHECK(dst.gamma2 == 3.0);
  CHECK(dst.zeta3 == 4.0);
  CHECK(dst.omega1 == 5.0);
  CHECK(dst.eps1 == 6.0);
  CHECK(dst.eps2 == 7.0);
  CHECK(dst.delta1 == 8.0);
}

TEST_CASE("curve utilities: cumulative trapezoid and running supremum") {
  std::vector<double> t = {0.0, 1.0, 2.0};
  std::vector<double> v = {0.0, 1.0, 2.0};
  std::vector<double> q = cumtrapz(t, v);
  CHECK(q[0] == 0.0);
  CHECK(q[1] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(q[2] == doctest::Approx(2.0).epsilon(1e-14));

  std::vector<double> s = running_sup({1.0, 3.0, 2.0, 5.0, 4.0});
  CHECK(s == std::vector<double>{1.0, 3.0, 3.0, 5.0, 5.0});
}

TEST_CASE("exponential-kernel integral matches closed forms") {
  std::vector<double> t = uniform_times(1.0, 1000);
  std::vector<double> one(t.size(), 1.0);
  std::vector<double> zero(t.size(), 0.0);

  SUBCASE("zero forcing gives zero") {
    for (double q : exp_kernel_integral(t, 2.0, zero)) CHECK(q == 0.0);
  }
  SUBCASE("unit forcing, zero rate: the integral is t, trapezoid-exact") {
    std::vector<double> q = exp_kernel_integral(t, 0.0, one);
    for (size_t k = 0; k < t.size(); ++k)
      CHECK(q[k] == doctest::Approx(t[k]).epsilon(1e-13));
  }
  SUBCASE("unit forcing, rate 2: (e^{2t} - 1)/2") {
    std::vector<double> q = exp_kernel_integral(t, 2.0, one);
    CHECK(std::fabs(q.back() - 0.5 * (std::exp(2.0) - 1.0)) <= 1e-4);
  }
  SUBCASE("decaying kernel: 1 - e^{-t}") {
    std::vector<double> q = exp_kernel_integral(t, -1.0, one);
    CHECK(std::fabs(q.back() - (1.0 - std::exp(-1.0))) <= 1e-4);
  }
  SUBCASE("non-uniform (quadratically clustered) grids stay accurate") {
    std::vector<double> tq(2001);
    for (size_t k = 0; k < tq.size(); ++k) {
      double u = static_cast<double>(k) / 2000.0;
      tq[k] = u * u;
    }
    std::vector<double> oneq(tq.size(), 1.0);
    std::vector<double> q = exp_kernel_integral(tq, 2.0, oneq);
    CHECK(std::fabs(q.back() - 0.5 * (std::exp(2.0) - 1.0)) <= 1e-3);
  }
}

TEST_CASE("concentration energy bounds keep the forcing carry term") {
  SUBCASE("zero forcing gives zero curves") {
    std::vector<double> z = {0.0, 0.0};
    CBoundCurves cb = apriori_C_bounds(2.0, 1.0, z, z);
    CHECK(cb.C_sq == z);
    CHECK(cb.int_gradC_sq == z);
    CHECK(cb.int_C_sq == z);
    CHECK_FALSE(cb.n_nonpositive);
  }
  SUBCASE("reference plug-in: N=2, a=1, pure-kernel forcing") {
    std::vector<double> d6 = {0.0};
    std::vector<double> d8 = {3.1945};
    CBoundCurves cb = apriori_C_bounds(2.0, 1.0, d6, d8);
    CHECK(cb.C_sq[0] == doctest::Approx(6.389).epsilon(1e-12));
    CHECK(cb.int_gradC_sq[0] == doctest::Approx(3.1945).epsilon(1e-12));
    CHECK(cb.int_C_sq[0] == doctest::Approx(3.1945).epsilon(1e-12));
  }
  SUBCASE("nonpositive rate falls back to the pure-forcing branch") {
    std::vector<double> d6 = {2.0};
    std::vector<double> d8 = {7.0};
    CBoundCurves cb = apriori_C_bounds(-3.0, 4.0, d6, d8);
    CHECK(cb.n_nonpositive);
    CHECK(cb.C_sq[0] == doctest::Approx(2.0).epsilon(1e-14));       // 4 d6 / a
    CHECK(cb.int_gradC_sq[0] == doctest::Approx(4.0).epsilon(1e-14));  // 2 d6
    CHECK(cb.int_C_sq[0] == 7.0);
    CHECK(apriori_C_bounds(0.0, 1.0, d6, d8).n_nonpositive);
  }
  SUBCASE("positive rate keeps both contributions") {
    std::vector<double> d6 = {1.0};
    std::vector<double> d8 = {3.0};
    CBoundCurves cb = apriori_C_bounds(2.0, 2.0, d6, d8);
    CHECK(cb.C_sq[0] == doctest::Approx(4.0 / 2.0 + 2.0 * 3.0).epsilon(1e-14));
    CHECK(cb.int_gradC_sq[0] ==
          doctest::Approx(2.0 + 0.5 * 2.0 * 2.0 * 3.0).epsilon(1e-14));
  }
}

TEST_CASE("concentration forcing curve matches a fully hand-built case") {
  // Hand-built data: unit-square metadata, wall trace with circ h^2 = 4 and
  // circ |dh/ds|^2 = 1 held constant, everything else zero.
  ScenarioData sd;
  sd.grid = Grid2D(4, 4, 1.0, 1.0);
  sd.params.a = 1.0;
  sd.params.b = 1.0;
  sd.params.L = 1.0;
  sd.params.K = 1.0;
  sd.t_final = 2.0;
  sd.norm_C0_sq = 1.0;
  sd.times = {0.0, 2.0};
  sd.Qh2 = {4.0, 4.0};
  sd.Qht2 = {0.0, 0.0};
  sd.Qhs2 = {1.0, 1.0};
  sd.Qh6 = {0.0, 0.0};
  sd.Qh2ht2 = {0.0, 0.0};
  sd.Qh3s2 = {0.0, 0.0};
  sd.g_sup = {0.0, 0.0};
  sd.h_sup = {1.0, 1.0};

  GeometryConstants geo = toy_geometry();
  FreeParameters fp;
  const double d4 = 2.0, d5 = 5.0, h_m = 1.0;
  D6Terms d6 = compute_d6(sd, geo, fp, d4, d5, h_m);

  // t = 0: a ||C0||^2 + 1.5 psi1 Qh2 + b^2 h_m^2 d5/(2 lambda1) + L d4
  //       = 1 + 1.8 + 0.125 + 2
  CHECK(d6.curve[0] == doctest::Approx(4.925).epsilon(1e-13));
  // t = 2 adds sqrt(c2/c1 * 8t) ... = sqrt(9*8*2)=12 and the h^2 time
  // integral with weight 0.5 L gamma2 psi1 + 0.5 psi1 K zeta3 = 0.3
  CHECK(d6.curve[1] == doctest::Approx(4.925 + 12.0 + 0.3 * 8.0).epsilon(1e-13));
  CHECK_FALSE(d6.h_zero);
  CHECK(d6.term_vC_substituted == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(d6.term_vC_as_written == doctest::Approx(0.125).epsilon(1e-14));

  // with no wall concentration the as-written coupling term is skipped
  D6Terms quiet = compute_d6(sd, geo, fp, d4, d5, 0.0);
  CHECK(quiet.h_zero);
  CHECK(quiet.term_vC_as_written == 0.0);
  CHECK(quiet.term_vC_substituted == 0.0);
}

TEST_CASE("fourth-power curve reduces to its kernel terms on quiet walls") {
  // With zero wall data, zero C0, and d2 = 0, only two terms survive:
  // d9 = (4/a)(a delta1 / 2 * C_sq + K eps2 / 2 * d8) = 6 d8 at defaults.
  ScenarioData sd;
  sd.grid = Grid2D(4, 4, 1.0, 1.0);
  sd.t_final = 1.0;
  sd.times = {0.0, 1.0};
  sd.Qh2 = sd.Qht2 = sd.Qhs2 = sd.Qh6 = sd.Qh2ht2 = sd.Qh3s2 = {0.0, 0.0};
  sd.g_sup = sd.h_sup = {0.0, 0.0};

  GeometryConstants geo = toy_geometry();
  FreeParameters fp;
  FixedChoices fixed = FixedChoices::from(sd.params, 0.0, 0.0);
  std::vector<double> d6 = {0.0, 0.0};
  std::vector<double> d8 = {0.0, 3.0};
  CBoundCurves cb = apriori_C_bounds(2.0, 1.0, d6, d8);
  std::vector<double> d9 =
      compute_d9(sd, geo, fp, fixed, 0.0, 0.0, 0.0, d8, cb);
  CHECK(d9[0] == 0.0);
  CHECK(d9[1] == doctest::Approx(18.0).epsilon(1e-13));
}

TEST_CASE("velocity energy curve is an affine map of the kernel curve") {
  std::vector<double> d8 = {0.0, 4.0};
  std::vector<double> d10 = compute_d10(7.0, 2.0, d8);
  CHECK(d10[0] == doctest::Approx(7.0).epsilon(1e-14));
  CHECK(d10[1] == doctest::Approx(11.0).epsilon(1e-14));
}

TEST_CASE("gronwall prefactor takes the larger branch") {
  // branch1 = omega b^4 d9 / (8 a^2) + T_m^2/2, branch2 = 4/lambda + L^2 d1^2/(a K)
  CHECK(compute_M(0.5, 1.0, 1.0, 0.0, 0.0, 2.0, 1.0, 1.0, 0.0) ==
        doctest::Approx(2.0).epsilon(1e-14));
  CHECK(compute_M(0.5, 1.0, 1.0, 0.0, 0.0, 2.0 * kPi * kPi, 1.0, 1.0, 0.0) ==
        doctest::Approx(2.0 / (kPi * kPi)).epsilon(1e-14));
  CHECK(compute_M(0.5, 1.0, 1.0, 16.0, 2.0, 4.0, 2.0, 1.0, 1.0) ==
        doctest::Approx(5.0).epsilon(1e-14));  // max(3, 5)
  CHECK(compute_M(0.5, 1.0, 1.0, 16.0, 2.0, 4.0, 2.0, 8.0, 1.0) ==
        doctest::Approx(3.0).epsilon(1e-14));  // max(3, 1.5)
}

TEST_CASE("difference-weight constants and the final bound shape") {
  Alphas al = compute_alphas(1.0, 1.0, 1.0, 1.0, 3.0);
  CHECK(al.alpha1 == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(al.alpha2 == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(compute_alphas(1.0, 1.0, 1.0, 0.0, 0.0).alpha1 == 0.0);
  CHECK(compute_alphas(1.0, 1.0, 1.0, 0.0, 0.0).alpha2 == 0.0);

  CHECK(theorem_bound(5.0, 2.0, 3.0, 0.0, 0.0) == 0.0);
  CHECK(theorem_bound(2.0, 3.0, 5.0, 2.0, 1.0) ==
        doctest::Approx(34.0).epsilon(1e-14));
  // quadratic in the perturbation: doubling l quadruples its share
  double b1 = theorem_bound(1.0, 1.0, 0.0, 1.0, 0.0);
  double b2 = theorem_bound(1.0, 1.0, 0.0, 2.0, 0.0);
  CHECK(b2 == doctest::Approx(4.0 * b1).epsilon(1e-14));
}

TEST_CASE("gronwall kernel integral matches closed forms and flags overflow") {
  std::vector<double> t = uniform_times(1.0, 1000);
  std::vector<double> zero(t.size(), 0.0);
  std::vector<double> one(t.size(), 1.0);
  double overflow = 0.0;

  SUBCASE("no growth: R = t exactly") {
    std::vector<double> R = gronwall_kernel(t, 0.0, zero, 0.5, &overflow);
    for (size_t k = 0; k < t.size(); ++k)
      CHECK(R[k] == doctest::Approx(t[k]).epsilon(1e-13));
    CHECK(overflow == -1.0);
  }
  SUBCASE("pure exponential prefactor: e^t - 1") {
    std::vector<double> R = gronwall_kernel(t, 1.0, zero, 0.5, &overflow);
    CHECK(std::fabs(R.back() - (std::exp(1.0) - 1.0)) <= 1e-4);
    CHECK(overflow == -1.0);
  }
  SUBCASE("unit energy curve with weight 1/2: 2(sqrt(e) - 1)") {
    std::vector<double> R = gronwall_kernel(t, 0.0, one, 0.5, &overflow);
    CHECK(std::fabs(R.back() - 2.0 * (std::exp(0.5) - 1.0)) <= 1e-4);
    CHECK(overflow == -1.0);
  }
  SUBCASE("astronomically stiff prefactors overflow and are reported") {
    std::vector<double> R = gronwall_kernel(t, 1e4, zero, 0.5, &overflow);
    CHECK(overflow >= 0.0);
    CHECK(!std::isfinite(R.back()));
  }
}

TEST_CASE("scenario data sampling captures wall statistics") {
  ModelParams mp;
  Scenario sc = scenario_32("zero", "zero", "constant:0.3", "zero",
                            "constant:0.3", "linear:0,1", mp, 1.0);
  ScenarioData sd = ScenarioData::sample(sc, 10);
  REQUIRE(sd.times.size() == 11);
  CHECK(sd.times.front() == 0.0);
  CHECK(sd.times.back() == 1.0);
  CHECK(sd.norm_C0_sq == doctest::Approx(0.09).epsilon(1e-12));
  CHECK(sd.sup_C0 == doctest::Approx(0.3).epsilon(1e-12));
  for (size_t k = 0; k < sd.times.size(); ++k) {
    CHECK(sd.Qh2[k] == doctest::Approx(0.09 * 4.0).epsilon(1e-12));
    CHECK(sd.Qh6[k] == doctest::Approx(std::pow(0.3, 6.0) * 4.0).epsilon(1e-12));
    CHECK(sd.Qht2[k] == 0.0);
    CHECK(sd.Qhs2[k] == doctest::Approx(0.0).epsilon(1e-20));
    CHECK(sd.h_sup[k] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(sd.g_sup[k] == 0.0);
  }

  SUBCASE("explicit grids must start at zero and ascend") {
    CHECK_THROWS_AS(ScenarioData::sample_at(sc, {0.5, 1.0}), ConfigError);
    CHECK_THROWS_AS(ScenarioData::sample_at(sc, {0.0, 0.4, 0.4, 1.0}),
                    ConfigError);
  }
}

TEST_CASE("full ledger on quiet data is identically zero where it should be") {
  ModelParams mp;
  Scenario sc =
      scenario_32("zero", "zero", "zero", "zero", "zero", "linear:0,1", mp, 1.0);
  ScenarioData sd = ScenarioData::sample(sc, 200);
  GeometryConstants geo = GeometryConstants::compute(sc.grid);
  DataConstants dc = DataConstants::compute(sd, geo, FreeParameters{});

  CHECK(dc.T_m == 0.0);
  CHECK(dc.h_m == 0.0);
  CHECK(dc.d2 == 0.0);
  CHECK(dc.d1 == doctest::Approx(1.0).epsilon(1e-12));  // f' = 1 even at T_m = 0
  CHECK(dc.d4 == 0.0);
  CHECK(dc.d5 == 0.0);
  CHECK(dc.N == 2.0);
  for (double v : dc.d6) CHECK(v == 0.0);
  for (double v : dc.d8) CHECK(v == 0.0);
  for (double v : dc.d9) CHECK(v == 0.0);
  for (double v : dc.bound_C_sq) CHECK(v == 0.0);
  CHECK(dc.M == doctest::Approx(4.0 / geo.lambda1 + 1.0).epsilon(1e-12));
  CHECK(dc.alpha1 == 0.0);
  CHECK(dc.alpha2 == 0.0);
  CHECK(dc.objective() == 0.0);
  CHECK(dc.branches.h_zero);
  CHECK_FALSE(dc.branches.n_nonpositive);
  CHECK(dc.branches.overflow_time == -1.0);
}

TEST_CASE("full ledger reproduces the buoyant reference scenario constants") {
  ModelParams mp;
  mp.grav_T[1] = 1.0;
  mp.grav_C[1] = 1.0;
  Grid2D grid(64, 64, 1.0, 1.0);
  ModelParams m2 = mp;
  m2.f = parse_equilibrium("linear:0,1");
  Scenario sc = Scenario::make(grid, m2, parse_velocity_profile("zero"),
                               parse_field_profile("sine-mode:1,1", grid),
                               parse_field_profile("zero", grid),
                               parse_boundary_profile("zero", grid),
                               parse_boundary_profile("zero", grid), 1.0);
  ScenarioData sd = ScenarioData::sample(sc, 1000);
  GeometryConstants geo = GeometryConstants::compute(grid);
  DataConstants dc = DataConstants::compute(sd, geo, FreeParameters{});

  // the rate lands exactly on 2 (all terms are dyadic rationals)
  CHECK(dc.N == 2.0);
  // T_m is the sampled crest of the initial mode, just below 1
  CHECK(dc.T_m == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(dc.T_m < 1.0);
  CHECK(dc.d1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dc.d2 == doctest::Approx(dc.T_m).epsilon(1e-12));
  // d5 = 2 T_m^2 / lambda1 (quiet start), about 0.1012
  CHECK(dc.d5 == doctest::Approx(2.0 * dc.T_m * dc.T_m / geo.lambda1).epsilon(1e-12));
  // constant forcing d6 = d4 = m d2^2 makes d8 an exact exponential ramp
  double d6v = dc.d6.back();
  CHECK(d6v == doctest::Approx(dc.d4).epsilon(1e-12));
  CHECK(dc.d8.back() ==
        doctest::Approx(d6v * 0.5 * (std::exp(2.0) - 1.0)).epsilon(1e-4));
  // alpha1 = 2 m d2^2 with a = K = 1
  CHECK(dc.alpha1 == doctest::Approx(2.0 * dc.d2 * dc.d2).epsilon(1e-12));
  CHECK(dc.alpha1 == doctest::Approx(2.0).epsilon(2e-3));
  // branch1 = d9_sup/16 + T_m^2/2 wins here; d9 carries the wall-free kernel
  CHECK(dc.M > 2.0);
  CHECK(dc.M < 3.0);
  CHECK(dc.objective() > 0.0);
  CHECK(std::isfinite(dc.objective()));
  CHECK(dc.branches.overflow_time == -1.0);
}

TEST_CASE("kernel curves are stable under time-grid refinement") {
  ModelParams mp;
  Scenario sc = scenario_32("zero", "sine-mode:1,1", "zero", "zero",
                            "boundary-sine:2,0.5,0,0.25", "linear:0,1", mp, 1.0);
  GeometryConstants geo = GeometryConstants::compute(sc.grid);
  DataConstants coarse = DataConstants::compute(
      ScenarioData::sample(sc, 500), geo, FreeParameters{});
  DataConstants fine = DataConstants::compute(
      ScenarioData::sample(sc, 2000), geo, FreeParameters{});
  // the wall ramp kink limits trapezoid accuracy; 1% is the honest budget
  CHECK(std::fabs(coarse.d8.back() - fine.d8.back()) /
            std::fabs(fine.d8.back()) <= 1e-2);
  CHECK(std::fabs(coarse.R.back() - fine.R.back()) / std::fabs(fine.R.back()) <=
        1e-2);
  CHECK(std::fabs(coarse.d9.back() - fine.d9.back()) /
            std::fabs(fine.d9.back()) <= 1e-2);
}

TEST_CASE("tuner returns defaults on a zero objective and always descends") {
  ModelParams mp;
  GeometryConstants geo;

  SUBCASE("quiet scenario: nothing to tune") {
    Scenario sc = scenario_32("zero", "zero", "zero", "zero", "zero",
                              "linear:0,1", mp, 1.0);
    ScenarioData sd = ScenarioData::sample(sc, 100);
    geo = GeometryConstants::compute(sc.grid);
    std::string note;
    FreeParameters fp = tune_free_parameters(sd, geo, 200, &note);
    CHECK(fp.gamma1 == 1.0);
    CHECK(fp.gamma2 == 1.0);
    CHECK(fp.zeta3 == 1.0);
    CHECK(fp.omega1 == 1.0);
    CHECK(fp.eps1 == 1.0);
    CHECK(fp.eps2 == 1.0);
    CHECK(fp.delta1 == 1.0);
    CHECK(note == "objective zero at defaults; nothing to tune");
  }

  SUBCASE("buoyant scenario: strict descent, deterministic") {
    ModelParams mb = mp;
    mb.grav_T[1] = 1.0;
    mb.grav_C[1] = 1.0;
    Scenario sc = scenario_32("zero", "sine-mode:1,1", "zero", "zero", "zero",
                              "linear:0,1", mb, 1.0);
    ScenarioData sd = ScenarioData::sample(sc, 400);
    geo = GeometryConstants::compute(sc.grid);
    double base = DataConstants::compute(sd, geo, FreeParameters{}).objective();
    std::string note;
    FreeParameters fp = tune_free_parameters(sd, geo, 500, &note);
    double tuned = DataConstants::compute(sd, geo, fp).objective();
    CHECK(tuned <= base);
    CHECK(tuned < 0.5 * base);  // observed ~14x improvement
    CHECK(note == "tuned");

    FreeParameters fp2 = tune_free_parameters(sd, geo, 500, nullptr);
    CHECK(fp.as_vector() == fp2.as_vector());
  }

  SUBCASE("tight evaluation budgets never yield a worse objective") {
    ModelParams mb = mp;
    mb.grav_T[1] = 1.0;
    Scenario sc = scenario_32("zero", "sine-mode:1,1", "zero", "zero", "zero",
                              "linear:0,1", mb, 1.0);
    ScenarioData sd = ScenarioData::sample(sc, 100);
    geo = GeometryConstants::compute(sc.grid);
    double base = DataConstants::compute(sd, geo, FreeParameters{}).objective();
    for (int budget : {1, 2, 10}) {
      FreeParameters fp = tune_free_parameters(sd, geo, budget, nullptr);
      CHECK(DataConstants::compute(sd, geo, fp).objective() <= base);
    }
  }
}
