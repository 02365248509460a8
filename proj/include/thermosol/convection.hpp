#pragma once
// Incompressible double-buoyancy convection with a reacting concentration:
//
//   dv/dt + v.grad v = -grad p + Lap v + gT*T - gC*C,   div v = 0
//   dT/dt + v.grad T = Lap T
//   a dC/dt + b v.grad C = Lap C + L f(T) - K C
//
// on a rectangle with no-slip velocity and Dirichlet T = g(t), C = h(t).
// MAC staggering, fractional step: explicit first-order upwind advection
// (monotone), backward-Euler diffusion, exact discrete projection, reaction
// semi-implicit (trapezoidal in -KC, f evaluated at the known temperature).

#include <memory>
#include <string>
#include <vector>

#include "thermosol/domain.hpp"
#include "thermosol/profiles.hpp"

namespace thermosol {

struct ModelParams {
  double a = 1.0, b = 1.0, L = 1.0, K = 1.0;
  double grav_T[2] = {0.0, 0.0};  // buoyancy coefficient vector on T
  double grav_C[2] = {0.0, 0.0};  // buoyancy coefficient vector on C
  EquilibriumFunction f;

  void validate() const;
};

struct Scenario {
  Grid2D grid;
  ModelParams params;
  VelocityProfile v0_profile;
  FieldProfile T0_profile, C0_profile;
  BoundaryProfile g_bc, h_bc;
  double t_final = 1.0;

  VectorField2D v0;  // materialized at construction
  ScalarField T0, C0;

  // builds fields, checks v0 solenoidality/no-slip and trace compatibility
  static Scenario make(const Grid2D& g, const ModelParams& mp,
                       const VelocityProfile& v0p, const FieldProfile& T0p,
                       const FieldProfile& C0p, const BoundaryProfile& gbc,
                       const BoundaryProfile& hbc, double t_final);

  BoundaryTrace g_trace(double t) const { return sample_boundary(g_bc, grid, t); }
  BoundaryTrace h_trace(double t) const { return sample_boundary(h_bc, grid, t); }
  BoundaryTrace h_dt_trace(double t) const {
    return sample_boundary_dt(h_bc, grid, t);
  }
};

struct SolutionState {
  double t = 0.0;
  VectorField2D v;
  ScalarField p, T, C;

  static SolutionState initial(const Scenario& sc);
};

struct Trajectory {
  std::vector<double> t;
  std::vector<double> norm_v_sq;       // ||v||^2
  std::vector<double> int_grad_v_sq;   // int_0^t ||grad v||^2
  std::vector<double> sup_T;           // ||T||_inf at t
  std::vector<double> norm_C_sq;       // ||C||^2
  std::vector<double> norm_C_4;        // ||C||_4^4
  std::vector<double> int_grad_C_sq;   // int_0^t ||grad C||^2
  std::vector<double> int_C_sq;        // int_0^t ||C||^2
  double max_div = 0.0;                // worst discrete divergence seen

  size_t size() const { return t.size(); }
};

// Time stepper bound to one scenario (owns the transform plans).
class Stepper {
 public:
  explicit Stepper(const Scenario& sc);
  ~Stepper();
  Stepper(const Stepper&) = delete;
  Stepper& operator=(const Stepper&) = delete;

  // spec'd CFL caps; step() rejects dt above either
  double cap_diffusive() const;
  double cap_advective(const SolutionState& st) const;
  // dt actually used by simulate(): also respects the upwind monotonicity
  // budget (b/a speed scaling, half-cell boundary distances)
  double suggest_dt(const SolutionState& st) const;

  void advance(SolutionState& st, double dt);

  const Scenario& scenario() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// single step convenience (plans rebuilt per call; use Stepper in loops)
SolutionState step(const SolutionState& st, const Scenario& sc, double dt);

struct SimulateOptions {
  long max_steps = 50'000'000;
};

Trajectory simulate(const Scenario& sc, const SimulateOptions& opt = {});

struct MaxTempCheck {
  double sup = 0.0, bound = 0.0;
  bool pass = false;
};
MaxTempCheck max_temp_check(const Trajectory& traj, double T_m, double tol = 1e-8);

}  // namespace thermosol
