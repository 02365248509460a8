#include "thermosol/convection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "thermosol/fast_poisson.hpp"

namespace thermosol {

void ModelParams::validate() const {
  if (!(a > 0) || !(b > 0) || !(L > 0) || !(K > 0))
    throw ConfigError("ModelParams: a, b, L, K must be positive");
  if (std::hypot(grav_T[0], grav_T[1]) > 1.0 + 1e-12 ||
      std::hypot(grav_C[0], grav_C[1]) > 1.0 + 1e-12)
    throw ConfigError("ModelParams: |grav| must not exceed 1");
  if (!f.value || !f.deriv)
    throw ConfigError("ModelParams: equilibrium function missing");
}

Scenario Scenario::make(const Grid2D& g, const ModelParams& mp,
                        const VelocityProfile& v0p, const FieldProfile& T0p,
                        const FieldProfile& C0p, const BoundaryProfile& gbc,
                        const BoundaryProfile& hbc, double t_final) {
  mp.validate();
  if (!(t_final > 0)) throw ConfigError("Scenario: t_final must be positive");
  Scenario sc;
  sc.grid = g;
  sc.params = mp;
  sc.v0_profile = v0p;
  sc.T0_profile = T0p;
  sc.C0_profile = C0p;
  sc.g_bc = gbc;
  sc.h_bc = hbc;
  sc.t_final = t_final;
  sc.v0 = make_velocity(v0p, g);
  sc.T0 = make_field(T0p, g);
  sc.C0 = make_field(C0p, g);

  double div = max_abs_div(sc.v0);
  if (div > 1e-10)
    throw ConfigError("Scenario: initial velocity not divergence-free (max div " +
                      std::to_string(div) + ")");
  for (int j = 0; j < g.ny; ++j)
    if (sc.v0.U(0, j) != 0.0 || sc.v0.U(g.nx, j) != 0.0)
      throw ConfigError("Scenario: initial velocity violates no-slip");
  for (int i = 0; i < g.nx; ++i)
    if (sc.v0.V(i, 0) != 0.0 || sc.v0.V(i, g.ny) != 0.0)
      throw ConfigError("Scenario: initial velocity violates no-slip");

  // initial data must take the boundary values prescribed at t = 0
  BoundaryTrace g0 = sc.g_trace(0.0), h0 = sc.h_trace(0.0);
  BoundaryTrace T0b = BoundaryTrace::sample(g, T0p.value);
  BoundaryTrace C0b = BoundaryTrace::sample(g, C0p.value);
  for (size_t k = 0; k < g0.size(); ++k) {
    if (std::fabs(T0b.values[k] - g0.values[k]) > 1e-10)
      throw ConfigError("Scenario: T0 trace incompatible with g(0)");
    if (std::fabs(C0b.values[k] - h0.values[k]) > 1e-10)
      throw ConfigError("Scenario: C0 trace incompatible with h(0)");
  }
  return sc;
}

SolutionState SolutionState::initial(const Scenario& sc) {
  SolutionState st;
  st.t = 0.0;
  st.v = sc.v0;
  st.p = ScalarField(sc.grid);
  st.T = sc.T0;
  st.C = sc.C0;
  return st;
}

// ---------------------------------------------------------------------------

struct Stepper::Impl {
  Scenario sc;
  HelmholtzSolver solve_u, solve_v, solve_scalar, solve_press;
  // scratch
  std::vector<double> rhs_u, rhs_v, rhs_s, div;

  explicit Impl(const Scenario& s)
      : sc(s),
        solve_u(s.grid.nx - 1, s.grid.ny, s.grid.dx, s.grid.dy,
                AxisKind::DirichletNode, AxisKind::DirichletCell),
        solve_v(s.grid.nx, s.grid.ny - 1, s.grid.dx, s.grid.dy,
                AxisKind::DirichletCell, AxisKind::DirichletNode),
        solve_scalar(s.grid.nx, s.grid.ny, s.grid.dx, s.grid.dy,
                     AxisKind::DirichletCell, AxisKind::DirichletCell),
        solve_press(s.grid.nx, s.grid.ny, s.grid.dx, s.grid.dy,
                    AxisKind::NeumannCell, AxisKind::NeumannCell) {
    rhs_u.resize(static_cast<size_t>(s.grid.nx - 1) * s.grid.ny);
    rhs_v.resize(static_cast<size_t>(s.grid.nx) * (s.grid.ny - 1));
    rhs_s.resize(static_cast<size_t>(s.grid.nx) * s.grid.ny);
    div.resize(rhs_s.size());
  }
};

Stepper::Stepper(const Scenario& sc) : impl_(new Impl(sc)) {}
Stepper::~Stepper() = default;
const Scenario& Stepper::scenario() const { return impl_->sc; }

double Stepper::cap_diffusive() const {
  const Scenario& sc = impl_->sc;
  const double h = sc.grid.hmin();
  const double diffusivity = std::max(1.0, 1.0 / sc.params.a);
  return 0.25 * h * h / std::max(1.0, diffusivity);
}

double Stepper::cap_advective(const SolutionState& st) const {
  const double vmax = st.v.max_abs();
  if (vmax <= 0.0) return std::numeric_limits<double>::infinity();
  return 0.5 * impl_->sc.grid.hmin() / vmax;
}

double Stepper::suggest_dt(const SolutionState& st) const {
  const Scenario& sc = impl_->sc;
  const Grid2D& g = sc.grid;
  double umax = 0.0, vmax = 0.0;
  for (double x : st.v.u) umax = std::max(umax, std::fabs(x));
  for (double x : st.v.v) vmax = std::max(vmax, std::fabs(x));
  // upwind convexity budget: boundary-adjacent cells see half-cell distances
  // (factor 2), concentration advects at speed scaled by b/a
  const double speed_scale = std::max(1.0, sc.params.b / sc.params.a);
  const double rate = speed_scale * 2.0 * (umax / g.dx + vmax / g.dy);
  double dt = cap_diffusive();
  if (rate > 0.0) dt = std::min(dt, 0.9 / rate);
  dt = std::min(dt, cap_advective(st));
  return dt;
}

namespace {

// first-order upwind v.grad(q) for a cell-centered scalar with Dirichlet
// boundary values at half-cell distance
void upwind_scalar(const Grid2D& g, const VectorField2D& w, const ScalarField& q,
                   const BoundaryTrace& bv, std::vector<double>& out) {
  const double dx = g.dx, dy = g.dy;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double ub = 0.5 * (w.U(i, j) + w.U(i + 1, j));
      const double vb = 0.5 * (w.V(i, j) + w.V(i, j + 1));
      const double c = q.at(i, j);
      double qx;
      if (ub >= 0.0)
        qx = (i > 0) ? (c - q.at(i - 1, j)) / dx : (c - bv.left(j)) / (0.5 * dx);
      else
        qx = (i + 1 < g.nx) ? (q.at(i + 1, j) - c) / dx
                            : (bv.right(j) - c) / (0.5 * dx);
      double qy;
      if (vb >= 0.0)
        qy = (j > 0) ? (c - q.at(i, j - 1)) / dy : (c - bv.bottom(i)) / (0.5 * dy);
      else
        qy = (j + 1 < g.ny) ? (q.at(i, j + 1) - c) / dy
                            : (bv.top(i) - c) / (0.5 * dy);
      out[static_cast<size_t>(j) * g.nx + i] = ub * qx + vb * qy;
    }
}

}  // namespace

void Stepper::advance(SolutionState& st, double dt) {
  Impl& im = *impl_;
  const Scenario& sc = im.sc;
  const Grid2D& g = sc.grid;
  const ModelParams& mp = sc.params;
  const double dx = g.dx, dy = g.dy;
  const int nx = g.nx, ny = g.ny;

  if (!(dt > 0.0)) throw CflError("step: dt must be positive", cap_diffusive());
  const double eps_cap = 1.0 + 1e-12;
  if (dt > cap_diffusive() * eps_cap || dt > cap_advective(st) * eps_cap) {
    double sug = std::min(cap_diffusive(), cap_advective(st));
    throw CflError("step: dt " + std::to_string(dt) +
                       " violates the CFL caps; suggested dt " +
                       std::to_string(sug),
                   sug);
  }
  if (!st.v.finite() || !st.T.finite() || !st.C.finite())
    throw BlowUpError("step: non-finite state", st.t);

  const double t_new = st.t + dt;
  BoundaryTrace g_old = sc.g_trace(st.t), g_new = sc.g_trace(t_new);
  BoundaryTrace h_old = sc.h_trace(st.t), h_new = sc.h_trace(t_new);

  // --- momentum: explicit upwind advection + buoyancy, implicit diffusion
  const VectorField2D& w = st.v;
  auto ghostU = [&](int i, int j) {  // reflect across the walls (u = 0 there)
    if (j < 0) return -w.U(i, 0);
    if (j >= ny) return -w.U(i, ny - 1);
    return w.U(i, j);
  };
  auto ghostV = [&](int i, int j) {
    if (i < 0) return -w.V(0, j);
    if (i >= nx) return -w.V(nx - 1, j);
    return w.V(i, j);
  };

  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i) {
      const double uc = w.U(i, j);
      const double va = 0.25 * (w.V(i - 1, j) + w.V(i, j) + w.V(i - 1, j + 1) +
                                w.V(i, j + 1));
      const double dudx = (uc >= 0.0) ? (uc - w.U(i - 1, j)) / dx
                                      : (w.U(i + 1, j) - uc) / dx;
      const double dudy = (va >= 0.0) ? (uc - ghostU(i, j - 1)) / dy
                                      : (ghostU(i, j + 1) - uc) / dy;
      const double Tf = 0.5 * (st.T.at(i - 1, j) + st.T.at(i, j));
      const double Cf = 0.5 * (st.C.at(i - 1, j) + st.C.at(i, j));
      const double force = mp.grav_T[0] * Tf - mp.grav_C[0] * Cf;
      im.rhs_u[static_cast<size_t>(j) * (nx - 1) + (i - 1)] =
          uc / dt - (uc * dudx + va * dudy) + force;
    }
  im.solve_u.solve(1.0 / dt, im.rhs_u);

  for (int j = 1; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double vc = w.V(i, j);
      const double ua = 0.25 * (w.U(i, j - 1) + w.U(i + 1, j - 1) + w.U(i, j) +
                                w.U(i + 1, j));
      const double dvdx = (ua >= 0.0) ? (vc - ghostV(i - 1, j)) / dx
                                      : (ghostV(i + 1, j) - vc) / dx;
      const double dvdy = (vc >= 0.0) ? (vc - w.V(i, j - 1)) / dy
                                      : (w.V(i, j + 1) - vc) / dy;
      const double Tf = 0.5 * (st.T.at(i, j - 1) + st.T.at(i, j));
      const double Cf = 0.5 * (st.C.at(i, j - 1) + st.C.at(i, j));
      const double force = mp.grav_T[1] * Tf - mp.grav_C[1] * Cf;
      im.rhs_v[static_cast<size_t>(j - 1) * nx + i] =
          vc / dt - (ua * dvdx + vc * dvdy) + force;
    }
  im.solve_v.solve(1.0 / dt, im.rhs_v);

  VectorField2D vstar(g);
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i)
      vstar.U(i, j) = im.rhs_u[static_cast<size_t>(j) * (nx - 1) + (i - 1)];
  for (int j = 1; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      vstar.V(i, j) = im.rhs_v[static_cast<size_t>(j - 1) * nx + i];

  // --- projection onto the discrete divergence-free space
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      im.div[static_cast<size_t>(j) * nx + i] =
          (vstar.U(i + 1, j) - vstar.U(i, j)) / dx +
          (vstar.V(i, j + 1) - vstar.V(i, j)) / dy;
  // (0 - Lap) phi = -div/dt, mean-zero Neumann solve
  for (size_t k = 0; k < im.div.size(); ++k) im.div[k] = -im.div[k] / dt;
  im.solve_press.solve(0.0, im.div);
  ScalarField phi(g);
  phi.data = im.div;
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i)
      vstar.U(i, j) -= dt * (phi.at(i, j) - phi.at(i - 1, j)) / dx;
  for (int j = 1; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      vstar.V(i, j) -= dt * (phi.at(i, j) - phi.at(i, j - 1)) / dy;
  st.p = phi;

  // --- temperature: upwind advection (new velocity), implicit diffusion
  ScalarField Tn = st.T;
  upwind_scalar(g, vstar, Tn, g_old, im.rhs_s);
  {
    ScalarField rhs(g);
    for (size_t k = 0; k < rhs.data.size(); ++k)
      rhs.data[k] = Tn.data[k] / dt - im.rhs_s[k];
    // Dirichlet data at the new time enters through the ghost fold
    const double cx = 2.0 / (dx * dx), cy = 2.0 / (dy * dy);
    for (int j = 0; j < ny; ++j) {
      rhs.at(0, j) += cx * g_new.left(j);
      rhs.at(nx - 1, j) += cx * g_new.right(j);
    }
    for (int i = 0; i < nx; ++i) {
      rhs.at(i, 0) += cy * g_new.bottom(i);
      rhs.at(i, ny - 1) += cy * g_new.top(i);
    }
    im.solve_scalar.solve(1.0 / dt, rhs.data);
    st.T = rhs;
  }

  // --- concentration: b-scaled upwind advection, trapezoidal reaction,
  //     implicit diffusion, explicit L f(T) source at the fresh temperature
  ScalarField Cn = st.C;
  upwind_scalar(g, vstar, Cn, h_old, im.rhs_s);
  {
    const double a = mp.a, b = mp.b, L = mp.L, K = mp.K;
    ScalarField rhs(g);
    for (size_t k = 0; k < rhs.data.size(); ++k)
      rhs.data[k] = (a / dt - 0.5 * K) * Cn.data[k] - b * im.rhs_s[k] +
                    L * mp.f.value(st.T.data[k]);
    const double cx = 2.0 / (dx * dx), cy = 2.0 / (dy * dy);
    for (int j = 0; j < ny; ++j) {
      rhs.at(0, j) += cx * h_new.left(j);
      rhs.at(nx - 1, j) += cx * h_new.right(j);
    }
    for (int i = 0; i < nx; ++i) {
      rhs.at(i, 0) += cy * h_new.bottom(i);
      rhs.at(i, ny - 1) += cy * h_new.top(i);
    }
    // (a/dt + K/2 - Lap) C_new = rhs; divide through by the solver's unit
    // diffusion form: solve ((a/dt + K/2) - Lap) directly
    im.solve_scalar.solve(a / dt + 0.5 * K, rhs.data);
    st.C = rhs;
  }

  st.v = vstar;
  st.t = t_new;

  if (!st.v.finite() || !st.T.finite() || !st.C.finite() || !st.p.finite())
    throw BlowUpError("step: solution lost finiteness", st.t - dt);
}

SolutionState step(const SolutionState& st, const Scenario& sc, double dt) {
  Stepper s(sc);
  SolutionState out = st;
  s.advance(out, dt);
  return out;
}

// ---------------------------------------------------------------------------

Trajectory simulate(const Scenario& sc, const SimulateOptions& opt) {
  Stepper stepper(sc);
  SolutionState st = SolutionState::initial(sc);
  Trajectory traj;

  auto instant_gradC = [&](const SolutionState& s) {
    return grad_norm_sq(s.C, sc.h_trace(s.t));
  };

  double gv = vec_grad_sq(st.v);
  double gC = instant_gradC(st);
  double nC = l2_norm_sq(st.C);
  double acc_gv = 0.0, acc_gC = 0.0, acc_nC = 0.0;

  auto record = [&](const SolutionState& s) {
    traj.t.push_back(s.t);
    traj.norm_v_sq.push_back(vec_l2_sq(s.v));
    traj.int_grad_v_sq.push_back(acc_gv);
    traj.sup_T.push_back(linf_norm(s.T));
    traj.norm_C_sq.push_back(nC);
    traj.norm_C_4.push_back(l4_norm_4(s.C));
    traj.int_grad_C_sq.push_back(acc_gC);
    traj.int_C_sq.push_back(acc_nC);
  };
  record(st);

  const double T = sc.t_final;
  long steps = 0;
  while (st.t < T * (1.0 - 1e-14)) {
    if (++steps > opt.max_steps)
      throw SolverError("simulate: step budget exhausted");
    double dt = std::min(stepper.suggest_dt(st), T - st.t);
    stepper.advance(st, dt);
    traj.max_div = std::max(traj.max_div, max_abs_div(st.v));

    const double gv1 = vec_grad_sq(st.v);
    const double gC1 = instant_gradC(st);
    const double nC1 = l2_norm_sq(st.C);
    acc_gv += 0.5 * dt * (gv + gv1);
    acc_gC += 0.5 * dt * (gC + gC1);
    acc_nC += 0.5 * dt * (nC + nC1);
    gv = gv1;
    gC = gC1;
    nC = nC1;
    record(st);
  }
  return traj;
}

MaxTempCheck max_temp_check(const Trajectory& traj, double T_m, double tol) {
  MaxTempCheck c;
  for (double s : traj.sup_T) c.sup = std::max(c.sup, s);
  c.bound = T_m;
  c.pass = c.sup <= T_m + tol;
  return c;
}

}  // namespace thermosol
