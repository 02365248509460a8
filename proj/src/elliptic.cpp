#include "thermosol/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "thermosol/fast_poisson.hpp"

namespace thermosol {

namespace {

// folds Dirichlet boundary values into the right-hand side of the
// homogeneous operator: ghost = 2*bv - f adds 2*bv/d^2 at boundary cells
void fold_boundary(ScalarField& rhs, const BoundaryTrace& bv) {
  const Grid2D& g = rhs.grid;
  const double cx = 2.0 / (g.dx * g.dx);
  const double cy = 2.0 / (g.dy * g.dy);
  for (int j = 0; j < g.ny; ++j) {
    rhs.at(0, j) += cx * bv.left(j);
    rhs.at(g.nx - 1, j) += cx * bv.right(j);
  }
  for (int i = 0; i < g.nx; ++i) {
    rhs.at(i, 0) += cy * bv.bottom(i);
    rhs.at(i, g.ny - 1) += cy * bv.top(i);
  }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

}  // namespace

ScalarField apply_dirichlet_laplacian(const ScalarField& f) {
  const Grid2D& g = f.grid;
  ScalarField out(g);
  const double ix2 = 1.0 / (g.dx * g.dx);
  const double iy2 = 1.0 / (g.dy * g.dy);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double c = f.at(i, j);
      double xw = (i > 0) ? (c - f.at(i - 1, j)) : 2.0 * c;
      double xe = (i + 1 < g.nx) ? (c - f.at(i + 1, j)) : 2.0 * c;
      double ys = (j > 0) ? (c - f.at(i, j - 1)) : 2.0 * c;
      double yn = (j + 1 < g.ny) ? (c - f.at(i, j + 1)) : 2.0 * c;
      out.at(i, j) = ix2 * (xw + xe) + iy2 * (ys + yn);
    }
  return out;
}

EllipticSolution solve_poisson_dirichlet(const ScalarField& rhs,
                                         const BoundaryTrace& bv, double tol,
                                         int max_iter) {
  require_same_grid(rhs.grid, bv.grid, "solve_poisson_dirichlet");
  if (!rhs.finite() || !bv.finite())
    throw InvalidFieldError("solve_poisson_dirichlet: non-finite input");
  const Grid2D& g = rhs.grid;
  ScalarField b = rhs;
  fold_boundary(b, bv);

  EllipticSolution sol;
  sol.boundary = bv;
  sol.field = ScalarField(g);
  const double bnorm = norm2(b.data);
  if (bnorm == 0.0) {
    sol.residual_norm = 0.0;
    return sol;
  }

  HelmholtzSolver prec(g.nx, g.ny, g.dx, g.dy, AxisKind::DirichletCell,
                       AxisKind::DirichletCell);
  std::vector<double>& x = sol.field.data;
  std::vector<double> r = b.data;           // r = b - A*0
  std::vector<double> z = r;
  prec.solve(0.0, z);
  std::vector<double> p = z;
  double rz = dot(r, z);
  double rel = 1.0;
  for (int it = 0; it < max_iter; ++it) {
    ScalarField pf(g);
    pf.data = p;
    ScalarField Ap = apply_dirichlet_laplacian(pf);
    const double pAp = dot(p, Ap.data);
    if (pAp <= 0.0) throw SolverError("solve_poisson_dirichlet: operator not SPD");
    const double alpha = rz / pAp;
    for (size_t k = 0; k < x.size(); ++k) {
      x[k] += alpha * p[k];
      r[k] -= alpha * Ap.data[k];
    }
    rel = norm2(r) / bnorm;
    if (rel <= tol) break;
    z = r;
    prec.solve(0.0, z);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (size_t k = 0; k < p.size(); ++k) p[k] = z[k] + beta * p[k];
  }
  if (rel > tol)
    throw SolverError("solve_poisson_dirichlet: no convergence, residual " +
                      std::to_string(rel));
  sol.residual_norm = rel;
  return sol;
}

EllipticSolution torsion_function(const Grid2D& g) {
  ScalarField one(g, 1.0);
  BoundaryTrace zero(g);
  EllipticSolution sol = solve_poisson_dirichlet(one, zero);
  double mn = 0.0;
  for (double v : sol.field.data) mn = std::min(mn, v);
  if (mn < -1e-12)
    throw SolverError("torsion_function: interior positivity violated");
  return sol;
}

BoundaryTrace normal_derivative(const ScalarField& f, const BoundaryTrace& bv) {
  require_same_grid(f.grid, bv.grid, "normal_derivative");
  const Grid2D& g = f.grid;
  BoundaryTrace out(g);
  // quadratic through (0, bv), (h/2, f0), (3h/2, f1); inward slope at 0 is
  // (-8/3 bv + 3 f0 - 1/3 f1)/h, outward normal derivative is its negative
  auto one_sided = [](double b, double f0, double f1, double h) {
    return -((-8.0 / 3.0) * b + 3.0 * f0 - f1 / 3.0) / h;
  };
  for (int i = 0; i < g.nx; ++i) {
    out.values[out.idx_bottom(i)] =
        one_sided(bv.bottom(i), f.at(i, 0), f.at(i, 1), g.dy);
    out.values[out.idx_top(i)] =
        one_sided(bv.top(i), f.at(i, g.ny - 1), f.at(i, g.ny - 2), g.dy);
  }
  for (int j = 0; j < g.ny; ++j) {
    out.values[out.idx_left(j)] =
        one_sided(bv.left(j), f.at(0, j), f.at(1, j), g.dx);
    out.values[out.idx_right(j)] =
        one_sided(bv.right(j), f.at(g.nx - 1, j), f.at(g.nx - 2, j), g.dx);
  }
  return out;
}

double psi1_constant(const EllipticSolution& torsion) {
  BoundaryTrace dn = normal_derivative(torsion.field, torsion.boundary);
  return dn.max_abs();
}

MembraneMode membrane_eigen(const Grid2D& g, double tol, int max_iter) {
  HelmholtzSolver inv(g.nx, g.ny, g.dx, g.dy, AxisKind::DirichletCell,
                      AxisKind::DirichletCell);
  MembraneMode m;
  m.mode = ScalarField(g, 1.0);
  std::vector<double>& x = m.mode.data;
  for (int it = 1; it <= max_iter; ++it) {
    inv.solve(0.0, x);
    double nrm = norm2(x);
    for (double& v : x) v /= nrm;
    ScalarField Ax = apply_dirichlet_laplacian(m.mode);
    const double lambda = dot(x, Ax.data);  // Rayleigh quotient, ||x|| = 1
    double res = 0.0;
    for (size_t k = 0; k < x.size(); ++k) {
      double d = Ax.data[k] - lambda * x[k];
      res += d * d;
    }
    res = std::sqrt(res) / lambda;
    m.lambda = lambda;
    m.residual = res;
    m.iterations = it;
    if (res <= tol) break;
  }
  if (m.residual > tol)
    throw SolverError("membrane_eigen: inverse iteration did not converge");
  // normalize in the continuous l2 sense
  double nrm = std::sqrt(l2_norm_sq(m.mode));
  for (double& v : x) v /= nrm;
  return m;
}

double membrane_eigenvalue(const Grid2D& g) { return membrane_eigen(g).lambda; }

std::vector<BoundaryTrace> harmonic_test_family(const Grid2D& g) {
  std::vector<BoundaryTrace> fam;
  const double cx = 0.5 * g.lx, cy = 0.5 * g.ly;
  for (int k = 1; k <= 10; ++k) {
    fam.push_back(BoundaryTrace::sample(g, [&](double x, double y) {
      std::complex<double> z(x - cx, y - cy), p(1.0, 0.0);
      for (int q = 0; q < k; ++q) p *= z;
      return p.real();
    }));
    fam.push_back(BoundaryTrace::sample(g, [&](double x, double y) {
      std::complex<double> z(x - cx, y - cy), p(1.0, 0.0);
      for (int q = 0; q < k; ++q) p *= z;
      return p.imag();
    }));
  }
  return fam;
}

LemmaCheck check_dirichlet_boundary_control(const BoundaryTrace& Q,
                                            const RellichConstants& rc,
                                            double margin) {
  ScalarField zero(Q.grid);
  EllipticSolution phi = solve_poisson_dirichlet(zero, Q);
  BoundaryTrace dn = normal_derivative(phi.field, Q);
  BoundaryTrace dn2 = transform(dn, [](double v) { return v * v; });
  BoundaryTrace qs = tangential_derivative(Q);
  BoundaryTrace qs2 = transform(qs, [](double v) { return v * v; });
  LemmaCheck c;
  c.lhs = grad_norm_sq(phi.field, Q) + rc.c1 * boundary_integral(dn2);
  c.rhs = rc.c2 * boundary_integral(qs2);
  c.pass = c.lhs <= c.rhs * (1.0 + margin) + 1e-12;
  return c;
}

LemmaCheck check_torsion_boundary_control(const BoundaryTrace& phi_boundary,
                        const EllipticSolution& torsion, double tol) {
  require_same_grid(phi_boundary.grid, torsion.field.grid, "check_torsion_boundary_control");
  ScalarField zero(phi_boundary.grid);
  EllipticSolution phi = solve_poisson_dirichlet(zero, phi_boundary);
  const double psi1 = psi1_constant(torsion);
  BoundaryTrace q2 = transform(phi_boundary, [](double v) { return v * v; });
  LemmaCheck c;
  c.lhs = 2.0 * weighted_grad_norm_sq(torsion.field, 0.0, phi.field,
                                      phi_boundary) +
          l2_norm_sq(phi.field);
  c.rhs = psi1 * boundary_integral(q2);
  c.pass = c.lhs <= c.rhs * (1.0 + tol) + 1e-12;
  return c;
}

RellichConstants rellich_constants(const Grid2D& g) {
  // star-shaped Rellich identity about the centroid:
  //   bdry-int rho u_n^2 = bdry-int rho u_s^2 - 2 bdry-int tau u_s u_n
  // with rho = (x-x0).n >= rho_min, |tau| <= tau_max. AM-GM with
  // eps = rho_min / (2 tau_max) gives
  //   bdry-int u_n^2 <= C_R bdry-int u_s^2,
  //   C_R = 2 rho_max/rho_min + 4 tau_max^2/rho_min^2,
  // and Green + boundary Wirtinger gives
  //   ||grad u||^2 <= (P/2pi) sqrt(C_R) bdry-int u_s^2.
  const double rho_min = 0.5 * std::min(g.lx, g.ly);
  const double rho_max = 0.5 * std::hypot(g.lx, g.ly);
  const double tau_max = 0.5 * std::max(g.lx, g.ly);
  const double CR = 2.0 * rho_max / rho_min +
                    4.0 * tau_max * tau_max / (rho_min * rho_min);
  RellichConstants rc;
  rc.c1 = 1.0;
  rc.c2 = g.perimeter() / (2.0 * kPi) * std::sqrt(CR) + CR;

  const auto family = harmonic_test_family(g);
  for (int bump = 0; bump <= 24; ++bump) {
    bool ok = true;
    for (const auto& Q : family) {
      if (!check_dirichlet_boundary_control(Q, rc).pass) {
        ok = false;
        break;
      }
    }
    if (ok) {
      rc.inflation_doublings = bump;
      return rc;
    }
    rc.c2 *= 2.0;
  }
  throw SolverError("rellich_constants: validation failed on harmonic family");
}

GeometryConstants GeometryConstants::compute(const Grid2D& g) {
  GeometryConstants gc;
  gc.lambda1 = membrane_eigenvalue(g);
  EllipticSolution tors = torsion_function(g);
  gc.psi1 = psi1_constant(tors);
  RellichConstants rc = rellich_constants(g);
  gc.c1 = rc.c1;
  gc.c2 = rc.c2;
  gc.rellich_inflation = rc.inflation_doublings;
  gc.omega_sob = 0.5;
  gc.measure = g.measure();
  gc.perimeter = g.perimeter();
  return gc;
}

}  // namespace thermosol
