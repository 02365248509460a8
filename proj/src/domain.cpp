#include "thermosol/domain.hpp"

#include <algorithm>
#include <cmath>

namespace thermosol {

Grid2D::Grid2D(int nx_, int ny_, double lx_, double ly_)
    : nx(nx_), ny(ny_), lx(lx_), ly(ly_) {
  if (nx < 4 || ny < 4)
    throw GridMismatchError("Grid2D: need at least 4 cells per direction");
  if (!(lx > 0.0) || !(ly > 0.0))
    throw GridMismatchError("Grid2D: domain lengths must be positive");
  dx = lx / nx;
  dy = ly / ny;
}

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* where) {
  if (a != b)
    throw GridMismatchError(std::string(where) + ": fields on different grids");
}

ScalarField ScalarField::sample(const Grid2D& g,
                                const std::function<double(double, double)>& f) {
  ScalarField out(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) out.at(i, j) = f(g.xc(i), g.yc(j));
  return out;
}

bool ScalarField::finite() const {
  for (double x : data)
    if (!std::isfinite(x)) return false;
  return true;
}

bool VectorField2D::finite() const {
  for (double x : u)
    if (!std::isfinite(x)) return false;
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

double VectorField2D::max_abs() const {
  double m = 0.0;
  for (double x : u) m = std::max(m, std::fabs(x));
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

BoundaryTrace::BoundaryTrace(const Grid2D& g) : grid(g) {
  const int n = 2 * (g.nx + g.ny);
  values.assign(n, 0.0);
  weights.resize(n);
  xs.resize(n);
  ys.resize(n);
  s.resize(n);
  int k = 0;
  double arc = 0.0;
  for (int i = 0; i < g.nx; ++i, ++k) {  // bottom, left to right
    xs[k] = g.xc(i);
    ys[k] = 0.0;
    weights[k] = g.dx;
    s[k] = arc + (i + 0.5) * g.dx;
  }
  arc += g.lx;
  for (int j = 0; j < g.ny; ++j, ++k) {  // right, bottom to top
    xs[k] = g.lx;
    ys[k] = g.yc(j);
    weights[k] = g.dy;
    s[k] = arc + (j + 0.5) * g.dy;
  }
  arc += g.ly;
  for (int i = 0; i < g.nx; ++i, ++k) {  // top, right to left
    xs[k] = g.lx - (i + 0.5) * g.dx;
    ys[k] = g.ly;
    weights[k] = g.dx;
    s[k] = arc + (i + 0.5) * g.dx;
  }
  arc += g.lx;
  for (int j = 0; j < g.ny; ++j, ++k) {  // left, top to bottom
    xs[k] = 0.0;
    ys[k] = g.ly - (j + 0.5) * g.dy;
    weights[k] = g.dy;
    s[k] = arc + (j + 0.5) * g.dy;
  }
}

BoundaryTrace BoundaryTrace::sample(
    const Grid2D& g, const std::function<double(double, double)>& f) {
  BoundaryTrace t(g);
  for (size_t k = 0; k < t.size(); ++k) t.values[k] = f(t.xs[k], t.ys[k]);
  return t;
}

double BoundaryTrace::max_abs() const {
  double m = 0.0;
  for (double x : values) m = std::max(m, std::fabs(x));
  return m;
}

bool BoundaryTrace::finite() const {
  for (double x : values)
    if (!std::isfinite(x)) return false;
  return true;
}

// ---------------------------------------------------------------------------

double l2_norm_sq(const ScalarField& f) {
  if (!f.finite()) throw InvalidFieldError("l2_norm_sq: non-finite field");
  double acc = 0.0;
  for (double x : f.data) acc += x * x;
  return acc * f.grid.dx * f.grid.dy;
}

double l4_norm_4(const ScalarField& f) {
  if (!f.finite()) throw InvalidFieldError("l4_norm_4: non-finite field");
  double acc = 0.0;
  for (double x : f.data) {
    const double x2 = x * x;
    acc += x2 * x2;
  }
  return acc * f.grid.dx * f.grid.dy;
}

double linf_norm(const ScalarField& f) {
  double m = 0.0;
  for (double x : f.data) m = std::max(m, std::fabs(x));
  return m;
}

double grad_norm_sq(const ScalarField& f, const BoundaryTrace& bv) {
  require_same_grid(f.grid, bv.grid, "grad_norm_sq");
  if (!f.finite() || !bv.finite())
    throw InvalidFieldError("grad_norm_sq: non-finite input");
  const Grid2D& g = f.grid;
  const double dx = g.dx, dy = g.dy;
  double acc = 0.0;
  // x-direction faces
  for (int j = 0; j < g.ny; ++j) {
    double dl = (f.at(0, j) - bv.left(j)) / (0.5 * dx);
    acc += dl * dl * 0.5 * dx * dy;
    for (int i = 1; i < g.nx; ++i) {
      double d = (f.at(i, j) - f.at(i - 1, j)) / dx;
      acc += d * d * dx * dy;
    }
    double dr = (bv.right(j) - f.at(g.nx - 1, j)) / (0.5 * dx);
    acc += dr * dr * 0.5 * dx * dy;
  }
  // y-direction faces
  for (int i = 0; i < g.nx; ++i) {
    double db = (f.at(i, 0) - bv.bottom(i)) / (0.5 * dy);
    acc += db * db * dx * 0.5 * dy;
    double dt = (bv.top(i) - f.at(i, g.ny - 1)) / (0.5 * dy);
    acc += dt * dt * dx * 0.5 * dy;
  }
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      double d = (f.at(i, j) - f.at(i, j - 1)) / dy;
      acc += d * d * dx * dy;
    }
  return acc;
}

double weighted_grad_norm_sq(const ScalarField& w, double w_boundary,
                             const ScalarField& f, const BoundaryTrace& bv) {
  require_same_grid(w.grid, f.grid, "weighted_grad_norm_sq");
  require_same_grid(f.grid, bv.grid, "weighted_grad_norm_sq");
  const Grid2D& g = f.grid;
  const double dx = g.dx, dy = g.dy;
  double acc = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    {
      double wf = 0.5 * (w.at(0, j) + w_boundary);
      double d = (f.at(0, j) - bv.left(j)) / (0.5 * dx);
      acc += wf * d * d * 0.5 * dx * dy;
    }
    for (int i = 1; i < g.nx; ++i) {
      double wf = 0.5 * (w.at(i - 1, j) + w.at(i, j));
      double d = (f.at(i, j) - f.at(i - 1, j)) / dx;
      acc += wf * d * d * dx * dy;
    }
    {
      double wf = 0.5 * (w.at(g.nx - 1, j) + w_boundary);
      double d = (bv.right(j) - f.at(g.nx - 1, j)) / (0.5 * dx);
      acc += wf * d * d * 0.5 * dx * dy;
    }
  }
  for (int i = 0; i < g.nx; ++i) {
    {
      double wf = 0.5 * (w.at(i, 0) + w_boundary);
      double d = (f.at(i, 0) - bv.bottom(i)) / (0.5 * dy);
      acc += wf * d * d * dx * 0.5 * dy;
    }
    {
      double wf = 0.5 * (w.at(i, g.ny - 1) + w_boundary);
      double d = (bv.top(i) - f.at(i, g.ny - 1)) / (0.5 * dy);
      acc += wf * d * d * dx * 0.5 * dy;
    }
  }
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      double wf = 0.5 * (w.at(i, j - 1) + w.at(i, j));
      double d = (f.at(i, j) - f.at(i, j - 1)) / dy;
      acc += wf * d * d * dx * dy;
    }
  return acc;
}

double boundary_integral(const BoundaryTrace& q) {
  if (!q.finite()) throw InvalidFieldError("boundary_integral: non-finite trace");
  double acc = 0.0;
  for (size_t k = 0; k < q.size(); ++k) acc += q.values[k] * q.weights[k];
  return acc;
}

BoundaryTrace tangential_derivative(const BoundaryTrace& q) {
  BoundaryTrace out(q.grid);
  const size_t n = q.size();
  const double per = q.grid.perimeter();
  for (size_t k = 0; k < n; ++k) {
    const size_t kp = (k + 1) % n;
    const size_t km = (k + n - 1) % n;
    double ds = q.s[kp] - q.s[km];
    if (ds <= 0.0) ds += per;  // wraparound through the start point
    out.values[k] = (q.values[kp] - q.values[km]) / ds;
  }
  return out;
}

BoundaryTrace transform(const BoundaryTrace& q,
                        const std::function<double(double)>& op) {
  BoundaryTrace out = q;
  for (double& x : out.values) x = op(x);
  return out;
}

// ---------------------------------------------------------------------------
// MAC vector norms

double vec_l2_sq(const VectorField2D& w) {
  if (!w.finite()) throw InvalidFieldError("vec_l2_sq: non-finite field");
  const Grid2D& g = w.grid;
  double acc = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i) acc += w.U(i, j) * w.U(i, j);
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) acc += w.V(i, j) * w.V(i, j);
  return acc * g.dx * g.dy;
}

double vec_grad_sq(const VectorField2D& w) {
  if (!w.finite()) throw InvalidFieldError("vec_grad_sq: non-finite field");
  const Grid2D& g = w.grid;
  const double dx = g.dx, dy = g.dy;
  double acc = 0.0;
  // u-component: node spacing dx along x (u_0 = u_nx = 0 kept explicitly),
  // half-cell Dirichlet walls across y
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      double d = (w.U(i + 1, j) - w.U(i, j)) / dx;
      acc += d * d * dx * dy;
    }
  for (int i = 1; i < g.nx; ++i) {
    double db = w.U(i, 0) / (0.5 * dy);
    acc += db * db * dx * 0.5 * dy;
    double dt = w.U(i, g.ny - 1) / (0.5 * dy);
    acc += dt * dt * dx * 0.5 * dy;
    for (int j = 1; j < g.ny; ++j) {
      double d = (w.U(i, j) - w.U(i, j - 1)) / dy;
      acc += d * d * dx * dy;
    }
  }
  // v-component, mirrored
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      double d = (w.V(i, j + 1) - w.V(i, j)) / dy;
      acc += d * d * dx * dy;
    }
  for (int j = 1; j < g.ny; ++j) {
    double dl = w.V(0, j) / (0.5 * dx);
    acc += dl * dl * 0.5 * dx * dy;
    double dr = w.V(g.nx - 1, j) / (0.5 * dx);
    acc += dr * dr * 0.5 * dx * dy;
    for (int i = 1; i < g.nx; ++i) {
      double d = (w.V(i, j) - w.V(i - 1, j)) / dx;
      acc += d * d * dx * dy;
    }
  }
  return acc;
}

double vec_diff_l2_sq(const VectorField2D& a, const VectorField2D& b) {
  require_same_grid(a.grid, b.grid, "vec_diff_l2_sq");
  const Grid2D& g = a.grid;
  double acc = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 1; i < g.nx; ++i) {
      double d = a.U(i, j) - b.U(i, j);
      acc += d * d;
    }
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      double d = a.V(i, j) - b.V(i, j);
      acc += d * d;
    }
  return acc * g.dx * g.dy;
}

double diff_l2_sq(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid, b.grid, "diff_l2_sq");
  double acc = 0.0;
  for (size_t k = 0; k < a.data.size(); ++k) {
    double d = a.data[k] - b.data[k];
    acc += d * d;
  }
  return acc * a.grid.dx * a.grid.dy;
}

double max_abs_div(const VectorField2D& w) {
  const Grid2D& g = w.grid;
  double m = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      double d = (w.U(i + 1, j) - w.U(i, j)) / g.dx +
                 (w.V(i, j + 1) - w.V(i, j)) / g.dy;
      m = std::max(m, std::fabs(d));
    }
  return m;
}

}  // namespace thermosol
