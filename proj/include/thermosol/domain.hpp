#pragma once
// Rectangular MAC-staggered discretization primitives: grids, fields,
// boundary traces, and the discrete norms / quadratures used throughout.
//
// Conventions:
//   - scalars (T, C, p) live at cell centers, row-major [j*nx + i]
//   - velocity is staggered: u on vertical faces (nx+1 x ny),
//     v on horizontal faces (nx x ny+1)
//   - boundary traces sample the 2(nx+ny) boundary-face midpoints,
//     ordered counterclockwise starting from the bottom-left face

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace thermosol {

struct InvalidFieldError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct GridMismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CflError : std::runtime_error {
  double suggested_dt;
  CflError(const std::string& msg, double sdt)
      : std::runtime_error(msg), suggested_dt(sdt) {}
};
struct BlowUpError : std::runtime_error {
  double last_valid_time;
  BlowUpError(const std::string& msg, double t)
      : std::runtime_error(msg), last_valid_time(t) {}
};

inline constexpr double kPi = 3.14159265358979323846264338327950288;

struct Grid2D {
  int nx = 0, ny = 0;
  double lx = 0, ly = 0;
  double dx = 0, dy = 0;

  Grid2D() = default;
  Grid2D(int nx_, int ny_, double lx_, double ly_);

  double measure() const { return lx * ly; }
  double perimeter() const { return 2.0 * (lx + ly); }
  double hmin() const { return dx < dy ? dx : dy; }

  // cell-center coordinates
  double xc(int i) const { return (i + 0.5) * dx; }
  double yc(int j) const { return (j + 0.5) * dy; }
  // face/node coordinates
  double xf(int i) const { return i * dx; }
  double yf(int j) const { return j * dy; }

  bool operator==(const Grid2D& o) const {
    return nx == o.nx && ny == o.ny && lx == o.lx && ly == o.ly;
  }
  bool operator!=(const Grid2D& o) const { return !(*this == o); }
};

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* where);

// ---------------------------------------------------------------------------
// Fields

struct ScalarField {
  Grid2D grid;
  std::vector<double> data;  // nx*ny, row-major

  ScalarField() = default;
  explicit ScalarField(const Grid2D& g, double fill = 0.0)
      : grid(g), data(static_cast<size_t>(g.nx) * g.ny, fill) {}

  double& at(int i, int j) { return data[static_cast<size_t>(j) * grid.nx + i]; }
  double at(int i, int j) const { return data[static_cast<size_t>(j) * grid.nx + i]; }

  // samples f(x,y) at cell centers
  static ScalarField sample(const Grid2D& g,
                            const std::function<double(double, double)>& f);
  bool finite() const;
};

struct VectorField2D {
  Grid2D grid;
  std::vector<double> u;  // (nx+1)*ny, [j*(nx+1)+i]
  std::vector<double> v;  // nx*(ny+1), [j*nx+i]

  VectorField2D() = default;
  explicit VectorField2D(const Grid2D& g)
      : grid(g),
        u(static_cast<size_t>(g.nx + 1) * g.ny, 0.0),
        v(static_cast<size_t>(g.nx) * (g.ny + 1), 0.0) {}

  double& U(int i, int j) { return u[static_cast<size_t>(j) * (grid.nx + 1) + i]; }
  double U(int i, int j) const { return u[static_cast<size_t>(j) * (grid.nx + 1) + i]; }
  double& V(int i, int j) { return v[static_cast<size_t>(j) * grid.nx + i]; }
  double V(int i, int j) const { return v[static_cast<size_t>(j) * grid.nx + i]; }

  bool finite() const;
  double max_abs() const;
};

// ---------------------------------------------------------------------------
// Boundary traces
//
// Node k layout (counterclockwise):
//   bottom: k = 0..nx-1          at ((i+1/2)dx, 0)
//   right : k = nx..nx+ny-1      at (lx, (j+1/2)dy)
//   top   : k = nx+ny..2nx+ny-1  at (lx-(i+1/2)dx, ly)
//   left  : k = 2nx+ny..end      at (0, ly-(j+1/2)dy)
// Weight dx on horizontal sides, dy on vertical sides; weights sum to the
// perimeter exactly. Corner points never appear, so quadrature cannot
// double-count them.

struct BoundaryTrace {
  Grid2D grid;
  std::vector<double> values;
  std::vector<double> weights;
  std::vector<double> xs, ys, s;  // node positions and arclength

  BoundaryTrace() = default;
  explicit BoundaryTrace(const Grid2D& g);

  static BoundaryTrace sample(const Grid2D& g,
                              const std::function<double(double, double)>& f);

  size_t size() const { return values.size(); }

  // node index on each side, using the adjacent cell index
  int idx_bottom(int i) const { return i; }
  int idx_right(int j) const { return grid.nx + j; }
  int idx_top(int i) const { return grid.nx + grid.ny + (grid.nx - 1 - i); }
  int idx_left(int j) const { return 2 * grid.nx + grid.ny + (grid.ny - 1 - j); }

  double bottom(int i) const { return values[idx_bottom(i)]; }
  double right(int j) const { return values[idx_right(j)]; }
  double top(int i) const { return values[idx_top(i)]; }
  double left(int j) const { return values[idx_left(j)]; }

  double max_abs() const;
  bool finite() const;
};

// ---------------------------------------------------------------------------
// Norms and quadrature

// sum f^2 dx dy (midpoint rule)
double l2_norm_sq(const ScalarField& f);
// sum f^4 dx dy
double l4_norm_4(const ScalarField& f);
// max |f| over cells
double linf_norm(const ScalarField& f);

// Discrete Dirichlet energy sum |grad f|^2 dx dy: face differences with
// half-cell distance to boundary values. This is exactly the quadratic form
// of the cell-centered 5-point Dirichlet Laplacian, so Rayleigh quotients of
// that operator are reproduced without quadrature mismatch.
double grad_norm_sq(const ScalarField& f, const BoundaryTrace& bv);

// Same but weighted by cell-centered w >= 0 (value on Gamma taken as w_b):
// sum w |grad f|^2 dx dy. Faces use the mean of adjacent w values.
double weighted_grad_norm_sq(const ScalarField& w, double w_boundary,
                             const ScalarField& f, const BoundaryTrace& bv);

// sum over boundary nodes of value * weight
double boundary_integral(const BoundaryTrace& q);

// centered arclength derivative along the closed boundary curve
BoundaryTrace tangential_derivative(const BoundaryTrace& q);

// elementwise transform of a trace
BoundaryTrace transform(const BoundaryTrace& q,
                        const std::function<double(double)>& op);

// MAC vector norms. Both are exactly the quadratic forms of the staggered
// momentum diffusion operators (node-Dirichlet along the component's own
// axis, half-cell Dirichlet across), evaluated with homogeneous wall data.
double vec_l2_sq(const VectorField2D& w);
double vec_grad_sq(const VectorField2D& w);
// l2 of the difference of two fields on the same grid
double vec_diff_l2_sq(const VectorField2D& a, const VectorField2D& b);
double diff_l2_sq(const ScalarField& a, const ScalarField& b);

// max over cells of the discrete MAC divergence
double max_abs_div(const VectorField2D& w);

}  // namespace thermosol
