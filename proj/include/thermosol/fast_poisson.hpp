#pragma once
// Fast diagonalization of (sigma - Laplacian) on uniform tensor grids.
//
// The constant-coefficient 5-point operator separates; each axis is
// diagonalized by the sine/cosine basis matching its boundary treatment:
//   DirichletCell  cell centers, wall at half spacing (DST-II / DST-III)
//   DirichletNode  nodes, zero value on the end nodes themselves (DST-I)
//   NeumannCell    cell centers, zero flux through walls (DCT-II / DCT-III)
// One solve is forward transform + diagonal scaling + inverse transform,
// exact up to roundoff. For pure Neumann with sigma = 0 the constant
// nullspace mode is dropped, giving the mean-zero solution.

#include <memory>
#include <vector>

namespace thermosol {

enum class AxisKind { DirichletCell, DirichletNode, NeumannCell };

class HelmholtzSolver {
 public:
  // n x/y = number of unknowns along each axis, d x/y = grid spacing
  HelmholtzSolver(int nx, int ny, double dx, double dy, AxisKind kx, AxisKind ky);
  ~HelmholtzSolver();
  HelmholtzSolver(const HelmholtzSolver&) = delete;
  HelmholtzSolver& operator=(const HelmholtzSolver&) = delete;

  // solves (sigma - Lap) x = f in place; f is row-major ny x nx
  void solve(double sigma, std::vector<double>& f);

  // smallest operator eigenvalue (of -Lap) for this boundary treatment
  double lambda_min() const;

  int nx() const { return nx_; }
  int ny() const { return ny_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int nx_, ny_;
};

// smallest discrete Dirichlet eigenvalue along one axis: n unknowns,
// spacing d, cell-centered treatment
double dirichlet_cell_lambda_min(int n, double d);

}  // namespace thermosol
