#include "thermosol/fast_poisson.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "thermosol/domain.hpp"

namespace thermosol {

namespace {

struct AxisSpec {
  fftw_r2r_kind fwd, inv;
  double scale;                 // fwd then inv multiplies data by this
  std::vector<double> lambda;   // eigenvalues of -d^2/dx^2
};

AxisSpec make_axis(AxisKind kind, int n, double d) {
  AxisSpec a;
  a.lambda.resize(n);
  const double inv_d2 = 1.0 / (d * d);
  switch (kind) {
    case AxisKind::DirichletCell:
      a.fwd = FFTW_RODFT10;
      a.inv = FFTW_RODFT01;
      a.scale = 2.0 * n;
      for (int k = 0; k < n; ++k) {
        double s = std::sin(0.5 * kPi * (k + 1) / n);
        a.lambda[k] = 4.0 * inv_d2 * s * s;
      }
      break;
    case AxisKind::DirichletNode:
      a.fwd = FFTW_RODFT00;
      a.inv = FFTW_RODFT00;
      a.scale = 2.0 * (n + 1);
      for (int k = 0; k < n; ++k) {
        double s = std::sin(0.5 * kPi * (k + 1) / (n + 1));
        a.lambda[k] = 4.0 * inv_d2 * s * s;
      }
      break;
    case AxisKind::NeumannCell:
      a.fwd = FFTW_REDFT10;
      a.inv = FFTW_REDFT01;
      a.scale = 2.0 * n;
      for (int k = 0; k < n; ++k) {
        double s = std::sin(0.5 * kPi * k / n);
        a.lambda[k] = 4.0 * inv_d2 * s * s;
      }
      break;
    default:
      throw SolverError("HelmholtzSolver: unknown axis kind");
  }
  return a;
}

}  // namespace

struct HelmholtzSolver::Impl {
  AxisSpec ax, ay;
  double* buf = nullptr;
  fftw_plan fwd = nullptr, inv = nullptr;
  size_t n = 0;

  ~Impl() {
    if (fwd) fftw_destroy_plan(fwd);
    if (inv) fftw_destroy_plan(inv);
    if (buf) fftw_free(buf);
  }
};

HelmholtzSolver::HelmholtzSolver(int nx, int ny, double dx, double dy,
                                 AxisKind kx, AxisKind ky)
    : impl_(new Impl), nx_(nx), ny_(ny) {
  if (nx < 1 || ny < 1) throw SolverError("HelmholtzSolver: empty grid");
  impl_->ax = make_axis(kx, nx, dx);
  impl_->ay = make_axis(ky, ny, dy);
  impl_->n = static_cast<size_t>(nx) * ny;
  impl_->buf = fftw_alloc_real(impl_->n);
  // FFTW_ESTIMATE keeps planning deterministic (no timing-dependent choices)
  impl_->fwd = fftw_plan_r2r_2d(ny, nx, impl_->buf, impl_->buf,
                                impl_->ay.fwd, impl_->ax.fwd, FFTW_ESTIMATE);
  impl_->inv = fftw_plan_r2r_2d(ny, nx, impl_->buf, impl_->buf,
                                impl_->ay.inv, impl_->ax.inv, FFTW_ESTIMATE);
  if (!impl_->fwd || !impl_->inv) throw SolverError("HelmholtzSolver: fftw plan failed");
}

HelmholtzSolver::~HelmholtzSolver() = default;

void HelmholtzSolver::solve(double sigma, std::vector<double>& f) {
  if (f.size() != impl_->n)
    throw GridMismatchError("HelmholtzSolver::solve: wrong data size");
  std::memcpy(impl_->buf, f.data(), impl_->n * sizeof(double));
  fftw_execute(impl_->fwd);
  const double norm = 1.0 / (impl_->ax.scale * impl_->ay.scale);
  double* b = impl_->buf;
  for (int j = 0; j < ny_; ++j) {
    const double ly = impl_->ay.lambda[j];
    for (int i = 0; i < nx_; ++i) {
      const double denom = sigma + impl_->ax.lambda[i] + ly;
      if (denom > 1e-300)
        b[static_cast<size_t>(j) * nx_ + i] *= norm / denom;
      else
        b[static_cast<size_t>(j) * nx_ + i] = 0.0;  // Neumann nullspace mode
    }
  }
  fftw_execute(impl_->inv);
  std::memcpy(f.data(), impl_->buf, impl_->n * sizeof(double));
}

double HelmholtzSolver::lambda_min() const {
  return impl_->ax.lambda[0] + impl_->ay.lambda[0];
}

double dirichlet_cell_lambda_min(int n, double d) {
  double s = std::sin(0.5 * kPi / n);
  return 4.0 * s * s / (d * d);
}

}  // namespace thermosol
