#pragma once
// Named data generators for scenarios.
//
// Field profiles (initial scalars):
//   "zero" | "constant:c" | "sine-mode:m,n[,amp]"
// Initial velocity profiles:
//   "zero" | "vortex:amp"   (discrete curl of a node stream function,
//                            exactly divergence-free on the MAC grid)
// Boundary profiles (time-dependent Dirichlet data):
//   "zero" | "constant:c" | "sine-mode:m,n[,amp]" | "ramp:t0,t1,c"
//   "boundary-sine:m,amp[,t0,t1]"   amp sin(2 pi m s / P), optional ramp
//   "ode-relax:c0,ceq,rate"         ceq + (c0-ceq) e^{-rate t}
// Reaction equilibrium functions:
//   "linear:c0,c1" | "tanh:s" | "quadratic:c0,c1,c2"
// All boundary profiles expose an analytic time derivative.

#include <functional>
#include <string>

#include "thermosol/domain.hpp"

namespace thermosol {

struct BoundaryPoint {
  double x, y, s, perimeter;
};

struct FieldProfile {
  std::string name;
  std::function<double(double, double)> value;  // (x, y)
};

struct VelocityProfile {
  std::string name;
  // stream function at grid nodes; empty for the zero profile
  std::function<double(double, double)> stream;
};

struct BoundaryProfile {
  std::string name;
  std::function<double(const BoundaryPoint&, double)> value;  // (pt, t)
  std::function<double(const BoundaryPoint&, double)> dvalue_dt;
};

struct EquilibriumFunction {
  std::string name;
  std::function<double(double)> value;
  std::function<double(double)> deriv;
};

FieldProfile parse_field_profile(const std::string& spec, const Grid2D& g);
VelocityProfile parse_velocity_profile(const std::string& spec);
BoundaryProfile parse_boundary_profile(const std::string& spec, const Grid2D& g);
EquilibriumFunction parse_equilibrium(const std::string& spec);

// materializers
ScalarField make_field(const FieldProfile& p, const Grid2D& g);
VectorField2D make_velocity(const VelocityProfile& p, const Grid2D& g);
BoundaryTrace sample_boundary(const BoundaryProfile& p, const Grid2D& g, double t);
BoundaryTrace sample_boundary_dt(const BoundaryProfile& p, const Grid2D& g, double t);

}  // namespace thermosol
