#include "thermosol/profiles.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <vector>

namespace thermosol {

namespace {

struct SpecParts {
  std::string head;
  std::vector<double> args;
};

SpecParts split_spec(const std::string& spec) {
  SpecParts p;
  auto colon = spec.find(':');
  p.head = spec.substr(0, colon);
  if (colon != std::string::npos) {
    std::string rest = spec.substr(colon + 1);
    std::stringstream ss(rest);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.empty()) throw ConfigError("profile '" + spec + "': empty argument");
      char* end = nullptr;
      double v = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0')
        throw ConfigError("profile '" + spec + "': bad number '" + tok + "'");
      p.args.push_back(v);
    }
  }
  return p;
}

void need_args(const SpecParts& p, size_t lo, size_t hi, const std::string& spec) {
  if (p.args.size() < lo || p.args.size() > hi)
    throw ConfigError("profile '" + spec + "': wrong argument count");
}

double ramp01(double t, double t0, double t1) {
  if (t <= t0) return 0.0;
  if (t >= t1) return 1.0;
  return (t - t0) / (t1 - t0);
}

double ramp01_dt(double t, double t0, double t1) {
  if (t <= t0 || t >= t1) return 0.0;
  return 1.0 / (t1 - t0);
}

}  // namespace

FieldProfile parse_field_profile(const std::string& spec, const Grid2D& g) {
  SpecParts p = split_spec(spec);
  FieldProfile fp;
  fp.name = spec;
  if (p.head == "zero") {
    need_args(p, 0, 0, spec);
    fp.value = [](double, double) { return 0.0; };
  } else if (p.head == "constant") {
    need_args(p, 1, 1, spec);
    double c = p.args[0];
    fp.value = [c](double, double) { return c; };
  } else if (p.head == "sine-mode") {
    need_args(p, 2, 3, spec);
    double m = p.args[0], n = p.args[1];
    double amp = p.args.size() > 2 ? p.args[2] : 1.0;
    double lx = g.lx, ly = g.ly;
    fp.value = [=](double x, double y) {
      return amp * std::sin(m * kPi * x / lx) * std::sin(n * kPi * y / ly);
    };
  } else {
    throw ConfigError("unknown field profile '" + spec + "'");
  }
  return fp;
}

VelocityProfile parse_velocity_profile(const std::string& spec) {
  SpecParts p = split_spec(spec);
  VelocityProfile vp;
  vp.name = spec;
  if (p.head == "zero") {
    need_args(p, 0, 0, spec);
  } else if (p.head == "vortex") {
    need_args(p, 1, 1, spec);
    double amp = p.args[0];
    vp.stream = [amp](double xn, double yn) {
      // xn, yn normalized to [0,1] by the materializer
      double sx = std::sin(kPi * xn), sy = std::sin(kPi * yn);
      return amp * sx * sx * sy * sy;
    };
  } else {
    throw ConfigError("unknown velocity profile '" + spec + "'");
  }
  return vp;
}

BoundaryProfile parse_boundary_profile(const std::string& spec, const Grid2D& g) {
  SpecParts p = split_spec(spec);
  BoundaryProfile bp;
  bp.name = spec;
  auto zero_dt = [](const BoundaryPoint&, double) { return 0.0; };
  if (p.head == "zero") {
    need_args(p, 0, 0, spec);
    bp.value = [](const BoundaryPoint&, double) { return 0.0; };
    bp.dvalue_dt = zero_dt;
  } else if (p.head == "constant") {
    need_args(p, 1, 1, spec);
    double c = p.args[0];
    bp.value = [c](const BoundaryPoint&, double) { return c; };
    bp.dvalue_dt = zero_dt;
  } else if (p.head == "sine-mode") {
    need_args(p, 2, 3, spec);
    double m = p.args[0], n = p.args[1];
    double amp = p.args.size() > 2 ? p.args[2] : 1.0;
    double lx = g.lx, ly = g.ly;
    bp.value = [=](const BoundaryPoint& q, double) {
      return amp * std::sin(m * kPi * q.x / lx) * std::sin(n * kPi * q.y / ly);
    };
    bp.dvalue_dt = zero_dt;
  } else if (p.head == "ramp") {
    need_args(p, 3, 3, spec);
    double t0 = p.args[0], t1 = p.args[1], c = p.args[2];
    if (!(t1 > t0)) throw ConfigError("profile '" + spec + "': need t1 > t0");
    bp.value = [=](const BoundaryPoint&, double t) { return c * ramp01(t, t0, t1); };
    bp.dvalue_dt = [=](const BoundaryPoint&, double t) {
      return c * ramp01_dt(t, t0, t1);
    };
  } else if (p.head == "boundary-sine") {
    need_args(p, 2, 4, spec);
    double m = p.args[0], amp = p.args[1];
    bool ramped = p.args.size() == 4;
    double t0 = ramped ? p.args[2] : 0.0, t1 = ramped ? p.args[3] : 1.0;
    if (ramped && !(t1 > t0))
      throw ConfigError("profile '" + spec + "': need t1 > t0");
    bp.value = [=](const BoundaryPoint& q, double t) {
      double shape = amp * std::sin(2.0 * kPi * m * q.s / q.perimeter);
      return ramped ? shape * ramp01(t, t0, t1) : shape;
    };
    bp.dvalue_dt = [=](const BoundaryPoint& q, double t) {
      if (!ramped) return 0.0;
      double shape = amp * std::sin(2.0 * kPi * m * q.s / q.perimeter);
      return shape * ramp01_dt(t, t0, t1);
    };
  } else if (p.head == "ode-relax") {
    need_args(p, 3, 3, spec);
    double c0 = p.args[0], ceq = p.args[1], rate = p.args[2];
    bp.value = [=](const BoundaryPoint&, double t) {
      return ceq + (c0 - ceq) * std::exp(-rate * t);
    };
    bp.dvalue_dt = [=](const BoundaryPoint&, double t) {
      return -rate * (c0 - ceq) * std::exp(-rate * t);
    };
  } else {
    throw ConfigError("unknown boundary profile '" + spec + "'");
  }
  return bp;
}

EquilibriumFunction parse_equilibrium(const std::string& spec) {
  SpecParts p = split_spec(spec);
  EquilibriumFunction f;
  f.name = spec;
  if (p.head == "linear") {
    need_args(p, 2, 2, spec);
    double c0 = p.args[0], c1 = p.args[1];
    f.value = [=](double T) { return c0 + c1 * T; };
    f.deriv = [=](double) { return c1; };
  } else if (p.head == "tanh") {
    need_args(p, 1, 1, spec);
    double s = p.args[0];
    f.value = [=](double T) { return std::tanh(s * T); };
    f.deriv = [=](double T) {
      double th = std::tanh(s * T);
      return s * (1.0 - th * th);
    };
  } else if (p.head == "quadratic") {
    need_args(p, 3, 3, spec);
    double c0 = p.args[0], c1 = p.args[1], c2 = p.args[2];
    f.value = [=](double T) { return c0 + c1 * T + c2 * T * T; };
    f.deriv = [=](double T) { return c1 + 2.0 * c2 * T; };
  } else {
    throw ConfigError("unknown equilibrium function '" + spec + "'");
  }
  return f;
}

ScalarField make_field(const FieldProfile& p, const Grid2D& g) {
  return ScalarField::sample(g, p.value);
}

VectorField2D make_velocity(const VelocityProfile& p, const Grid2D& g) {
  VectorField2D w(g);
  if (!p.stream) return w;
  // stream function on nodes; discrete curl is exactly divergence-free
  std::vector<double> psi(static_cast<size_t>(g.nx + 1) * (g.ny + 1));
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i)
      psi[static_cast<size_t>(j) * (g.nx + 1) + i] =
          p.stream(g.xf(i) / g.lx, g.yf(j) / g.ly);
  // streams that vanish on the boundary up to round-off are snapped to an
  // exact zero ring so the no-slip faces come out exactly zero
  double interior_max = 0.0, ring_max = 0.0;
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i) {
      const double v = std::fabs(psi[static_cast<size_t>(j) * (g.nx + 1) + i]);
      if (i == 0 || i == g.nx || j == 0 || j == g.ny)
        ring_max = std::max(ring_max, v);
      else
        interior_max = std::max(interior_max, v);
    }
  if (ring_max <= 1e-10 * interior_max)
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i)
        if (i == 0 || i == g.nx || j == 0 || j == g.ny)
          psi[static_cast<size_t>(j) * (g.nx + 1) + i] = 0.0;
  auto P = [&](int i, int j) {
    return psi[static_cast<size_t>(j) * (g.nx + 1) + i];
  };
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i) w.U(i, j) = (P(i, j + 1) - P(i, j)) / g.dy;
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) w.V(i, j) = -(P(i + 1, j) - P(i, j)) / g.dx;
  return w;
}

BoundaryTrace sample_boundary(const BoundaryProfile& p, const Grid2D& g, double t) {
  BoundaryTrace tr(g);
  const double per = g.perimeter();
  for (size_t k = 0; k < tr.size(); ++k) {
    BoundaryPoint q{tr.xs[k], tr.ys[k], tr.s[k], per};
    tr.values[k] = p.value(q, t);
  }
  return tr;
}

BoundaryTrace sample_boundary_dt(const BoundaryProfile& p, const Grid2D& g,
                                 double t) {
  BoundaryTrace tr(g);
  const double per = g.perimeter();
  for (size_t k = 0; k < tr.size(); ++k) {
    BoundaryPoint q{tr.xs[k], tr.ys[k], tr.s[k], per};
    tr.values[k] = p.dvalue_dt(q, t);
  }
  return tr;
}

}  // namespace thermosol
