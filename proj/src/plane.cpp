#include "chabauty/plane.hpp"

#include "chabauty/invariants.hpp"

#include <cmath>
#include <numbers>

namespace chabauty {

namespace {

constexpr double kPi = std::numbers::pi;

Complex as_complex(const Vec& v) { return {v(0), v(1)}; }
Vec as_vec(Complex z) { return Vec{{z.real(), z.imag()}}; }

void require_plane(const ClosedSubgroup& g) {
  if (g.ambient_dim() != 2) throw Error(ErrorCode::WrongAmbientDim, "expected a subgroup of R^2");
}

void require_unit_systole(const ClosedSubgroup& g) {
  require_plane(g);
  const double s = systole(g);
  if (!(std::abs(s - 1) <= kPlaneTol)) throw Error(ErrorCode::NotUnitSystole, "systole is not 1");
}

double angle_mod_pi(double a) {
  double r = std::fmod(a, kPi);
  if (r < 0) r += kPi;
  if (r >= kPi) r -= kPi;
  return r;
}

bool in_group(const Vec& x, const ClosedSubgroup& g) { return distance_to_subgroup(x, g) < 1e-6; }

}  // namespace

ClosedSubgroup plane_lattice(Complex a, Complex b) {
  Mat m(2, 2);
  m << a.real(), b.real(), a.imag(), b.imag();
  return make_subgroup(2, Mat(2, 0), m);
}

ClosedSubgroup normalize_covolume(const ClosedSubgroup& g) {
  require_unit_systole(g);
  if (g.type() == GroupType{0, 1}) return scale(g, 0.0);
  return scale(g, 1.0 / std::sqrt(*covolume(g)));
}

ClosedSubgroup suspension_map(const ClosedSubgroup& g, double t) {
  require_plane(g);
  if (!(t >= 0)) throw Error(ErrorCode::OutOfRange, "suspension parameter must lie in [0, inf]");
  const GroupType type = g.type();
  if (type == GroupType{1, 0}) {
    if (std::isinf(t)) return make_subgroup(2, Mat(2, 0), Mat(2, 0));
    if (t == 0) return g;
    return make_subgroup(2, Mat(2, 0), Mat(t * g.continuous_basis()));
  }
  if (type == GroupType{0, 2} && std::abs(*covolume(g) - 1) <= kPlaneTol) {
    if (std::isinf(t)) return make_subgroup(2, Mat(2, 0), Mat(2, 0));
    return scale(g, t / systole(g) + 1);
  }
  throw Error(ErrorCode::NotInC1, "expected a unit-covolume lattice or a line");
}

Complex glue(Complex z) {
  const Complex corner = std::polar(1.0, kPi / 3);
  if (std::abs(std::abs(z) - 1) <= kPlaneTol && std::abs(std::abs(z.real()) - 0.5) <= kPlaneTol) return corner;
  if (z.real() >= 0.5 - kPlaneTol) z -= 1.0;
  if (std::abs(std::abs(z) - 1) <= kPlaneTol && z.real() < 0) z = -std::conj(z);
  return z;
}

ReducedForm reduce_lattice(const ClosedSubgroup& g) {
  require_plane(g);
  if (g.type() != GroupType{0, 2}) throw Error(ErrorCode::NotLattice, "expected a lattice");
  require_unit_systole(g);
  Complex b1 = as_complex(g.discrete_basis().col(0));
  Complex b2 = as_complex(g.discrete_basis().col(1));
  // Gauss reduction.
  for (int guard = 0; guard < 1000; ++guard) {
    if (std::norm(b2) < std::norm(b1)) std::swap(b1, b2);
    const double mu = (b1.real() * b2.real() + b1.imag() * b2.imag()) / std::norm(b1);
    const double m = std::round(mu);
    if (m == 0) break;
    b2 -= m * b1;
  }
  const double a = std::arg(b1);
  if (a < 0 || a >= kPi) b1 = -b1;
  ReducedForm f;
  f.theta = angle_mod_pi(std::arg(b1));
  Complex z = b2 / b1;
  if (z.imag() < 0) z = -z;
  z -= std::floor(z.real() + 0.5);
  if (std::abs(std::abs(z) - 1) <= kPlaneTol && z.real() < 0) {
    // The second generator is also shortest; take it as the first one.
    f.theta = angle_mod_pi(f.theta + std::arg(z));
    z = -std::conj(z);
  }
  if (std::abs(z - std::polar(1.0, 2 * kPi / 3)) <= kPlaneTol) z = std::polar(1.0, kPi / 3);
  f.z = z;
  return f;
}

ReducedForm base_point(const ClosedSubgroup& g) {
  require_unit_systole(g);
  if (g.type() == GroupType{0, 1}) {
    ReducedForm f;
    f.infinite = true;
    f.theta = angle_mod_pi(std::arg(as_complex(g.discrete_basis().col(0))));
    return f;
  }
  ReducedForm f = reduce_lattice(g);
  f.z = glue(f.z);
  return f;
}

ClosedSubgroup from_reduced(const ReducedForm& f) {
  const Complex rot = std::polar(1.0, f.theta);
  if (f.infinite) return make_subgroup(2, Mat(2, 0), Mat(as_vec(rot)));
  return plane_lattice(rot, rot * f.z);
}

int stabilizer_order(const ClosedSubgroup& g) {
  require_unit_systole(g);
  if (g.type() != GroupType{0, 2}) return 1;
  auto invariant = [&](double angle) {
    const Complex r = std::polar(1.0, angle);
    for (int j = 0; j < 2; ++j)
      if (!in_group(as_vec(r * as_complex(g.discrete_basis().col(j))), g)) return false;
    return true;
  };
  if (invariant(kPi / 2)) return 2;
  if (invariant(kPi / 3)) return 3;
  return 1;
}

double cross_section_angle(Complex u) {
  // Collar around the arc e^{i(pi/2 + s)}, 0 < s < pi/6, of width 0.1 sin(6s):
  // f decreases linearly from pi/2 - s on the arc to 0 at the collar edge.
  const double s = std::arg(u) - kPi / 2;
  if (!(s > 0 && s < kPi / 6)) return 0.0;
  const double rho = std::abs(u) - 1;
  const double width = 0.1 * std::sin(6 * s);
  return (kPi / 2 - s) * std::max(0.0, 1 - std::max(0.0, rho) / width);
}

ClosedSubgroup cross_section(Complex u, bool infinite) {
  if (infinite) return make_subgroup(2, Mat(2, 0), Mat(Vec{{1.0, 0.0}}));
  for (Complex s : {Complex{0, 1}, std::polar(1.0, kPi / 3), std::polar(1.0, 2 * kPi / 3)})
    if (std::abs(u - s) <= kPlaneTol) throw Error(ErrorCode::SingularBasePoint, "singular point of the base");
  const Complex rot = std::polar(1.0, cross_section_angle(u));
  return plane_lattice(rot, rot * u);
}

}  // namespace chabauty
