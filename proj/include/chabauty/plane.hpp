#pragma once

// Closed subgroups of R^2 = C: normalisations, reduction to the modular
// fundamental domain D = {|z| >= 1, -1/2 <= Re z <= 1/2} u {inf}, stabilizers
// and the cross-section sigma of the circle action.

#include "chabauty/subgroup.hpp"

#include <complex>

namespace chabauty {

using Complex = std::complex<double>;

/// A unit-systole subgroup written as e^{i theta}(Z + zZ); z = inf stands
/// for a subgroup isomorphic to Z (then it is e^{i theta}Z).
struct ReducedForm {
  double theta = 0;  // in [0, pi)
  Complex z{0, 0};
  bool infinite = false;
};

inline constexpr double kPlaneTol = 1e-9;

/// Unit-covolume rescaling of a unit-systole subgroup; Z-type goes to its line.
ClosedSubgroup normalize_covolume(const ClosedSubgroup& g);

/// (t / systole + 1) g on unit-covolume lattices, t e^{i theta}Z on lines
/// e^{i theta}R (t = 0 keeps the line); t = inf gives {0}.
ClosedSubgroup suspension_map(const ClosedSubgroup& g, double t);

/// Throws NotLattice, NotUnitSystole.
ReducedForm reduce_lattice(const ClosedSubgroup& g);

/// Canonical point of D for the boundary gluings z ~ z - 1 (Re z = 1/2)
/// and z ~ -conj(z) (|z| = 1).
Complex glue(Complex z);

/// Reduced form with the gluings applied; Z-type maps to inf.
ReducedForm base_point(const ClosedSubgroup& g);

/// Order of the stabilizer in SO(2)/{+-1}: 2 (square), 3 (hexagonal) or 1.
int stabilizer_order(const ClosedSubgroup& g);

/// e^{i theta}(Z + zZ), or e^{i theta}Z for the infinite form.
ClosedSubgroup from_reduced(const ReducedForm& f);

/// Rotation angle f(u) of the cross-section.
double cross_section_angle(Complex u);

/// sigma(u) = e^{i f(u)}(Z + uZ); throws SingularBasePoint at i, e^{i pi/3}, e^{2 i pi/3}.
ClosedSubgroup cross_section(Complex u, bool infinite = false);

ClosedSubgroup plane_lattice(Complex a, Complex b);

}  // namespace chabauty
