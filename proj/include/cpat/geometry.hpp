#pragma once

// Independent geometric validation of generated maps and circle patterns:
// kite shape, orientation of the elementary quadrilaterals, intersection
// angles, brute-force embeddedness and the radius sign condition. Checks never
// throw on bad geometry; they return a report that locates the worst offender.

#include <map>
#include <string>
#include <vector>

#include "cpat/exec.hpp"
#include "cpat/pattern.hpp"
#include "cpat/real.hpp"

namespace cpat {

struct ValidationReport {
  std::string check;
  bool passed = true;
  double worst = 0.0;
  std::string location;  // always set when passed is false
  std::map<std::string, long> counts;
  std::vector<std::string> notes;
};

/// Sign of the orientation determinant of (a, b, c), exact for the given
/// binary inputs: +1 counterclockwise, -1 clockwise, 0 collinear.
int orientation_sign(const Complex& a, const Complex& b, const Complex& c);

/// Exact sign of the signed area of the quad z1 z2 z3 z4, i.e. of
/// (z3 - z1) x (z4 - z2). Agrees with the corner triangle (z1, z2, z4) on
/// convex quads and stays correct on darts such as the origin kite when γα > π.
int quad_orientation_sign(const Complex& z1, const Complex& z2, const Complex& z3, const Complex& z4);

/// Corner angle of the lens of two intersecting circles with center distance
/// d: cos θ = (d² - R1² - R2²) / (2 R1 R2). NaN when the circles miss.
Real intersection_angle(const Real& d, const Real& R1, const Real& R2);

/// The four quad shapes allowed for cross-ratio e^{-2iα}, in the order
/// kite apex with positive / negative orientation, then kite side vertex
/// with angle α / π-α.
enum class QuadShape { apex_positive, apex_negative, side_alpha, side_pi_minus_alpha, unclassified };

/// Shape of the quad with lower corner (n, m), or nullopt when a vertex is
/// not finite or an edge is degenerate.
std::optional<QuadShape> classify_quad(const GridMap& map, int n, int m, double edge_tol, double angle_tol);

/// Edge spread at every center below tol and every quad one of the four
/// allowed shapes.
ValidationReport check_kites(const GridMap& map, double tol);
inline ValidationReport check_kites(const GridMap& map) { return check_kites(map, map.config().tol.kite); }

/// All elementary quads share one orientation (quad_orientation_sign). Quads
/// with |det| below eps·scale are counted as near_zero and do not decide the
/// outcome.
ValidationReport check_orientation(const GridMap& map);

/// i-neighbours meet at α, 1-neighbours at π-α and half-neighbours touch.
ValidationReport check_angles(const CirclePattern& pattern, double tol);

/// Pairwise test of the open quads with lower corner n+m <= n_cap - 2 for
/// interior overlap: proper edge crossings, and vertices, edge midpoints and
/// interior diagonal midpoints strictly inside the other quad. Exact
/// predicates; serial loop kept as the reference for the parallel one.
ValidationReport check_embedded_bruteforce(const GridMap& map, int n_cap, Exec exec = Exec::parallel);

/// (γ-1)(R_z² - R_{z+1}R_{z-i} + cos α R_z(R_{z-i} - R_{z+1})) >= -band·scale
/// on V_int, with γ taken from the field.
ValidationReport check_sign_condition(const RadiusField& field, double band = 1e-8);

}  // namespace cpat
