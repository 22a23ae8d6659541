#pragma once

#include <map>
#include <string>
#include <utility>

#include "ccfour/centrality.hpp"
#include "ccfour/geometry.hpp"

namespace ccfour {

enum class Family {
    Tetrahedron,
    EquilateralCentered,
    KiteConvex,
    KiteConcave,
    Rhombus,
    IsoscelesTrapezium,
};

const char* to_string(Family family);

struct FamilyShape {
    Family kind = Family::Tetrahedron;
    double alpha = 0.0;  // radians
    double beta = 0.0;
    double scale = 1.0;  // q_12
    std::map<std::string, double> mass_ratios;
};

struct FamilySolution {
    Configuration config;
    Masses masses;
    FamilyShape shape;
};

// ---- spatial and centered families ----

FamilySolution build_tetrahedron(const Masses& masses, double edge);

/// Bodies 1-3 (mass m) at the vertices of an equilateral triangle of side
/// `side`, body 4 (mass m4) at the centroid.
FamilySolution build_equilateral_centered(double m, double m4, double side, double G = 1.0);

// ---- kites ----
// alpha is the base angle of triangle 123 at body 2 (between q_12 and q_23);
// beta the base angle of triangle 243 (between q_24 and q_23). Both < pi/2.

bool kite_convex_region(double alpha, double beta);
bool kite_concave_region(double alpha, double beta);  // alpha > beta branch

/// {m1/m2, m4/m2}; domain error outside the admissible region.
std::pair<double, double> kite_convex_mass_ratios(double alpha, double beta);
std::pair<double, double> kite_concave_mass_ratios(double alpha, double beta);

/// Planar coordinates realizing the kite sine-theorem relations; `kind` one
/// of KiteConvex, KiteConcave, Rhombus.
Configuration kite_coordinates(Family kind, double alpha, double beta, double scale);

FamilySolution build_kite_convex(double alpha, double beta, double scale = 1.0, double G = 1.0);
/// Accepts either branch: beta > alpha is handled by relabeling bodies 1 and
/// 4 and swapping the angles.
FamilySolution build_kite_concave(double alpha, double beta, double scale = 1.0, double G = 1.0);

// ---- rhombus (kite with alpha == beta) ----

/// T(alpha) = m1/m2, strictly decreasing on (pi/6, pi/3).
double rhombus_ratio(double alpha);
/// Inverse of T by bisection; unique by monotonicity.
double rhombus_angle(double ratio);
FamilySolution build_rhombus(double alpha, double scale = 1.0, double G = 1.0);

// ---- isosceles trapezium ----
// alpha is the base angle at the long base (angle 214 = angle 341), beta the
// angle between diagonal and long base (angle 213 = angle 342).

bool trapezium_region(double alpha, double beta);

/// Solves the mass-independent angle relation for beta inside the admissible
/// interval. Throws "root not bracketed" when no sign change exists. When
/// `bracket_count` is given it receives the number of sign changes seen on a
/// scan of the interval (uniqueness check).
double trapezium_beta(double alpha, int* bracket_count = nullptr);

/// m2/m1 (short-base mass over long-base mass). Pointwise formula; off the
/// solution curve the resulting configuration is not central.
double trapezium_mass_ratio(double alpha, double beta);

Configuration trapezium_coordinates(double alpha, double beta, double scale);

FamilySolution build_trapezium(double alpha, double beta, double scale = 1.0, double G = 1.0);
/// Solves beta internally.
FamilySolution build_trapezium_auto(double alpha, double scale = 1.0, double G = 1.0);

/// Finds (alpha, beta) with trapezium_mass_ratio == ratio on the solution
/// curve. ratio must lie in (0, 1]; ratio == 1 is the square limit point
/// alpha = pi/2, beta = pi/4.
std::pair<double, double> trapezium_invert(double ratio);

// ---- parallelogram property check ----

struct ParallelogramNote {
    bool parallelogram = false;
    bool central = false;
    bool rhombus = false;
    std::string note;
};

/// Property-test helper: a parallelogram that passes the oracle must be a
/// rhombus.
ParallelogramNote parallelogram_check(const Configuration& config, const Masses& masses,
                                      double oracle_tol = default_oracle_tol,
                                      double len_tol = 1e-8);

// Raw angle->ratio formulas without region validation; used to verify that
// the ratios turn nonpositive or singular outside the region boundaries.
namespace detail {
double kite_convex_m1_over_m2(double alpha, double beta);
double kite_convex_m4_over_m2(double alpha, double beta);
double kite_concave_m1_over_m2(double alpha, double beta);
double kite_concave_m4_over_m2(double alpha, double beta);
double rhombus_ratio_raw(double alpha);
double trapezium_angle_residual(double alpha, double beta);  // lhs - rhs of the angle relation
}  // namespace detail

}  // namespace ccfour
