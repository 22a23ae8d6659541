#pragma once

#include <string>
#include <vector>

#include "ccfour/geometry.hpp"

namespace ccfour {

// Default decision thresholds. Overridable from the CLI.
inline constexpr double default_residual_tol = 1e-9;   // normalized pair-space residual
inline constexpr double default_oracle_tol = 1e-7;     // acceleration-oracle deviation
inline constexpr double default_central_tol = 1e-8;    // LambdaFit::central default
inline constexpr double default_classify_tol = 1e-8;

struct ResidualEntry {
    std::string label;
    double raw = 0.0;         // signed for planar configurations
    double normalized = 0.0;  // raw / sum of |individual terms|
    bool degenerate = false;  // term-sum denominator vanished; raw reported as-is
};

struct ResidualReport {
    std::vector<ResidualEntry> entries;
    bool collinear_vacuous = false;  // all cross products vanish; condition holds vacuously
    double max_normalized() const;
};

/// F_ijk = G M (q_ij/q_ij^3 + q_jk/q_jk^3 + q_ki/q_ki^3).
Vec3 newtonian_F(const Configuration& config, const Masses& masses, int i, int j, int k);

/// (1/mu_ij) J_ij = sum_{k != i,j} (m_k/M) F_ijk; antisymmetric in (i,j).
Vec3 J_over_mu(const Configuration& config, const Masses& masses, int i, int j);

/// Per pair (i<j): sum_{k != i,j} m_k (q_ij x q_jk)(1/q_ik^3 - 1/q_jk^3).
/// Characterizes centrality only for non-collinear configurations; the
/// collinear case sets collinear_vacuous.
ResidualReport cc_residuals_general(const Configuration& config, const Masses& masses);

/// Signed lhs - rhs of the six four-body equations (labels "4cc:a".."4cc:f").
/// Planar cross products are reduced to their components along the plane
/// normal.
ResidualReport cc_residuals_four(const Configuration& config, const Masses& masses);

/// Mass-independent relations in p_ij = q_ij^-3 (labels "dziobek:a".."dziobek:d").
ResidualReport dziobek_residuals(const DistanceSet& d);

/// Least-squares fit of a_i = -lambda (r_i - R); the acceleration-based
/// oracle every closed-form result is checked against.
struct LambdaFit {
    double lambda = 0.0;  // 1/time^2
    double max_relative_deviation = 0.0;
    std::vector<double> per_body_deviation;
    bool central(double tol = default_central_tol) const { return max_relative_deviation < tol; }
};

LambdaFit lambda_fit(const Configuration& config, const Masses& masses);

/// Raw Newtonian accelerations a_i = sum_j G m_j (r_j - r_i)/|r_j - r_i|^3.
std::vector<Vec3> newtonian_accelerations(const std::vector<Vec3>& positions, const Masses& masses);

/// Pair angular momenta L_ij = q_ij x mu_ij qdot_ij and their total.
struct PairMomenta {
    int n = 0;
    std::vector<Vec3> per_pair;  // indexed by pair_index
    Vec3 total;
    const Vec3& get(int i, int j) const { return per_pair[static_cast<size_t>(pair_index(i, j, n))]; }
};

PairMomenta pair_angular_momentum(const Configuration& config,
                                  const std::vector<Vec3>& velocities,
                                  const Masses& masses);

enum class ShapeKind {
    Tetrahedral,
    Collinear,
    EquilateralCentered,
    KiteConvex,
    KiteConcave,
    Rhombus,
    IsoscelesTrapezium,
    PlanarOther,
    NonPlanarOther,
};

const char* to_string(ShapeKind kind);

struct ShapeClass {
    ShapeKind kind = ShapeKind::PlanarOther;
    double tol = default_classify_tol;
    std::vector<std::string> matched;  // distance equalities that fixed the kind
};

/// Geometric classification of a 4-body configuration: the distance-equality
/// patterns are searched over all relabelings, so the result does not depend
/// on body order. Collinear takes precedence over planar sub-kinds.
ShapeClass classify(const Configuration& config, double tol = default_classify_tol);

}  // namespace ccfour
