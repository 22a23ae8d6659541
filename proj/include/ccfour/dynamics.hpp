#pragma once

#include <utility>
#include <vector>

#include "ccfour/centrality.hpp"
#include "ccfour/geometry.hpp"

namespace ccfour {

/// Instantaneous state of an N-body system. Initializers put the system in
/// the center-of-mass frame (sum m_i rdot_i = 0).
struct DynamicState {
    double time = 0.0;
    int dim = 2;
    std::vector<Vec3> positions;
    std::vector<Vec3> velocities;
    Masses masses;
};

Configuration to_configuration(const DynamicState& state);

std::vector<Vec3> accelerations(const DynamicState& state);

double kinetic_energy_standard(const DynamicState& state);
/// Pair-space kinetic energy: (1/2) M Rdot^2 + sum_[ij] (1/2) mu_ij qdot_ij^2
/// - sum_[ijk] (1/2) mu_ijk (qdot_ij + qdot_jk + qdot_ki)^2. The triplet term
/// vanishes identically when the pair velocities derive from positions.
double kinetic_energy_pairspace(const DynamicState& state);
double potential_energy(const DynamicState& state);
double total_energy(const DynamicState& state);

enum class Integrator { Rk4, DopriAdaptive };

struct IntegrationOptions {
    Integrator method = Integrator::Rk4;
    double dt = 1e-3;          // fixed step (rk4) or initial step (adaptive)
    long steps = 1000;         // rk4: exact count; adaptive: cap on accepted steps
    long sample_stride = 10;   // diagnostics sampled every this many steps
    double rel_tol = 1e-10;    // adaptive error control
    double stop_scale = 0.0;   // stop once q_12(t) <= stop_scale * q_12(0); 0 disables
    double collision_fraction = 0.01;  // abort when min distance < this * initial min
};

struct TrajectorySample {
    double t = 0.0;
    std::vector<Vec3> positions;
    std::vector<Vec3> velocities;
};

struct TrajectoryDiagnostics {
    // max over sampled times and pair ratios of the relative drift of
    // q_ij(t)/q_kl(t) from its initial value
    double max_shape_deviation = 0.0;
    std::vector<double> pair_momentum_drift;  // indexed by pair_index
    double max_pair_momentum_drift = 0.0;
    double total_momentum_drift = 0.0;
    double energy_drift = 0.0;
    std::vector<std::pair<double, double>> lambda_history;  // (t, lambda)
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    DynamicState final_state;
    TrajectoryDiagnostics diagnostics;
    bool collided = false;
    bool stopped_at_scale = false;
};

Trajectory integrate(const DynamicState& initial, const IntegrationOptions& options);

/// Relative equilibrium initializer: rdot_i = omega n x (r_i - R) with
/// omega = sqrt(lambda). Requires a planar configuration that passes the
/// oracle.
DynamicState rigid_rotation_init(const Configuration& config, const Masses& masses,
                                 double oracle_tol = default_oracle_tol);

/// Homothetic collapse initializer: all velocities zero. Requires a central
/// configuration (works for the spatial tetrahedron too).
DynamicState homothetic_init(const Configuration& config, const Masses& masses,
                             double oracle_tol = default_oracle_tol);

/// Per-pair relative drift of L_ij along the trajectory.
std::vector<double> pair_momentum_drift(const Trajectory& trajectory);

}  // namespace ccfour
