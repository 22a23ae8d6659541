#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ccfour/vec3.hpp"

namespace ccfour {

// Pairs closer than this fraction of the largest separation are rejected as
// collisions (q^-3 terms blow up there).
inline constexpr double collision_fraction = 1e-9;

// Flat index of the unordered pair {i,j} among the n(n-1)/2 pairs of 0..n-1.
int pair_index(int i, int j, int n);
// Flat index of the unordered triplet {i,j,k}.
int triplet_index(int i, int j, int k, int n);
int pair_count(int n);
int triplet_count(int n);

/// Positive masses plus the gravitational constant.
class Masses {
public:
    explicit Masses(std::vector<double> m, double G = 1.0);

    int size() const { return static_cast<int>(m_.size()); }
    double operator[](int i) const { return m_[static_cast<size_t>(i)]; }
    const std::vector<double>& values() const { return m_; }
    double total() const { return total_; }
    double grav() const { return G_; }

    /// Pair reduced mass m_i m_j / M.
    double mu(int i, int j) const { return (*this)[i] * (*this)[j] / total_; }
    /// Triplet reduced mass m_i m_j m_k / M^2.
    double mu3(int i, int j, int k) const {
        return (*this)[i] * (*this)[j] * (*this)[k] / (total_ * total_);
    }

private:
    std::vector<double> m_;
    double G_;
    double total_;
};

struct ReducedMasses {
    std::vector<double> pair;     // indexed by pair_index
    std::vector<double> triplet;  // indexed by triplet_index
};

ReducedMasses reduced_masses(const Masses& masses);

/// Body positions; the ground-truth representation of a configuration.
/// Positions are stored as Vec3 with z = 0 when dim == 2.
class Configuration {
public:
    Configuration(int dim, std::vector<Vec3> positions);

    int dim() const { return dim_; }
    int size() const { return static_cast<int>(r_.size()); }
    const Vec3& position(int i) const { return r_[static_cast<size_t>(i)]; }
    const std::vector<Vec3>& positions() const { return r_; }

    /// Pair vector q_ij = r_i - r_j.
    Vec3 pair(int i, int j) const { return r_[static_cast<size_t>(i)] - r_[static_cast<size_t>(j)]; }
    double distance(int i, int j) const { return pair(i, j).norm(); }
    double min_distance() const;
    double max_distance() const;

    Vec3 centroid() const;
    Vec3 center_of_mass(const Masses& masses) const;

    Configuration translated(const Vec3& shift) const;

    /// True when all bodies lie in a common plane (always for dim == 2).
    bool planar(double tol = 1e-9) const;
    /// Unit normal of the configuration plane; +z for dim == 2. The sign
    /// follows cross(q_21, q_31), matching the canonical embedding.
    Vec3 plane_normal() const;
    /// True when all bodies lie on a common line.
    bool collinear(double tol = 1e-9) const;

private:
    int dim_;
    std::vector<Vec3> r_;
};

using PairVectorTable = std::vector<std::vector<Vec3>>;

/// Full antisymmetric table q[i][j] = r_i - r_j.
PairVectorTable pair_vectors(const Configuration& config);

/// Max over triplets i<j<k of |q[i][j] + q[j][k] + q[k][i]|. Zero (to
/// roundoff) whenever the table came from actual positions.
double triangle_residual(const PairVectorTable& q);

/// The six mutual distances of a 4-body set (general n supported); may or
/// may not be realizable as actual positions.
class DistanceSet {
public:
    explicit DistanceSet(int n);
    static DistanceSet from_configuration(const Configuration& config);

    int size() const { return n_; }
    double q(int i, int j) const;
    void set(int i, int j, double value);
    /// p_ij = q_ij^-3.
    double p(int i, int j) const;
    double max_q() const;

private:
    int n_;
    std::vector<double> q_;
};

struct EmbedResult {
    bool realizable = false;
    bool degenerate = false;  // embeds only strictly below the requested dimension
    int embed_dim = 0;        // affine dimension actually spanned
    std::optional<Configuration> witness;
    std::string reason;       // set when not realizable
};

/// Decides via Cayley-Menger determinant signs whether the distance set
/// embeds in `dim` (2 or 3) dimensions, and constructs one canonical witness
/// (body 1 at origin convention, then centroid moved to the origin).
EmbedResult realizable(const DistanceSet& d, int dim);

}  // namespace ccfour
