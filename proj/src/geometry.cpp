#include "ccfour/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ccfour {

int pair_count(int n) { return n * (n - 1) / 2; }
int triplet_count(int n) { return n * (n - 1) * (n - 2) / 6; }

int pair_index(int i, int j, int n) {
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= n || i == j) throw std::invalid_argument("bad pair index");
    return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

int triplet_index(int i, int j, int k, int n) {
    int a = std::min({i, j, k});
    int c = std::max({i, j, k});
    int b = i + j + k - a - c;
    if (a < 0 || c >= n || a == b || b == c) throw std::invalid_argument("bad triplet index");
    int idx = 0;
    for (int x = 0; x < a; ++x) idx += (n - 1 - x) * (n - 2 - x) / 2;
    for (int y = a + 1; y < b; ++y) idx += n - 1 - y;
    idx += c - b - 1;
    return idx;
}

// ---- Masses ----

Masses::Masses(std::vector<double> m, double G) : m_(std::move(m)), G_(G), total_(0.0) {
    if (m_.size() < 2) throw std::invalid_argument("at least two bodies required");
    for (double mi : m_) {
        if (!(mi > 0.0) || !std::isfinite(mi)) throw std::invalid_argument("mass must be positive");
        total_ += mi;
    }
    if (!(G_ > 0.0) || !std::isfinite(G_)) throw std::invalid_argument("G must be positive");
}

ReducedMasses reduced_masses(const Masses& masses) {
    const int n = masses.size();
    ReducedMasses out;
    out.pair.resize(static_cast<size_t>(pair_count(n)));
    out.triplet.resize(static_cast<size_t>(triplet_count(n)));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) out.pair[static_cast<size_t>(pair_index(i, j, n))] = masses.mu(i, j);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k)
                out.triplet[static_cast<size_t>(triplet_index(i, j, k, n))] = masses.mu3(i, j, k);
    return out;
}

// ---- Configuration ----

Configuration::Configuration(int dim, std::vector<Vec3> positions)
    : dim_(dim), r_(std::move(positions)) {
    if (dim_ != 2 && dim_ != 3) throw std::invalid_argument("dim must be 2 or 3");
    if (r_.size() < 2) throw std::invalid_argument("at least two bodies required");
    if (dim_ == 2) {
        for (const Vec3& p : r_)
            if (p.z != 0.0) throw std::invalid_argument("2-d configuration has nonzero z component");
    }
    for (const Vec3& p : r_)
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
            throw std::invalid_argument("position is not finite");

    double dmin = min_distance();
    double dmax = max_distance();
    if (dmin <= collision_fraction * dmax) {
        std::ostringstream msg;
        msg << "collision: two bodies closer than " << collision_fraction << " of the largest separation";
        throw std::domain_error(msg.str());
    }
}

double Configuration::min_distance() const {
    double d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < size(); ++i)
        for (int j = i + 1; j < size(); ++j) d = std::min(d, distance(i, j));
    return d;
}

double Configuration::max_distance() const {
    double d = 0.0;
    for (int i = 0; i < size(); ++i)
        for (int j = i + 1; j < size(); ++j) d = std::max(d, distance(i, j));
    return d;
}

Vec3 Configuration::centroid() const {
    Vec3 c;
    for (const Vec3& p : r_) c += p;
    return c / static_cast<double>(size());
}

Vec3 Configuration::center_of_mass(const Masses& masses) const {
    if (masses.size() != size()) throw std::invalid_argument("masses/positions size mismatch");
    Vec3 c;
    for (int i = 0; i < size(); ++i) c += masses[i] * position(i);
    return c / masses.total();
}

Configuration Configuration::translated(const Vec3& shift) const {
    std::vector<Vec3> moved = r_;
    for (Vec3& p : moved) p += shift;
    return Configuration(dim_, std::move(moved));
}

bool Configuration::collinear(double tol) const {
    const int n = size();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                Vec3 u = pair(j, i);
                Vec3 v = pair(k, i);
                if (cross(u, v).norm() > tol * u.norm() * v.norm()) return false;
            }
    return true;
}

bool Configuration::planar(double tol) const {
    if (dim_ == 2) return true;
    const int n = size();
    // normal from the first non-degenerate triple, then test the rest
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                Vec3 u = pair(j, i);
                Vec3 v = pair(k, i);
                Vec3 nvec = cross(u, v);
                if (nvec.norm() <= tol * u.norm() * v.norm()) continue;
                Vec3 unit = nvec / nvec.norm();
                for (int l = 0; l < n; ++l) {
                    Vec3 w = pair(l, i);
                    if (std::abs(dot(w, unit)) > tol * std::max(w.norm(), max_distance())) return false;
                }
                return true;
            }
    return true;  // collinear counts as planar
}

Vec3 Configuration::plane_normal() const {
    if (dim_ == 2) return {0.0, 0.0, 1.0};
    const int n = size();
    double best = 0.0;
    Vec3 bestn{0.0, 0.0, 1.0};
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                Vec3 c = cross(pair(j, i), pair(k, i));
                if (c.norm() > best) {
                    best = c.norm();
                    bestn = c;
                }
            }
    if (best == 0.0) return {0.0, 0.0, 1.0};  // fully collinear
    // sign convention: cross(q_21, q_31) for the lowest non-degenerate triple
    Vec3 ref = cross(pair(1, 0), pair(2, 0));
    Vec3 unit = bestn / bestn.norm();
    if (dot(unit, ref) < 0.0) unit = -unit;
    return unit;
}

PairVectorTable pair_vectors(const Configuration& config) {
    const int n = config.size();
    PairVectorTable q(static_cast<size_t>(n), std::vector<Vec3>(static_cast<size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) q[static_cast<size_t>(i)][static_cast<size_t>(j)] = config.pair(i, j);
    return q;
}

double triangle_residual(const PairVectorTable& q) {
    const int n = static_cast<int>(q.size());
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                Vec3 s = q[static_cast<size_t>(i)][static_cast<size_t>(j)] +
                         q[static_cast<size_t>(j)][static_cast<size_t>(k)] +
                         q[static_cast<size_t>(k)][static_cast<size_t>(i)];
                worst = std::max(worst, s.norm());
            }
    return worst;
}

// ---- DistanceSet ----

DistanceSet::DistanceSet(int n) : n_(n), q_(static_cast<size_t>(pair_count(n)), 0.0) {
    if (n < 2) throw std::invalid_argument("at least two bodies required");
}

DistanceSet DistanceSet::from_configuration(const Configuration& config) {
    DistanceSet d(config.size());
    for (int i = 0; i < config.size(); ++i)
        for (int j = i + 1; j < config.size(); ++j) d.set(i, j, config.distance(i, j));
    return d;
}

double DistanceSet::q(int i, int j) const { return q_[static_cast<size_t>(pair_index(i, j, n_))]; }

void DistanceSet::set(int i, int j, double value) {
    if (!(value > 0.0) || !std::isfinite(value))
        throw std::invalid_argument("distance must be positive and finite");
    q_[static_cast<size_t>(pair_index(i, j, n_))] = value;
}

double DistanceSet::p(int i, int j) const {
    double d = q(i, j);
    return 1.0 / (d * d * d);
}

double DistanceSet::max_q() const {
    double m = 0.0;
    for (double v : q_) m = std::max(m, v);
    return m;
}

// ---- realizability ----

namespace {

// Determinant of a small matrix by Gaussian elimination with partial pivots.
double det_small(std::array<std::array<double, 5>, 5> a, int n) {
    double det = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[static_cast<size_t>(r)][static_cast<size_t>(col)]) >
                std::abs(a[static_cast<size_t>(piv)][static_cast<size_t>(col)]))
                piv = r;
        if (a[static_cast<size_t>(piv)][static_cast<size_t>(col)] == 0.0) return 0.0;
        if (piv != col) {
            std::swap(a[static_cast<size_t>(piv)], a[static_cast<size_t>(col)]);
            det = -det;
        }
        det *= a[static_cast<size_t>(col)][static_cast<size_t>(col)];
        for (int r = col + 1; r < n; ++r) {
            double f = a[static_cast<size_t>(r)][static_cast<size_t>(col)] /
                       a[static_cast<size_t>(col)][static_cast<size_t>(col)];
            for (int c = col; c < n; ++c)
                a[static_cast<size_t>(r)][static_cast<size_t>(c)] -=
                    f * a[static_cast<size_t>(col)][static_cast<size_t>(c)];
        }
    }
    return det;
}

// Cayley-Menger determinant of the points in `idx` (squared distances s2).
double cayley_menger(const double s2[4][4], const std::vector<int>& idx) {
    const int m = static_cast<int>(idx.size());
    std::array<std::array<double, 5>, 5> a{};
    for (int r = 0; r < m + 1; ++r)
        for (int c = 0; c < m + 1; ++c) {
            if (r == 0 && c == 0)
                a[static_cast<size_t>(r)][static_cast<size_t>(c)] = 0.0;
            else if (r == 0 || c == 0)
                a[static_cast<size_t>(r)][static_cast<size_t>(c)] = 1.0;
            else
                a[static_cast<size_t>(r)][static_cast<size_t>(c)] =
                    s2[idx[static_cast<size_t>(r - 1)]][idx[static_cast<size_t>(c - 1)]];
        }
    return det_small(a, m + 1);
}

}  // namespace

EmbedResult realizable(const DistanceSet& d, int dim) {
    if (d.size() != 4) throw std::invalid_argument("realizability check expects four bodies");
    if (dim != 2 && dim != 3) throw std::invalid_argument("dim must be 2 or 3");

    EmbedResult out;
    const double scale = d.max_q();

    // normalized squared distances keep the determinant tolerances scale-free
    double s2[4][4] = {};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) {
                double q = d.q(i, j) / scale;
                s2[i][j] = q * q;
            }

    const double tol = 1e-8;

    // triangle areas: area^2 = -CM3/16 >= 0
    double cm3_min = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            for (int k = j + 1; k < 4; ++k) {
                double cm3 = cayley_menger(s2, {i, j, k});
                cm3_min = std::min(cm3_min, cm3);
                if (cm3 > tol) {
                    std::ostringstream msg;
                    msg << "triangle inequality violated for bodies " << i + 1 << "," << j + 1 << ","
                        << k + 1;
                    out.reason = msg.str();
                    return out;
                }
            }

    // tetrahedron volume: volume^2 = CM4/288
    double cm4 = cayley_menger(s2, {0, 1, 2, 3});
    if (dim == 3 && cm4 < -tol) {
        out.reason = "not embeddable in 3 dimensions";
        return out;
    }
    if (dim == 2 && std::abs(cm4) > tol) {
        out.reason = "requires 3 dimensions";
        return out;
    }

    int edim = 1;
    if (cm3_min < -tol) edim = 2;
    if (cm4 > tol) edim = 3;

    // constructive embedding: body 1 at the origin, body 2 on +x, body 3 in
    // the upper half plane, body 4 with z >= 0
    auto sq = [](double v) { return v * v; };
    const double q12 = d.q(0, 1), q13 = d.q(0, 2), q14 = d.q(0, 3);
    const double q23 = d.q(1, 2), q24 = d.q(1, 3), q34 = d.q(2, 3);

    std::vector<Vec3> r(4);
    r[1] = {q12, 0.0, 0.0};
    double x3 = (sq(q12) + sq(q13) - sq(q23)) / (2.0 * q12);
    double y3 = std::sqrt(std::max(0.0, sq(q13) - sq(x3)));
    r[2] = {x3, y3, 0.0};

    double x4 = (sq(q12) + sq(q14) - sq(q24)) / (2.0 * q12);
    double y4, z4;
    if (y3 > 1e-12 * scale) {
        y4 = (sq(q13) + sq(q14) - sq(q34) - 2.0 * x3 * x4) / (2.0 * y3);
        z4 = std::sqrt(std::max(0.0, sq(q14) - sq(x4) - sq(y4)));
    } else {
        // bodies 1-3 collinear; place body 4 in the xy plane
        y4 = std::sqrt(std::max(0.0, sq(q14) - sq(x4)));
        z4 = 0.0;
    }
    r[3] = {x4, y4, z4};

    // the construction must reproduce the inputs, otherwise the set was
    // algebraically consistent by determinant signs but not geometrically
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            double got = (r[static_cast<size_t>(i)] - r[static_cast<size_t>(j)]).norm();
            if (std::abs(got - d.q(i, j)) > 1e-7 * scale) {
                std::ostringstream msg;
                msg << "distance set is inconsistent at pair " << i + 1 << "," << j + 1;
                out.reason = msg.str();
                return out;
            }
        }

    if (dim == 2)
        for (Vec3& p : r) p.z = 0.0;

    Vec3 c;
    for (const Vec3& p : r) c += p;
    c = c / 4.0;
    for (Vec3& p : r) p -= c;

    out.realizable = true;
    out.embed_dim = edim;
    out.degenerate = edim < dim;
    out.witness = Configuration(dim, std::move(r));
    return out;
}

}  // namespace ccfour
