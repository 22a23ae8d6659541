#include "ccfour/centrality.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ccfour {

double ResidualReport::max_normalized() const {
    double m = 0.0;
    for (const ResidualEntry& e : entries) m = std::max(m, std::abs(e.normalized));
    return m;
}

const char* to_string(ShapeKind kind) {
    switch (kind) {
        case ShapeKind::Tetrahedral: return "Tetrahedral";
        case ShapeKind::Collinear: return "Collinear";
        case ShapeKind::EquilateralCentered: return "EquilateralCentered";
        case ShapeKind::KiteConvex: return "KiteConvex";
        case ShapeKind::KiteConcave: return "KiteConcave";
        case ShapeKind::Rhombus: return "Rhombus";
        case ShapeKind::IsoscelesTrapezium: return "IsoscelesTrapezium";
        case ShapeKind::PlanarOther: return "PlanarOther";
        case ShapeKind::NonPlanarOther: return "NonPlanarOther";
    }
    return "?";
}

namespace {

void check_distinct(int n, std::initializer_list<int> idx) {
    for (int a : idx)
        if (a < 0 || a >= n) throw std::invalid_argument("body index out of range");
    int count = static_cast<int>(idx.size());
    for (auto it = idx.begin(); it != idx.end(); ++it)
        for (auto jt = std::next(it); jt != idx.end(); ++jt)
            if (*it == *jt) throw std::invalid_argument("body indices must be distinct");
    (void)count;
}

double inv_cube(double q) { return 1.0 / (q * q * q); }

ResidualEntry make_entry(std::string label, const Vec3& lhs, const Vec3& rhs, double term_sum,
                         bool planar_config, const Vec3& normal) {
    ResidualEntry e;
    e.label = std::move(label);
    Vec3 diff = lhs - rhs;
    e.raw = planar_config ? dot(diff, normal) : diff.norm();
    if (term_sum > 0.0) {
        e.normalized = e.raw / term_sum;
    } else {
        e.normalized = e.raw;
        e.degenerate = true;
    }
    return e;
}

}  // namespace

Vec3 newtonian_F(const Configuration& config, const Masses& masses, int i, int j, int k) {
    check_distinct(config.size(), {i, j, k});
    const double GM = masses.grav() * masses.total();
    Vec3 qij = config.pair(i, j);
    Vec3 qjk = config.pair(j, k);
    Vec3 qki = config.pair(k, i);
    return GM * (qij * inv_cube(qij.norm()) + qjk * inv_cube(qjk.norm()) + qki * inv_cube(qki.norm()));
}

Vec3 J_over_mu(const Configuration& config, const Masses& masses, int i, int j) {
    check_distinct(config.size(), {i, j});
    if (masses.size() != config.size()) throw std::invalid_argument("masses/positions size mismatch");
    Vec3 sum;
    for (int k = 0; k < config.size(); ++k) {
        if (k == i || k == j) continue;
        sum += (masses[k] / masses.total()) * newtonian_F(config, masses, i, j, k);
    }
    return sum;
}

ResidualReport cc_residuals_general(const Configuration& config, const Masses& masses) {
    const int n = config.size();
    if (n < 3) throw std::invalid_argument("centrality condition needs at least three bodies");
    if (masses.size() != n) throw std::invalid_argument("masses/positions size mismatch");

    ResidualReport report;
    const bool planar_config = config.planar();
    const Vec3 normal = planar_config ? config.plane_normal() : Vec3{};
    const double cross_floor = 1e-12;

    bool any_cross = false;
    for (int i = 0; i < n && !any_cross; ++i)
        for (int j = i + 1; j < n && !any_cross; ++j)
            for (int k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                Vec3 qij = config.pair(i, j);
                Vec3 qjk = config.pair(j, k);
                if (cross(qij, qjk).norm() > cross_floor * qij.norm() * qjk.norm()) {
                    any_cross = true;
                    break;
                }
            }
    report.collinear_vacuous = !any_cross;

    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Vec3 qij = config.pair(i, j);
            Vec3 sum;
            double term_sum = 0.0;
            for (int k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                Vec3 qjk = config.pair(j, k);
                double factor = inv_cube(config.distance(i, k)) - inv_cube(config.distance(j, k));
                Vec3 term = masses[k] * factor * cross(qij, qjk);
                sum += term;
                term_sum += term.norm();
            }
            std::ostringstream label;
            label << "cceq:" << i + 1 << j + 1;
            report.entries.push_back(make_entry(label.str(), sum, Vec3{}, term_sum, planar_config, normal));
        }
    return report;
}

ResidualReport cc_residuals_four(const Configuration& config, const Masses& masses) {
    if (config.size() != 4) throw std::invalid_argument("four bodies required");
    if (masses.size() != 4) throw std::invalid_argument("four masses required");

    // bodies 1..4 of the equations are indices 0..3 here
    const Vec3 q21 = config.pair(1, 0);
    const Vec3 q31 = config.pair(2, 0);
    const Vec3 q41 = config.pair(3, 0);
    const Vec3 q42 = config.pair(3, 1);
    const Vec3 q32 = config.pair(2, 1);

    const Vec3 A = cross(q21, q31);
    const Vec3 B = cross(q21, q41);
    const Vec3 C = cross(q41, q31);
    const Vec3 D = cross(q42, q32);

    double p[4][4];
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) p[i][j] = inv_cube(config.distance(i, j));

    const double m1 = masses[0], m2 = masses[1], m3 = masses[2], m4 = masses[3];

    struct Side {
        Vec3 lhs, rhs;
    };
    const std::array<Side, 6> eq = {{
        {m3 * (p[0][2] - p[1][2]) * A, m4 * (p[1][3] - p[0][3]) * B},
        {m2 * (p[0][1] - p[1][2]) * A, m4 * (p[2][3] - p[0][3]) * C},
        {m1 * (p[0][1] - p[0][2]) * A, m4 * (p[1][3] - p[2][3]) * D},
        {m2 * (p[1][3] - p[0][1]) * B, m3 * (p[2][3] - p[0][2]) * C},
        {m1 * (p[0][3] - p[0][1]) * B, m3 * (p[1][2] - p[2][3]) * D},
        {m1 * (p[0][3] - p[0][2]) * C, m2 * (p[1][2] - p[1][3]) * D},
    }};
    static const char* labels[6] = {"4cc:a", "4cc:b", "4cc:c", "4cc:d", "4cc:e", "4cc:f"};

    ResidualReport report;
    const bool planar_config = config.planar();
    const Vec3 normal = planar_config ? config.plane_normal() : Vec3{};

    const double cross_floor = 1e-12;
    double big = 0.0;
    big = std::max(big, A.norm() / (q21.norm() * q31.norm()));
    big = std::max(big, B.norm() / (q21.norm() * q41.norm()));
    big = std::max(big, C.norm() / (q41.norm() * q31.norm()));
    big = std::max(big, D.norm() / (q42.norm() * q32.norm()));
    report.collinear_vacuous = big <= cross_floor;

    for (int e = 0; e < 6; ++e) {
        double term_sum = eq[static_cast<size_t>(e)].lhs.norm() + eq[static_cast<size_t>(e)].rhs.norm();
        report.entries.push_back(make_entry(labels[e], eq[static_cast<size_t>(e)].lhs,
                                            eq[static_cast<size_t>(e)].rhs, term_sum, planar_config,
                                            normal));
    }
    return report;
}

ResidualReport dziobek_residuals(const DistanceSet& d) {
    if (d.size() != 4) throw std::invalid_argument("four bodies required");
    const double p12 = d.p(0, 1), p13 = d.p(0, 2), p14 = d.p(0, 3);
    const double p23 = d.p(1, 2), p24 = d.p(1, 3), p34 = d.p(2, 3);

    struct Rel {
        const char* label;
        double lhs, rhs;
    };
    const std::array<Rel, 4> rel = {{
        {"dziobek:a", (p13 - p23) * (p24 - p34) * (p14 - p12), (p24 - p14) * (p12 - p13) * (p23 - p34)},
        {"dziobek:b", (p12 - p23) * (p13 - p34) * (p14 - p24), (p12 - p24) * (p13 - p23) * (p14 - p34)},
        {"dziobek:c", (p13 - p14) * (p23 - p12) * (p34 - p24), (p13 - p12) * (p23 - p24) * (p34 - p14)},
        {"dziobek:d", (p14 - p13) * (p24 - p12) * (p34 - p23), (p14 - p12) * (p24 - p23) * (p34 - p13)},
    }};

    ResidualReport report;
    for (const Rel& r : rel) {
        ResidualEntry e;
        e.label = r.label;
        e.raw = r.lhs - r.rhs;
        double term_sum = std::abs(r.lhs) + std::abs(r.rhs);
        if (term_sum > 0.0) {
            e.normalized = e.raw / term_sum;
        } else {
            e.normalized = 0.0;
            e.degenerate = true;
        }
        report.entries.push_back(std::move(e));
    }
    return report;
}

std::vector<Vec3> newtonian_accelerations(const std::vector<Vec3>& positions, const Masses& masses) {
    const int n = static_cast<int>(positions.size());
    if (masses.size() != n) throw std::invalid_argument("masses/positions size mismatch");
    std::vector<Vec3> a(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            Vec3 dvec = positions[static_cast<size_t>(j)] - positions[static_cast<size_t>(i)];
            a[static_cast<size_t>(i)] += masses.grav() * masses[j] * dvec * inv_cube(dvec.norm());
        }
    return a;
}

LambdaFit lambda_fit(const Configuration& config, const Masses& masses) {
    const int n = config.size();
    std::vector<Vec3> a = newtonian_accelerations(config.positions(), masses);

    bool all_zero = true;
    for (const Vec3& ai : a)
        if (ai.norm() > 0.0) all_zero = false;
    if (all_zero) throw std::runtime_error("all accelerations vanish");

    Vec3 com = config.center_of_mass(masses);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
        Vec3 x = config.position(i) - com;
        num -= masses[i] * dot(a[static_cast<size_t>(i)], x);
        den += masses[i] * x.norm2();
    }
    if (den == 0.0) throw std::runtime_error("all bodies at the center of mass");

    LambdaFit fit;
    fit.lambda = num / den;

    // Deviations are relative to |a_i|, floored at the system's centripetal
    // acceleration scale so a body sitting exactly at the center (a_i = 0 by
    // symmetry) does not turn the ratio into 0/0 noise.
    double floor = std::abs(fit.lambda) * std::sqrt(den / masses.total());
    fit.per_body_deviation.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        Vec3 x = config.position(i) - com;
        double resid = (a[static_cast<size_t>(i)] + fit.lambda * x).norm();
        double denom = std::max(a[static_cast<size_t>(i)].norm(), floor);
        double dev = denom > 0.0 ? resid / denom : 0.0;
        fit.per_body_deviation[static_cast<size_t>(i)] = dev;
        fit.max_relative_deviation = std::max(fit.max_relative_deviation, dev);
    }
    return fit;
}

PairMomenta pair_angular_momentum(const Configuration& config, const std::vector<Vec3>& velocities,
                                  const Masses& masses) {
    const int n = config.size();
    if (static_cast<int>(velocities.size()) != n)
        throw std::invalid_argument("velocities/positions size mismatch");
    if (masses.size() != n) throw std::invalid_argument("masses/positions size mismatch");

    PairMomenta out;
    out.n = n;
    out.per_pair.resize(static_cast<size_t>(pair_count(n)));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Vec3 qij = config.pair(i, j);
            Vec3 qdot = velocities[static_cast<size_t>(i)] - velocities[static_cast<size_t>(j)];
            Vec3 l = cross(qij, masses.mu(i, j) * qdot);
            out.per_pair[static_cast<size_t>(pair_index(i, j, n))] = l;
            out.total += l;
        }
    return out;
}

// ---- classification ----

namespace {

std::string eq_label(int a, int b) {
    if (a > b) std::swap(a, b);
    std::ostringstream s;
    s << "q" << a + 1 << b + 1;
    return s.str();
}

std::string eq_string(int a, int b, int c, int d) { return eq_label(a, b) + "=" + eq_label(c, d); }

struct DistTable {
    double d[4][4];
};

bool close(double a, double b, double tol_abs) { return std::abs(a - b) <= tol_abs; }

}  // namespace

ShapeClass classify(const Configuration& config, double tol) {
    if (config.size() != 4) throw std::invalid_argument("four bodies required");

    ShapeClass out;
    out.tol = tol;

    if (config.collinear(tol)) {
        out.kind = ShapeKind::Collinear;
        return out;
    }

    DistTable t;
    double mean = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) {
                t.d[i][j] = config.distance(i, j);
                if (i < j) mean += t.d[i][j];
            }
    mean /= 6.0;
    const double tol_abs = tol * mean;

    if (!config.planar(tol)) {
        bool all_equal = true;
        for (int i = 0; i < 4 && all_equal; ++i)
            for (int j = i + 1; j < 4; ++j)
                if (!close(t.d[i][j], mean, tol_abs)) {
                    all_equal = false;
                    break;
                }
        out.kind = all_equal ? ShapeKind::Tetrahedral : ShapeKind::NonPlanarOther;
        if (all_equal)
            for (int i = 0; i < 4; ++i)
                for (int j = i + 1; j < 4; ++j)
                    if (!(i == 0 && j == 1)) out.matched.push_back(eq_string(0, 1, i, j));
        return out;
    }

    std::array<int, 4> perm = {0, 1, 2, 3};
    std::vector<std::array<int, 4>> perms;
    do {
        perms.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));

    auto dist = [&](const std::array<int, 4>& s, int a, int b) {
        return t.d[s[static_cast<size_t>(a - 1)]][s[static_cast<size_t>(b - 1)]];
    };

    // centered equilateral: 123 equilateral, 4 equidistant from all
    for (const auto& s : perms) {
        if (close(dist(s, 1, 2), dist(s, 1, 3), tol_abs) && close(dist(s, 1, 2), dist(s, 2, 3), tol_abs) &&
            close(dist(s, 1, 4), dist(s, 2, 4), tol_abs) && close(dist(s, 1, 4), dist(s, 3, 4), tol_abs)) {
            out.kind = ShapeKind::EquilateralCentered;
            out.matched = {eq_string(s[0], s[1], s[0], s[2]), eq_string(s[0], s[1], s[1], s[2]),
                           eq_string(s[0], s[3], s[1], s[3]), eq_string(s[0], s[3], s[2], s[3])};
            return out;
        }
    }

    // rhombus: four equal sides q12=q13=q24=q34 (diagonals 14, 23 free)
    for (const auto& s : perms) {
        if (close(dist(s, 1, 2), dist(s, 1, 3), tol_abs) && close(dist(s, 1, 2), dist(s, 2, 4), tol_abs) &&
            close(dist(s, 1, 2), dist(s, 3, 4), tol_abs)) {
            out.kind = ShapeKind::Rhombus;
            out.matched = {eq_string(s[0], s[1], s[0], s[2]), eq_string(s[0], s[1], s[1], s[3]),
                           eq_string(s[0], s[1], s[2], s[3])};
            return out;
        }
    }

    // kite: q12=q13 and q24=q34; body 1 vs body 4 relative to line 2-3
    const Vec3 normal = config.plane_normal();
    for (const auto& s : perms) {
        if (close(dist(s, 1, 2), dist(s, 1, 3), tol_abs) && close(dist(s, 2, 4), dist(s, 3, 4), tol_abs)) {
            const Vec3& r1 = config.position(s[0]);
            const Vec3& r2 = config.position(s[1]);
            const Vec3& r3 = config.position(s[2]);
            const Vec3& r4 = config.position(s[3]);
            double side1 = dot(cross(r3 - r2, r1 - r2), normal);
            double side4 = dot(cross(r3 - r2, r4 - r2), normal);
            double floor = tol * mean * mean;
            if (std::abs(side1) <= floor || std::abs(side4) <= floor) continue;
            out.kind = (side1 * side4 > 0.0) ? ShapeKind::KiteConcave : ShapeKind::KiteConvex;
            out.matched = {eq_string(s[0], s[1], s[0], s[2]), eq_string(s[1], s[3], s[2], s[3])};
            return out;
        }
    }

    // isosceles trapezium: q12=q34, q13=q24, and no isosceles triangle
    bool any_isosceles = false;
    for (int i = 0; i < 4 && !any_isosceles; ++i)
        for (int j = i + 1; j < 4 && !any_isosceles; ++j)
            for (int k = j + 1; k < 4; ++k) {
                if (close(t.d[i][j], t.d[i][k], tol_abs) || close(t.d[i][j], t.d[j][k], tol_abs) ||
                    close(t.d[i][k], t.d[j][k], tol_abs)) {
                    any_isosceles = true;
                    break;
                }
            }
    if (!any_isosceles) {
        for (const auto& s : perms) {
            if (close(dist(s, 1, 2), dist(s, 3, 4), tol_abs) &&
                close(dist(s, 1, 3), dist(s, 2, 4), tol_abs)) {
                out.kind = ShapeKind::IsoscelesTrapezium;
                out.matched = {eq_string(s[0], s[1], s[2], s[3]), eq_string(s[0], s[2], s[1], s[3])};
                return out;
            }
        }
    }

    out.kind = ShapeKind::PlanarOther;
    return out;
}

}  // namespace ccfour
