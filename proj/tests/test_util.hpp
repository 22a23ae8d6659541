#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "ccfour/centrality.hpp"
#include "ccfour/geometry.hpp"

namespace testutil {

inline constexpr double pi = std::numbers::pi;

inline double deg(double d) { return d * pi / 180.0; }

using Rng = std::mt19937_64;

inline ccfour::Vec3 random_point(Rng& rng, int dim, double span = 1.0) {
    std::uniform_real_distribution<double> u(-span, span);
    return {u(rng), u(rng), dim == 3 ? u(rng) : 0.0};
}

// Random positions with no near-collision and, for planar samples, no
// near-collinear triple.
inline ccfour::Configuration random_configuration(Rng& rng, int n, int dim,
                                                  bool reject_collinear = true) {
    while (true) {
        std::vector<ccfour::Vec3> r;
        r.reserve(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) r.push_back(random_point(rng, dim));

        bool ok = true;
        for (int i = 0; i < n && ok; ++i)
            for (int j = i + 1; j < n; ++j)
                if ((r[static_cast<size_t>(i)] - r[static_cast<size_t>(j)]).norm() < 0.05) {
                    ok = false;
                    break;
                }
        if (ok && reject_collinear) {
            for (int i = 0; i < n && ok; ++i)
                for (int j = i + 1; j < n && ok; ++j)
                    for (int k = j + 1; k < n; ++k) {
                        ccfour::Vec3 u = r[static_cast<size_t>(j)] - r[static_cast<size_t>(i)];
                        ccfour::Vec3 v = r[static_cast<size_t>(k)] - r[static_cast<size_t>(i)];
                        if (cross(u, v).norm() < 1e-3 * u.norm() * v.norm()) {
                            ok = false;
                            break;
                        }
                    }
        }
        if (ok) return ccfour::Configuration(dim, std::move(r));
    }
}

inline ccfour::Masses random_masses(Rng& rng, int n, double G = 1.0) {
    std::uniform_real_distribution<double> u(std::log(0.1), std::log(10.0));
    std::vector<double> m;
    m.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) m.push_back(std::exp(u(rng)));
    return ccfour::Masses(std::move(m), G);
}

// Uniform random rotation from a quaternion.
inline ccfour::Configuration rotated(const ccfour::Configuration& c, Rng& rng, bool reflect = false) {
    std::normal_distribution<double> g(0.0, 1.0);
    double q0 = g(rng), q1 = g(rng), q2 = g(rng), q3 = g(rng);
    double qn = std::sqrt(q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3);
    q0 /= qn;
    q1 /= qn;
    q2 /= qn;
    q3 /= qn;
    double R[3][3] = {
        {1 - 2 * (q2 * q2 + q3 * q3), 2 * (q1 * q2 - q0 * q3), 2 * (q1 * q3 + q0 * q2)},
        {2 * (q1 * q2 + q0 * q3), 1 - 2 * (q1 * q1 + q3 * q3), 2 * (q2 * q3 - q0 * q1)},
        {2 * (q1 * q3 - q0 * q2), 2 * (q2 * q3 + q0 * q1), 1 - 2 * (q1 * q1 + q2 * q2)},
    };
    std::vector<ccfour::Vec3> out;
    for (int i = 0; i < c.size(); ++i) {
        const ccfour::Vec3& p = c.position(i);
        ccfour::Vec3 v{R[0][0] * p.x + R[0][1] * p.y + R[0][2] * p.z,
                       R[1][0] * p.x + R[1][1] * p.y + R[1][2] * p.z,
                       R[2][0] * p.x + R[2][1] * p.y + R[2][2] * p.z};
        if (reflect) v.z = -v.z;
        out.push_back(v);
    }
    return ccfour::Configuration(3, std::move(out));
}

// 2-d rotation/reflection keeping the configuration planar.
inline ccfour::Configuration rotated_2d(const ccfour::Configuration& c, Rng& rng,
                                        bool reflect = false) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * pi);
    double t = u(rng);
    std::vector<ccfour::Vec3> out;
    for (int i = 0; i < c.size(); ++i) {
        const ccfour::Vec3& p = c.position(i);
        double x = std::cos(t) * p.x - std::sin(t) * p.y;
        double y = std::sin(t) * p.x + std::cos(t) * p.y;
        out.push_back({x, reflect ? -y : y, 0.0});
    }
    return ccfour::Configuration(2, std::move(out));
}

}  // namespace testutil
