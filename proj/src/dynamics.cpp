#include "ccfour/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ccfour {

Configuration to_configuration(const DynamicState& state) {
    return Configuration(state.dim, state.positions);
}

std::vector<Vec3> accelerations(const DynamicState& state) {
    return newtonian_accelerations(state.positions, state.masses);
}

double kinetic_energy_standard(const DynamicState& state) {
    double t = 0.0;
    for (int i = 0; i < state.masses.size(); ++i)
        t += 0.5 * state.masses[i] * state.velocities[static_cast<size_t>(i)].norm2();
    return t;
}

double kinetic_energy_pairspace(const DynamicState& state) {
    const int n = state.masses.size();
    const Masses& m = state.masses;

    Vec3 rdot_com;
    for (int i = 0; i < n; ++i) rdot_com += m[i] * state.velocities[static_cast<size_t>(i)];
    rdot_com = rdot_com / m.total();
    double t = 0.5 * m.total() * rdot_com.norm2();

    auto qdot = [&](int i, int j) {
        return state.velocities[static_cast<size_t>(i)] - state.velocities[static_cast<size_t>(j)];
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) t += 0.5 * m.mu(i, j) * qdot(i, j).norm2();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                Vec3 loop = qdot(i, j) + qdot(j, k) + qdot(k, i);
                t -= 0.5 * m.mu3(i, j, k) * loop.norm2();
            }
    return t;
}

double potential_energy(const DynamicState& state) {
    const int n = state.masses.size();
    double v = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double q = (state.positions[static_cast<size_t>(i)] - state.positions[static_cast<size_t>(j)])
                           .norm();
            v -= state.masses.grav() * state.masses[i] * state.masses[j] / q;
        }
    return v;
}

double total_energy(const DynamicState& state) {
    return kinetic_energy_standard(state) + potential_energy(state);
}

namespace {

struct Deriv {
    std::vector<Vec3> dr;
    std::vector<Vec3> dv;
};

Deriv derivative(const std::vector<Vec3>& r, const std::vector<Vec3>& v, const Masses& m) {
    return {v, newtonian_accelerations(r, m)};
}

double min_pair_distance(const std::vector<Vec3>& r) {
    double d = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < r.size(); ++i)
        for (size_t j = i + 1; j < r.size(); ++j) d = std::min(d, (r[i] - r[j]).norm());
    return d;
}

std::vector<Vec3> axpy(const std::vector<Vec3>& base, double h, const std::vector<Vec3>& dir) {
    std::vector<Vec3> out = base;
    for (size_t i = 0; i < out.size(); ++i) out[i] += h * dir[i];
    return out;
}

void rk4_step(std::vector<Vec3>& r, std::vector<Vec3>& v, double dt, const Masses& m) {
    Deriv k1 = derivative(r, v, m);
    Deriv k2 = derivative(axpy(r, 0.5 * dt, k1.dr), axpy(v, 0.5 * dt, k1.dv), m);
    Deriv k3 = derivative(axpy(r, 0.5 * dt, k2.dr), axpy(v, 0.5 * dt, k2.dv), m);
    Deriv k4 = derivative(axpy(r, dt, k3.dr), axpy(v, dt, k3.dv), m);
    for (size_t i = 0; i < r.size(); ++i) {
        r[i] += dt / 6.0 * (k1.dr[i] + 2.0 * (k2.dr[i] + k3.dr[i]) + k4.dr[i]);
        v[i] += dt / 6.0 * (k1.dv[i] + 2.0 * (k2.dv[i] + k3.dv[i]) + k4.dv[i]);
    }
}

// Dormand-Prince 5(4) embedded pair.
struct DopriResult {
    bool accepted = false;
    double error = 0.0;
    std::vector<Vec3> r;
    std::vector<Vec3> v;
};

DopriResult dopri_attempt(const std::vector<Vec3>& r, const std::vector<Vec3>& v, double h,
                          const Masses& m, double rel_tol) {
    static const double a[7][6] = {
        {},
        {1.0 / 5},
        {3.0 / 40, 9.0 / 40},
        {44.0 / 45, -56.0 / 15, 32.0 / 9},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
        {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
    };
    // b5 - b4: error estimate weights
    static const double e[7] = {71.0 / 57600,      0.0,         -71.0 / 16695, 71.0 / 1920,
                                -17253.0 / 339200, 22.0 / 525,  -1.0 / 40};

    const size_t n = r.size();
    DopriResult res;
    std::vector<Deriv> k(7);
    k[0] = derivative(r, v, m);
    for (int stage = 1; stage < 7; ++stage) {
        std::vector<Vec3> rs = r, vs = v;
        for (int prev = 0; prev < stage; ++prev) {
            if (a[stage][prev] == 0.0) continue;
            for (size_t i = 0; i < n; ++i) {
                rs[i] += h * a[stage][prev] * k[static_cast<size_t>(prev)].dr[i];
                vs[i] += h * a[stage][prev] * k[static_cast<size_t>(prev)].dv[i];
            }
        }
        if (stage == 6) {
            // FSAL: the last stage is evaluated at the 5th-order solution
            res.r = rs;
            res.v = vs;
        }
        k[static_cast<size_t>(stage)] = derivative(rs, vs, m);
    }

    double scale = 0.0;
    for (size_t i = 0; i < n; ++i)
        scale = std::max({scale, r[i].norm(), v[i].norm()});
    double err2 = 0.0;
    for (size_t i = 0; i < n; ++i) {
        Vec3 er, ev;
        er += e[0] * k[0].dr[i];
        ev += e[0] * k[0].dv[i];
        for (int s = 2; s < 7; ++s) {
            er += e[s] * k[static_cast<size_t>(s)].dr[i];
            ev += e[s] * k[static_cast<size_t>(s)].dv[i];
        }
        err2 += (h * er).norm2() + (h * ev).norm2();
    }
    double tol = rel_tol * std::max(scale, 1e-30);
    res.error = std::sqrt(err2 / (2.0 * static_cast<double>(n))) / tol;
    res.accepted = res.error <= 1.0;
    return res;
}

TrajectoryDiagnostics diagnose(const std::vector<TrajectorySample>& samples, const Masses& m,
                               int dim) {
    TrajectoryDiagnostics diag;
    if (samples.size() < 1) return diag;
    const int n = m.size();
    const int np = pair_count(n);
    const TrajectorySample& s0 = samples.front();

    std::vector<double> q0(static_cast<size_t>(np));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            q0[static_cast<size_t>(pair_index(i, j, n))] =
                (s0.positions[static_cast<size_t>(i)] - s0.positions[static_cast<size_t>(j)]).norm();

    auto momenta = [&](const TrajectorySample& s) {
        std::vector<Vec3> l(static_cast<size_t>(np));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                Vec3 qij = s.positions[static_cast<size_t>(i)] - s.positions[static_cast<size_t>(j)];
                Vec3 qdot = s.velocities[static_cast<size_t>(i)] - s.velocities[static_cast<size_t>(j)];
                l[static_cast<size_t>(pair_index(i, j, n))] = cross(qij, m.mu(i, j) * qdot);
            }
        return l;
    };
    std::vector<Vec3> l0 = momenta(s0);
    Vec3 l0_total;
    for (const Vec3& l : l0) l0_total += l;

    double lambda0 = 0.0;
    try {
        lambda0 = lambda_fit(Configuration(dim, s0.positions), m).lambda;
    } catch (const std::exception&) {
        double qmin = min_pair_distance(s0.positions);
        lambda0 = m.grav() * m.total() / (qmin * qmin * qmin);
    }
    double l_ref = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            l_ref += m.mu(i, j) * q0[static_cast<size_t>(pair_index(i, j, n))] *
                     q0[static_cast<size_t>(pair_index(i, j, n))] * std::sqrt(std::abs(lambda0));
    const double eps_floor = std::numeric_limits<double>::epsilon() * l_ref;

    diag.pair_momentum_drift.assign(static_cast<size_t>(np), 0.0);

    DynamicState probe{0.0, dim, s0.positions, s0.velocities, m};
    const double e0 = total_energy(probe);

    for (const TrajectorySample& s : samples) {
        double smin = std::numeric_limits<double>::infinity();
        double smax = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                double q = (s.positions[static_cast<size_t>(i)] - s.positions[static_cast<size_t>(j)])
                               .norm();
                double rel = q / q0[static_cast<size_t>(pair_index(i, j, n))];
                smin = std::min(smin, rel);
                smax = std::max(smax, rel);
            }
        diag.max_shape_deviation = std::max(diag.max_shape_deviation, smax / smin - 1.0);

        std::vector<Vec3> l = momenta(s);
        Vec3 l_total;
        for (const Vec3& li : l) l_total += li;
        for (int idx = 0; idx < np; ++idx) {
            double drift = (l[static_cast<size_t>(idx)] - l0[static_cast<size_t>(idx)]).norm() /
                           (l0[static_cast<size_t>(idx)].norm() + eps_floor);
            diag.pair_momentum_drift[static_cast<size_t>(idx)] =
                std::max(diag.pair_momentum_drift[static_cast<size_t>(idx)], drift);
        }
        double tot_drift = (l_total - l0_total).norm() / (l0_total.norm() + eps_floor);
        diag.total_momentum_drift = std::max(diag.total_momentum_drift, tot_drift);

        probe.positions = s.positions;
        probe.velocities = s.velocities;
        diag.energy_drift =
            std::max(diag.energy_drift, std::abs(total_energy(probe) - e0) / std::abs(e0));

        try {
            diag.lambda_history.emplace_back(s.t, lambda_fit(Configuration(dim, s.positions), m).lambda);
        } catch (const std::exception&) {
            // near-collision sample; skip the lambda record
        }
    }
    for (double d : diag.pair_momentum_drift)
        diag.max_pair_momentum_drift = std::max(diag.max_pair_momentum_drift, d);
    return diag;
}

}  // namespace

Trajectory integrate(const DynamicState& initial, const IntegrationOptions& options) {
    if (!(options.dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (options.steps < 1) throw std::invalid_argument("steps must be positive");

    std::vector<TrajectorySample> samples;
    bool collided = false;
    bool stopped_at_scale = false;

    std::vector<Vec3> r = initial.positions;
    std::vector<Vec3> v = initial.velocities;
    const Masses& m = initial.masses;
    double t = initial.time;

    const double q12_init = (r[0] - r[1]).norm();
    const double dmin_init = min_pair_distance(r);
    const double t_end = initial.time + options.dt * static_cast<double>(options.steps);

    samples.push_back({t, r, v});

    auto record = [&](long step) {
        if (options.sample_stride > 0 && step % options.sample_stride == 0)
            samples.push_back({t, r, v});
    };
    auto hit_stop = [&]() {
        if (options.stop_scale > 0.0 && (r[0] - r[1]).norm() <= options.stop_scale * q12_init) {
            stopped_at_scale = true;
            return true;
        }
        if (min_pair_distance(r) < options.collision_fraction * dmin_init) {
            collided = true;
            return true;
        }
        return false;
    };

    if (options.method == Integrator::Rk4) {
        for (long step = 1; step <= options.steps; ++step) {
            rk4_step(r, v, options.dt, m);
            t += options.dt;
            if (hit_stop()) {
                samples.push_back({t, r, v});
                break;
            }
            record(step);
        }
    } else {
        double h = options.dt;
        const double h_min = options.dt * 1e-12;
        long accepted = 0;
        while (t < t_end && accepted < options.steps) {
            if (t + h > t_end) h = t_end - t;
            DopriResult res = dopri_attempt(r, v, h, m, options.rel_tol);
            double factor = 0.9 * std::pow(std::max(res.error, 1e-10), -0.2);
            factor = std::clamp(factor, 0.2, 5.0);
            if (res.accepted) {
                r = std::move(res.r);
                v = std::move(res.v);
                t += h;
                ++accepted;
                if (hit_stop()) {
                    samples.push_back({t, r, v});
                    break;
                }
                record(accepted);
            }
            h *= factor;
            if (h < h_min) throw std::runtime_error("adaptive step size underflow");
        }
    }

    if (samples.back().t != t) samples.push_back({t, r, v});
    TrajectoryDiagnostics diag = diagnose(samples, m, initial.dim);
    return Trajectory{std::move(samples),
                      DynamicState{t, initial.dim, std::move(r), std::move(v), m},
                      std::move(diag), collided, stopped_at_scale};
}

namespace {

DynamicState com_frame_state(const Configuration& config, const Masses& masses,
                             std::vector<Vec3> velocities) {
    Vec3 com = config.center_of_mass(masses);
    Vec3 vcom;
    for (int i = 0; i < masses.size(); ++i) vcom += masses[i] * velocities[static_cast<size_t>(i)];
    vcom = vcom / masses.total();

    std::vector<Vec3> r(config.positions());
    for (int i = 0; i < masses.size(); ++i) {
        r[static_cast<size_t>(i)] -= com;
        velocities[static_cast<size_t>(i)] -= vcom;
    }
    return DynamicState{0.0, config.dim(), std::move(r), std::move(velocities), masses};
}

}  // namespace

DynamicState rigid_rotation_init(const Configuration& config, const Masses& masses,
                                 double oracle_tol) {
    if (!config.planar()) throw std::domain_error("rigid rotation requires a planar configuration");
    LambdaFit fit = lambda_fit(config, masses);
    if (!(fit.max_relative_deviation < oracle_tol))
        throw std::domain_error("configuration is not central: oracle deviation " +
                                std::to_string(fit.max_relative_deviation));
    const double omega = std::sqrt(fit.lambda);
    const Vec3 axis = config.plane_normal();
    const Vec3 com = config.center_of_mass(masses);

    std::vector<Vec3> v(static_cast<size_t>(config.size()));
    for (int i = 0; i < config.size(); ++i)
        v[static_cast<size_t>(i)] = omega * cross(axis, config.position(i) - com);
    return com_frame_state(config, masses, std::move(v));
}

DynamicState homothetic_init(const Configuration& config, const Masses& masses, double oracle_tol) {
    LambdaFit fit = lambda_fit(config, masses);
    if (!(fit.max_relative_deviation < oracle_tol))
        throw std::domain_error("configuration is not central: oracle deviation " +
                                std::to_string(fit.max_relative_deviation));
    return com_frame_state(config, masses, std::vector<Vec3>(static_cast<size_t>(config.size())));
}

std::vector<double> pair_momentum_drift(const Trajectory& trajectory) {
    TrajectoryDiagnostics diag =
        diagnose(trajectory.samples, trajectory.final_state.masses, trajectory.final_state.dim);
    return diag.pair_momentum_drift;
}

}  // namespace ccfour
