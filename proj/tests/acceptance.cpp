// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ccfour/centrality.hpp"
#include "ccfour/dynamics.hpp"
#include "ccfour/families.hpp"
#include "ccfour/geometry.hpp"

using namespace ccfour;

namespace {

constexpr double pi = std::numbers::pi;
using Rng = std::mt19937_64;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    int checks = 0;
    int failures = 0;

    void expect(bool ok, const std::string& what) {
        ++checks;
        if (!ok) {
            ++failures;
            pass = false;
            if (failures <= 4) detail << (failures > 1 ? "; " : "") << what;
        }
    }
};

// configurations accepted as central along the way; criterion 5 re-checks
// them against the mass-independent relations
std::vector<std::pair<Configuration, Masses>> central_pool;

double frac(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Masses random_masses4(Rng& rng, double G = 1.0) {
    std::uniform_real_distribution<double> u(std::log(0.1), std::log(10.0));
    return Masses({std::exp(u(rng)), std::exp(u(rng)), std::exp(u(rng)), std::exp(u(rng))}, G);
}

Configuration random_planar4(Rng& rng) {
    while (true) {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::vector<Vec3> r;
        for (int i = 0; i < 4; ++i) r.push_back({u(rng), u(rng), 0.0});
        bool ok = true;
        for (int i = 0; i < 4 && ok; ++i)
            for (int j = i + 1; j < 4; ++j)
                if ((r[static_cast<size_t>(i)] - r[static_cast<size_t>(j)]).norm() < 0.05) {
                    ok = false;
                    break;
                }
        if (ok)
            for (int i = 0; i < 4 && ok; ++i)
                for (int j = i + 1; j < 4 && ok; ++j)
                    for (int k = j + 1; k < 4; ++k) {
                        Vec3 a = r[static_cast<size_t>(j)] - r[static_cast<size_t>(i)];
                        Vec3 b = r[static_cast<size_t>(k)] - r[static_cast<size_t>(i)];
                        if (cross(a, b).norm() < 1e-3 * a.norm() * b.norm()) {
                            ok = false;
                            break;
                        }
                    }
        if (ok) return Configuration(2, std::move(r));
    }
}

// ---- criterion 1: tetrahedron lambda = GM/edge^3 ----
void criterion_1(Outcome& out) {
    Rng rng(1001);
    for (int rep = 0; rep < 50; ++rep) {
        double edge = frac(rng, 0.4, 3.0);
        Masses m = random_masses4(rng, frac(rng, 0.5, 2.0));
        FamilySolution tet = build_tetrahedron(m, edge);
        LambdaFit fit = lambda_fit(tet.config, tet.masses);
        double expected = m.grav() * m.total() / (edge * edge * edge);
        out.expect(std::abs(fit.lambda - expected) <= 1e-12 * expected, "lambda mismatch");
        out.expect(fit.max_relative_deviation < 1e-12, "oracle deviation too large");
        central_pool.emplace_back(tet.config, tet.masses);
    }
}

// ---- criterion 2: centered equilateral lambda = G(3m + 3^{3/2} m4)/side^3 ----
void criterion_2(Outcome& out) {
    Rng rng(1002);
    for (int rep = 0; rep < 50; ++rep) {
        double m = frac(rng, 0.1, 10.0);
        double m4 = frac(rng, 0.1, 10.0);
        double side = frac(rng, 0.4, 3.0);
        double G = frac(rng, 0.5, 2.0);
        FamilySolution sol = build_equilateral_centered(m, m4, side, G);
        LambdaFit fit = lambda_fit(sol.config, sol.masses);
        double expected = G * (3.0 * m + std::sqrt(27.0) * m4) / (side * side * side);
        out.expect(std::abs(fit.lambda - expected) <= 1e-12 * expected, "lambda mismatch");
        out.expect(fit.max_relative_deviation < 1e-12, "oracle deviation too large");
        central_pool.emplace_back(sol.config, sol.masses);
    }
}

// ---- criterion 3: family soundness sweep ----
void criterion_3(Outcome& out) {
    Rng rng(1003);
    auto admit = [&](const FamilySolution& sol, const char* family) {
        LambdaFit fit = lambda_fit(sol.config, sol.masses);
        out.expect(fit.max_relative_deviation < 1e-7,
                   std::string(family) + " oracle deviation " +
                       std::to_string(fit.max_relative_deviation));
        ResidualReport r = cc_residuals_four(sol.config, sol.masses);
        out.expect(r.max_normalized() < 1e-9,
                   std::string(family) + " residual " + std::to_string(r.max_normalized()));
        central_pool.emplace_back(sol.config, sol.masses);
    };

    int done = 0;
    while (done < 200) {
        double a = frac(rng, 1e-3, pi / 2 - 1e-3);
        double b = frac(rng, 1e-3, pi / 2 - 1e-3);
        if (!kite_convex_region(a, b)) continue;
        admit(build_kite_convex(a, b, frac(rng, 0.5, 2.0)), "kite-convex");
        ++done;
    }
    done = 0;
    while (done < 200) {
        double a = frac(rng, 1e-3, pi / 2 - 1e-3);
        double b = frac(rng, 1e-3, pi / 2 - 1e-3);
        if (!kite_concave_region(a, b)) continue;
        admit(build_kite_concave(a, b, frac(rng, 0.5, 2.0)), "kite-concave");
        ++done;
    }
    for (int k = 0; k < 200; ++k) {
        double a = pi / 6 + 1e-3 + (pi / 6 - 2e-3) * k / 199.0;
        admit(build_rhombus(a, frac(rng, 0.5, 2.0)), "rhombus");
    }
    for (int k = 0; k < 200; ++k) {
        double a = pi / 3 + 1e-3 + (pi / 6 - 2e-3) * k / 199.0;
        admit(build_trapezium_auto(a, frac(rng, 0.5, 2.0)), "trapezium");
    }
}

// ---- criterion 4: region sharpness just outside the boundaries ----
void criterion_4(Outcome& out) {
    Rng rng(1004);
    auto offset = [&]() { return frac(rng, 1e-6, 1e-3); };

    // convex kite: four boundary lines
    for (int k = 0; k < 200; ++k) {
        double e = offset();
        double a = 0, b = 0;
        switch (k % 4) {
            case 0: a = pi / 3 + e; b = frac(rng, pi / 9, pi / 3 - 1e-3); break;
            case 1: b = pi / 3 + e; a = frac(rng, pi / 9, pi / 3 - 1e-3); break;
            case 2: b = frac(rng, 0.1, pi / 6 - 1e-3); a = pi / 2 - 2 * b - e; break;
            default: a = frac(rng, 0.1, pi / 6 - 1e-3); b = pi / 2 - 2 * a - e; break;
        }
        bool admitted = kite_convex_region(a, b);
        double m1 = detail::kite_convex_m1_over_m2(a, b);
        double m4 = detail::kite_convex_m4_over_m2(a, b);
        bool formula_rejects = !(m1 > 0.0) || !(m4 > 0.0) || !std::isfinite(m1) || !std::isfinite(m4);
        out.expect(!admitted && formula_rejects, "convex kite boundary leak");
    }

    // concave kite: beta = pi/3 top, alpha = pi/3 split, the 2a-b = pi/2 line
    for (int k = 0; k < 200; ++k) {
        double e = offset();
        double a = 0, b = 0;
        switch (k % 4) {
            case 0: a = frac(rng, pi / 3 + 1e-3, 5 * pi / 12 - 1e-3); b = pi / 3 + e; break;
            case 1: a = pi / 3 - e; b = frac(rng, 2 * a - pi / 2 + 1e-3, pi / 3 - 1e-3); break;
            case 2: a = frac(rng, pi / 4 + 1e-3, pi / 3 - 1e-3); b = 2 * a - pi / 2 + e; break;
            default: a = frac(rng, pi / 3 + 1e-3, 5 * pi / 12 - 1e-3); b = 2 * a - pi / 2 - e; break;
        }
        if (!(b > 0 && b < a)) continue;
        bool admitted = kite_concave_region(a, b);
        double m1 = detail::kite_concave_m1_over_m2(a, b);
        double m4 = detail::kite_concave_m4_over_m2(a, b);
        bool formula_rejects = !(m1 > 0.0) || !(m4 > 0.0) || !std::isfinite(m1) || !std::isfinite(m4);
        out.expect(!admitted && formula_rejects, "concave kite boundary leak");
    }

    // rhombus: both interval ends
    for (int k = 0; k < 200; ++k) {
        double e = offset();
        double a = k % 2 == 0 ? pi / 6 - e : pi / 3 + e;
        double t = detail::rhombus_ratio_raw(a);
        bool domain_error_thrown = false;
        try {
            rhombus_ratio(a);
        } catch (const std::domain_error&) {
            domain_error_thrown = true;
        }
        out.expect(!(t > 0.0) && domain_error_thrown, "rhombus boundary leak");
    }

    // trapezium: the three region lines plus the alpha = pi/3 edge
    for (int k = 0; k < 200; ++k) {
        double e = offset();
        double a = 0, b = 0;
        switch (k % 4) {
            case 0: a = frac(rng, 2 * pi / 5 + 1e-3, pi / 2 - 1e-3); b = a / 2 + e; break;
            case 1: a = frac(rng, pi / 3 + 1e-3, 2 * pi / 5 - 1e-3); b = 3 * a - pi + e; break;
            case 2: a = frac(rng, pi / 3 + 1e-2, pi / 2 - 1e-3); b = (3 * a - pi) / 2 - e; break;
            default: a = pi / 3 - e; b = frac(rng, 1e-3, a / 2 - 1e-3); break;
        }
        if (!(b > 0 && b < a)) continue;
        bool admitted = trapezium_region(a, b);
        double ratio = trapezium_mass_ratio(a, b);
        bool formula_rejects = !(ratio > 0.0) || !std::isfinite(ratio);
        bool builder_rejects = false;
        try {
            build_trapezium(a, b, 1.0, 1.0);
        } catch (const std::domain_error&) {
            builder_rejects = true;
        }
        out.expect(!admitted && (formula_rejects || builder_rejects), "trapezium boundary leak");
    }
}

// ---- criterion 5: mass-independent relations ----
void criterion_5(Outcome& out) {
    // necessity on every central configuration collected so far
    for (const auto& [config, masses] : central_pool) {
        ResidualReport dz = dziobek_residuals(DistanceSet::from_configuration(config));
        for (const ResidualEntry& e : dz.entries)
            out.expect(std::abs(e.normalized) < 1e-10, "relation " + e.label + " violated");
    }

    // special case p12 = p13 = p23 with generic remaining distances: the
    // stated expectation is that (a)-(c) hold while (d) is violated by more
    // than 1e-3 normalized
    Rng rng(1005);
    for (int rep = 0; rep < 20; ++rep) {
        double side = frac(rng, 0.5, 2.0);
        DistanceSet d(4);
        d.set(0, 1, side);
        d.set(0, 2, side);
        d.set(1, 2, side);
        d.set(0, 3, frac(rng, 0.5, 2.0));
        d.set(1, 3, frac(rng, 0.5, 2.0));
        d.set(2, 3, frac(rng, 0.5, 2.0));
        ResidualReport dz = dziobek_residuals(d);
        out.expect(std::abs(dz.entries[0].normalized) < 1e-12, "(a) nonzero in the special case");
        out.expect(std::abs(dz.entries[1].normalized) < 1e-12, "(b) nonzero in the special case");
        out.expect(std::abs(dz.entries[2].normalized) < 1e-12, "(c) nonzero in the special case");
        out.expect(std::abs(dz.entries[3].normalized) > 1e-3,
                   "(d) expected > 1e-3 but measured " + std::to_string(dz.entries[3].normalized));
    }
}

// ---- criterion 6: rhombus inversion ----
void criterion_6(Outcome& out) {
    const int grid = 10000;
    double prev = std::numeric_limits<double>::infinity();
    bool monotone = true;
    for (int k = 0; k < grid; ++k) {
        double a = (pi / 6 + 1e-6) + (pi / 6 - 2e-6) * k / (grid - 1);
        double t = rhombus_ratio(a);
        if (!(t < prev)) monotone = false;
        prev = t;
    }
    out.expect(monotone, "T not strictly decreasing");

    Rng rng(1006);
    for (int rep = 0; rep < 50; ++rep) {
        double a = frac(rng, pi / 6 + 1e-4, pi / 3 - 1e-4);
        double back = rhombus_angle(rhombus_ratio(a));
        out.expect(std::abs(back - a) <= 1e-10, "round-trip error");
    }
    out.expect(std::abs(rhombus_ratio(pi / 4) - 1.0) <= 1e-15, "T(pi/4) != 1");
}

// ---- criterion 7: trapezium curve and the equal-mass solve ----
void criterion_7(Outcome& out) {
    for (int k = 0; k < 100; ++k) {
        double a = (pi / 3 + 1e-3) + (pi / 6 - 2e-3) * k / 99.0;
        double b;
        try {
            b = trapezium_beta(a);
        } catch (const std::runtime_error&) {
            continue;  // criterion applies where the root brackets
        }
        out.expect(trapezium_region(a, b), "beta(alpha) outside the region");
        FamilySolution sol = build_trapezium(a, b, 1.0, 1.0);
        LambdaFit fit = lambda_fit(sol.config, sol.masses);
        out.expect(fit.max_relative_deviation < 1e-7, "trapezium not oracle-central");
        central_pool.emplace_back(sol.config, sol.masses);
    }

    auto [a_eq, b_eq] = trapezium_invert(1.0);
    FamilySolution sol = build_trapezium(a_eq, b_eq, 1.0, 1.0);
    out.expect(lambda_fit(sol.config, sol.masses).max_relative_deviation < 1e-7,
               "equal-mass solution not oracle-central");
    for (int i = 0; i < 4; ++i)
        out.expect(std::abs(sol.masses[i] - 1.0) <= 1e-9, "masses not equal at the solve point");
}

// ---- criterion 8: no central non-rhombic parallelogram ----
void criterion_8(Outcome& out) {
    Rng rng(1008);
    double min_dev = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 20; ++i) {
        double side_ratio = 1.05 + (3.0 - 1.05) * i / 19.0;
        for (int j = 0; j < 20; ++j) {
            double theta = (pi / 9) + (pi / 2 - pi / 9) * j / 19.0;
            Vec3 u{1.0, 0.0, 0.0};
            Vec3 w{side_ratio * std::cos(theta), side_ratio * std::sin(theta), 0.0};
            Configuration par(2, {{0, 0}, u, u + w, w});
            for (int rep = 0; rep < 20; ++rep) {
                Masses m = random_masses4(rng);
                double dev = lambda_fit(par, m).max_relative_deviation;
                min_dev = std::min(min_dev, dev);
                ParallelogramNote note = parallelogram_check(par, m, 1e-4);
                out.expect(note.parallelogram && !note.central, "central non-rhombic parallelogram");
            }
        }
    }
    out.expect(min_dev > 1e-4, "deviation floor " + std::to_string(min_dev));

    for (int k = 0; k < 10; ++k) {
        FamilySolution rh = build_rhombus(pi / 6 + 1e-2 + (pi / 6 - 2e-2) * k / 9.0);
        ParallelogramNote note = parallelogram_check(rh.config, rh.masses);
        out.expect(note.parallelogram && note.rhombus && note.central, "rhombus family rejected");
    }
}

// ---- criterion 9: dynamics ----
void criterion_9(Outcome& out) {
    auto rotate_run = [&](const FamilySolution& sol, const char* name) {
        DynamicState s0 = rigid_rotation_init(sol.config, sol.masses);
        double omega = std::sqrt(lambda_fit(sol.config, sol.masses).lambda);
        IntegrationOptions opt;
        opt.steps = 10000;
        opt.dt = 2.0 * pi / omega / 10000.0;
        opt.sample_stride = 100;
        Trajectory traj = integrate(s0, opt);
        out.expect(traj.diagnostics.max_shape_deviation < 1e-6,
                   std::string(name) + " shape deviation " +
                       std::to_string(traj.diagnostics.max_shape_deviation));
        out.expect(traj.diagnostics.max_pair_momentum_drift < 1e-8,
                   std::string(name) + " momentum drift " +
                       std::to_string(traj.diagnostics.max_pair_momentum_drift));
        for (const TrajectorySample& s : traj.samples) {
            DynamicState probe{s.t, s0.dim, s.positions, s.velocities, sol.masses};
            double ks = kinetic_energy_standard(probe);
            double kp = kinetic_energy_pairspace(probe);
            out.expect(std::abs(kp - ks) <= 1e-12 * std::max(1.0, std::abs(ks)),
                       std::string(name) + " kinetic identity");
        }
    };

    rotate_run(build_equilateral_centered(1.0, 2.0, 1.0), "centered-equilateral");
    rotate_run(build_rhombus(pi / 4), "square");
    rotate_run(build_trapezium_auto(5.0 * pi / 12.0, 1.0, 1.0), "trapezium");

    FamilySolution tet = build_tetrahedron(Masses({1, 1, 1, 1}), 1.0);
    DynamicState s0 = homothetic_init(tet.config, tet.masses);
    IntegrationOptions opt;
    opt.method = Integrator::DopriAdaptive;
    opt.dt = 1e-3;
    opt.steps = 200000;
    opt.rel_tol = 1e-12;
    opt.sample_stride = 1;
    opt.stop_scale = 0.5;
    Trajectory traj = integrate(s0, opt);
    out.expect(traj.stopped_at_scale, "collapse did not reach half size");
    out.expect(traj.diagnostics.max_shape_deviation < 1e-6,
               "collapse shape deviation " + std::to_string(traj.diagnostics.max_shape_deviation));
    for (const TrajectorySample& s : traj.samples) {
        DynamicState probe{s.t, 3, s.positions, s.velocities, tet.masses};
        double ks = kinetic_energy_standard(probe);
        double kp = kinetic_energy_pairspace(probe);
        out.expect(std::abs(kp - ks) <= 1e-12 * std::max(1.0, std::abs(ks)),
                   "collapse kinetic identity");
    }
}

// ---- criterion 10: oracle/residual equivalence ----
void criterion_10(Outcome& out) {
    Rng rng(1010);
    for (int rep = 0; rep < 1000; ++rep) {
        Configuration c = random_planar4(rng);
        Masses m = random_masses4(rng);
        bool by_residual = cc_residuals_four(c, m).max_normalized() < default_residual_tol;
        bool by_oracle = lambda_fit(c, m).max_relative_deviation < default_oracle_tol;
        out.expect(by_residual == by_oracle, "classification disagreement");
    }
    // both classifiers also accept known central configurations
    for (const auto& [config, masses] : central_pool) {
        bool by_residual = cc_residuals_four(config, masses).max_normalized() < default_residual_tol;
        bool by_oracle = lambda_fit(config, masses).max_relative_deviation < default_oracle_tol;
        out.expect(by_residual == by_oracle, "classification disagreement on a central instance");
    }
}

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<void(Outcome&)> fn;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "tetrahedron centrality, lambda = GM/edge^3", 1.0, criterion_1},
        {2, "centered equilateral, lambda = G(3m + 3^{3/2} m4)/side^3", 1.0, criterion_2},
        {3, "family soundness sweep (200 per family)", 30.0, criterion_3},
        {4, "region sharpness just outside each boundary", 10.0, criterion_4},
        {5, "mass-independent relations: necessity and the equilateral special case", 30.0,
         criterion_5},
        {6, "rhombus inversion: monotone, round-trip, T(pi/4) = 1", 30.0, criterion_6},
        {7, "trapezium curve containment and equal-mass solve", 30.0, criterion_7},
        {8, "parallelogram impossibility vs rhombus family", 60.0, criterion_8},
        {9, "dynamics: rotations, collapse, kinetic identity", 60.0, criterion_9},
        {10, "oracle/residual equivalence on 1000 random configurations", 60.0, criterion_10},
    };

    int failed = 0;
    for (const Criterion& c : criteria) {
        Outcome out;
        auto start = std::chrono::steady_clock::now();
        try {
            c.fn(out);
        } catch (const std::exception& e) {
            out.expect(false, std::string("exception: ") + e.what());
        }
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (seconds > c.budget_seconds)
            out.expect(false, "runtime " + std::to_string(seconds) + "s over budget");

        std::printf("[%s] criterion %2d: %s (%d checks, %.2fs)%s%s\n", out.pass ? "PASS" : "FAIL",
                    c.id, c.name, out.checks, seconds, out.pass ? "" : " -- ",
                    out.pass ? "" : out.detail.str().c_str());
        if (!out.pass) ++failed;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
                criteria.size());
    return failed;
}
