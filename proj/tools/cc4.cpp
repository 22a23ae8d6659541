// cc4: build, classify, verify and simulate four-body central configurations.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ccfour/centrality.hpp"
#include "ccfour/dynamics.hpp"
#include "ccfour/families.hpp"
#include "ccfour/geometry.hpp"
#include "ccfour/io.hpp"

using nlohmann::json;
using namespace ccfour;

namespace {

constexpr double pi = std::numbers::pi;

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        out << j.dump(2) << "\n";
    }
}

std::vector<double> parse_mass_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

struct CheckArgs {
    std::string config_path;
    double tol_residual = default_residual_tol;
    double tol_oracle = default_oracle_tol;
    std::string out;
};

int run_check(const CheckArgs& args, bool oracle_only) {
    io::ConfigFile in = io::read_configuration(args.config_path);
    LambdaFit fit = lambda_fit(in.config, in.masses);

    json report;
    report["config"] = io::configuration_json(in.config, in.masses);
    report["lambda_fit"] = io::lambda_fit_json(fit);

    bool central = fit.max_relative_deviation < args.tol_oracle;
    if (!oracle_only) {
        ResidualReport general = cc_residuals_general(in.config, in.masses);
        report["residuals_general"] = io::residual_report_json(general);
        if (in.config.size() == 4) {
            ResidualReport four = cc_residuals_four(in.config, in.masses);
            ResidualReport dz = dziobek_residuals(DistanceSet::from_configuration(in.config));
            ShapeClass shape = classify(in.config);
            report["residuals_4cc"] = io::residual_report_json(four);
            report["dziobek"] = io::residual_report_json(dz);
            report["shape"] = io::shape_json(shape);
            if (!four.collinear_vacuous && !(four.max_normalized() < args.tol_residual))
                central = false;
        }
    }
    report["central"] = central;
    report["tolerances"] = json{{"residual", args.tol_residual}, {"oracle", args.tol_oracle}};
    emit(report, args.out);
    return central ? 0 : 2;
}

int run_region(const std::string& family, int grid, const std::string& out,
               const std::string& curve_out) {
    if (grid < 2) throw std::invalid_argument("grid resolution must be >= 2");

    auto open = [](const std::string& path) {
        auto f = std::make_unique<std::ofstream>(path);
        if (!*f) throw std::runtime_error("cannot write " + path);
        f->precision(17);
        return f;
    };

    if (family == "rhombus") {
        auto f = open(out.empty() ? "rhombus_curve.csv" : out);
        *f << "alpha,beta,mass_ratio\n";
        for (int k = 0; k < grid; ++k) {
            double a = pi / 6.0 + (pi / 6.0) * (k + 0.5) / grid;
            *f << a << "," << a << "," << rhombus_ratio(a) << "\n";
        }
        return 0;
    }

    double alo = 0.0, ahi = pi / 2.0, blo = 0.0, bhi = pi / 2.0;
    if (family == "trapezium") {
        alo = pi / 3.0;
        ahi = pi / 2.0;
        blo = 0.0;
        bhi = pi / 4.0;
    }

    auto f = open(out.empty() ? family + "_region.csv" : out);
    *f << "alpha,beta,allowed,m1_ratio,m4_ratio\n";
    for (int i = 0; i < grid; ++i) {
        double a = alo + (ahi - alo) * (i + 0.5) / grid;
        for (int j = 0; j < grid; ++j) {
            double b = blo + (bhi - blo) * (j + 0.5) / grid;
            bool ok;
            std::string r1, r4;
            if (family == "kite-convex") {
                ok = kite_convex_region(a, b);
                if (ok) {
                    r1 = std::to_string(detail::kite_convex_m1_over_m2(a, b));
                    r4 = std::to_string(detail::kite_convex_m4_over_m2(a, b));
                }
            } else if (family == "kite-concave") {
                ok = kite_concave_region(a, b);
                if (ok) {
                    r1 = std::to_string(detail::kite_concave_m1_over_m2(a, b));
                    r4 = std::to_string(detail::kite_concave_m4_over_m2(a, b));
                }
            } else if (family == "trapezium") {
                ok = trapezium_region(a, b);
                if (ok) r1 = std::to_string(trapezium_mass_ratio(a, b));
            } else {
                throw std::invalid_argument("region supports kite-convex, kite-concave, trapezium, rhombus");
            }
            *f << a << "," << b << "," << (ok ? 1 : 0) << "," << r1 << "," << r4 << "\n";
        }
    }

    if (family == "trapezium" && !curve_out.empty()) {
        auto c = open(curve_out);
        *c << "alpha,beta,mass_ratio\n";
        for (int k = 0; k < grid; ++k) {
            double a = pi / 3.0 + 1e-3 + (pi / 2.0 - pi / 3.0 - 2e-3) * k / (grid - 1);
            int brackets = 0;
            try {
                double b = trapezium_beta(a, &brackets);
                if (brackets > 1)
                    std::cerr << "warning: " << brackets << " sign changes at alpha=" << a << "\n";
                *c << a << "," << b << "," << trapezium_mass_ratio(a, b) << "\n";
            } catch (const std::runtime_error& e) {
                std::cerr << "warning: no root at alpha=" << a << ": " << e.what() << "\n";
            }
        }
    }
    return 0;
}

struct SimulateArgs {
    std::string config_path;
    std::string mode = "rotate";
    long steps = 10000;
    double dt = 0.0;  // 0: derived from the period
    double periods = 1.0;
    double collapse_scale = 0.5;
    double tol_shape = 1e-6;
    double tol_oracle = default_oracle_tol;
    std::string out;
    std::string summary;
};

int run_simulate(const SimulateArgs& args) {
    io::ConfigFile in = io::read_configuration(args.config_path);
    LambdaFit fit = lambda_fit(in.config, in.masses);
    if (!(fit.max_relative_deviation < args.tol_oracle)) {
        std::cerr << "configuration is not central: oracle deviation " << fit.max_relative_deviation
                  << "\n";
        return 2;
    }

    DynamicState state =
        args.mode == "rotate"
            ? rigid_rotation_init(in.config, in.masses, args.tol_oracle)
            : homothetic_init(in.config, in.masses, args.tol_oracle);

    IntegrationOptions opt;
    const double omega = std::sqrt(fit.lambda);
    if (args.mode == "rotate") {
        opt.method = Integrator::Rk4;
        const double period = 2.0 * pi / omega;
        opt.steps = args.steps;
        opt.dt = args.dt > 0.0 ? args.dt : args.periods * period / static_cast<double>(args.steps);
        opt.sample_stride = std::max<long>(1, args.steps / 200);
    } else if (args.mode == "collapse") {
        opt.method = Integrator::DopriAdaptive;
        opt.dt = args.dt > 0.0 ? args.dt : 0.01 / omega;
        opt.steps = args.steps;
        opt.stop_scale = args.collapse_scale;
        opt.sample_stride = 1;
        // generous horizon; the scale stop triggers first
        opt.steps = std::max<long>(opt.steps, 200000);
    } else {
        throw std::invalid_argument("mode must be rotate or collapse");
    }

    Trajectory traj = integrate(state, opt);
    if (!args.out.empty()) io::write_trajectory_csv(args.out, traj, state.dim);

    json summary = io::diagnostics_json(traj.diagnostics);
    summary["mode"] = args.mode;
    summary["collided"] = traj.collided;
    summary["stopped_at_scale"] = traj.stopped_at_scale;
    emit(summary, args.summary);

    return traj.diagnostics.max_shape_deviation < args.tol_shape ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"four-body central configurations: build, check, invert, region, simulate"};
    app.require_subcommand(1);

    bool deg = false;
    app.add_flag("--deg", deg, "interpret bare angle values as degrees");

    // check / oracle
    CheckArgs check_args;
    auto* cmd_check = app.add_subcommand("check", "verify centrality of a configuration file");
    cmd_check->add_option("config", check_args.config_path, "configuration JSON")->required();
    cmd_check->add_option("--tol", check_args.tol_residual, "normalized residual tolerance");
    cmd_check->add_option("--tol-oracle", check_args.tol_oracle, "oracle deviation tolerance");
    cmd_check->add_option("--out", check_args.out, "write the JSON report here");

    CheckArgs oracle_args;
    auto* cmd_oracle = app.add_subcommand("oracle", "acceleration-based centrality fit only");
    cmd_oracle->add_option("config", oracle_args.config_path, "configuration JSON")->required();
    cmd_oracle->add_option("--tol-oracle", oracle_args.tol_oracle, "oracle deviation tolerance");
    cmd_oracle->add_option("--out", oracle_args.out, "write the JSON report here");

    // build
    std::string family, alpha_s, beta_s, masses_s;
    double scale = 1.0, edge = 1.0, side = 1.0, m_common = 1.0, m_center = 1.0, G = 1.0;
    double ratio = 0.0;
    std::string build_out;
    auto* cmd_build = app.add_subcommand("build", "emit a family configuration as JSON");
    cmd_build->add_option("family", family,
                          "tetrahedron|equilateral|kite-convex|kite-concave|rhombus|trapezium")
        ->required();
    cmd_build->add_option("--alpha", alpha_s, "angle (radians, or NNdeg)");
    cmd_build->add_option("--beta", beta_s, "angle (radians, or NNdeg)");
    cmd_build->add_option("--scale", scale, "q_12 scale");
    cmd_build->add_option("--edge", edge, "tetrahedron edge");
    cmd_build->add_option("--side", side, "equilateral triangle side");
    cmd_build->add_option("--m", m_common, "outer mass (equilateral)");
    cmd_build->add_option("--m4", m_center, "center mass (equilateral)");
    cmd_build->add_option("--masses", masses_s, "comma-separated masses (tetrahedron)");
    cmd_build->add_option("--ratio", ratio, "mass ratio (rhombus m1/m2)");
    cmd_build->add_option("--G", G, "gravitational constant");
    cmd_build->add_option("--out", build_out, "write configuration here");

    // invert
    std::string inv_family;
    double inv_ratio = 1.0;
    std::string inv_out;
    auto* cmd_invert = app.add_subcommand("invert", "mass ratio -> angles (rhombus, trapezium)");
    cmd_invert->add_option("family", inv_family, "rhombus|trapezium")->required();
    cmd_invert->add_option("--ratio", inv_ratio, "mass ratio (m1/m2 for rhombus, m2/m1 for trapezium)")
        ->required();
    cmd_invert->add_option("--out", inv_out, "write the JSON result here");

    // region
    std::string reg_family, reg_out, reg_curve_out;
    int reg_grid = 256;
    auto* cmd_region = app.add_subcommand("region", "emit admissible-angle grids as CSV");
    cmd_region->add_option("family", reg_family, "kite-convex|kite-concave|trapezium|rhombus")
        ->required();
    cmd_region->add_option("--grid", reg_grid, "grid resolution per axis");
    cmd_region->add_option("--out", reg_out, "grid CSV path");
    cmd_region->add_option("--curve-out", reg_curve_out, "trapezium beta(alpha) curve CSV path");

    // simulate
    SimulateArgs sim_args;
    auto* cmd_simulate = app.add_subcommand("simulate", "integrate a central configuration");
    cmd_simulate->add_option("config", sim_args.config_path, "configuration JSON")->required();
    cmd_simulate->add_option("--mode", sim_args.mode, "rotate|collapse")->required();
    cmd_simulate->add_option("--steps", sim_args.steps, "step count");
    cmd_simulate->add_option("--dt", sim_args.dt, "step size (default: derived)");
    cmd_simulate->add_option("--periods", sim_args.periods, "rotation periods to integrate");
    cmd_simulate->add_option("--collapse-scale", sim_args.collapse_scale, "stop at this size fraction");
    cmd_simulate->add_option("--tol-shape", sim_args.tol_shape, "shape deviation threshold");
    cmd_simulate->add_option("--tol-oracle", sim_args.tol_oracle, "oracle deviation tolerance");
    cmd_simulate->add_option("--out", sim_args.out, "trajectory CSV path");
    cmd_simulate->add_option("--summary", sim_args.summary, "diagnostics JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (cmd_check->parsed()) return run_check(check_args, false);
        if (cmd_oracle->parsed()) return run_check(oracle_args, true);

        if (cmd_build->parsed()) {
            auto angle = [&](const std::string& s) { return io::parse_angle(s, deg); };
            std::optional<FamilySolution> sol;
            if (family == "tetrahedron") {
                std::vector<double> m = masses_s.empty() ? std::vector<double>{1, 1, 1, 1}
                                                         : parse_mass_list(masses_s);
                sol = build_tetrahedron(Masses(m, G), edge);
            } else if (family == "equilateral" || family == "equilateral-centered") {
                sol = build_equilateral_centered(m_common, m_center, side, G);
            } else if (family == "kite-convex") {
                if (alpha_s.empty() || beta_s.empty())
                    throw std::invalid_argument("kite-convex needs --alpha and --beta");
                sol = build_kite_convex(angle(alpha_s), angle(beta_s), scale, G);
            } else if (family == "kite-concave") {
                if (alpha_s.empty() || beta_s.empty())
                    throw std::invalid_argument("kite-concave needs --alpha and --beta");
                sol = build_kite_concave(angle(alpha_s), angle(beta_s), scale, G);
            } else if (family == "rhombus") {
                double a = !alpha_s.empty() ? angle(alpha_s)
                                            : (ratio > 0.0 ? rhombus_angle(ratio)
                                                           : throw std::invalid_argument(
                                                                 "rhombus needs --alpha or --ratio"));
                sol = build_rhombus(a, scale, G);
            } else if (family == "trapezium") {
                if (alpha_s.empty()) throw std::invalid_argument("trapezium needs --alpha");
                double a = angle(alpha_s);
                if (beta_s.empty()) {
                    sol = build_trapezium_auto(a, scale, G);
                } else {
                    double b = angle(beta_s);
                    sol = build_trapezium(a, b, scale, G);
                    if (std::abs(detail::trapezium_angle_residual(a, b)) > 1e-9)
                        std::cerr << "warning: (alpha, beta) is off the solution curve; the "
                                     "configuration will not be central\n";
                }
            } else {
                throw std::invalid_argument("unknown family: " + family);
            }
            emit(io::configuration_json(sol->config, sol->masses), build_out);
            return 0;
        }

        if (cmd_invert->parsed()) {
            json result;
            if (inv_family == "rhombus") {
                double a = rhombus_angle(inv_ratio);
                result = {{"family", "rhombus"}, {"ratio", inv_ratio}, {"alpha", a},
                          {"alpha_deg", a * 180.0 / pi}};
            } else if (inv_family == "trapezium") {
                auto [a, b] = trapezium_invert(inv_ratio);
                result = {{"family", "trapezium"}, {"ratio", inv_ratio}, {"alpha", a}, {"beta", b},
                          {"alpha_deg", a * 180.0 / pi}, {"beta_deg", b * 180.0 / pi}};
            } else {
                throw std::invalid_argument("invert supports rhombus and trapezium");
            }
            emit(result, inv_out);
            return 0;
        }

        if (cmd_region->parsed()) return run_region(reg_family, reg_grid, reg_out, reg_curve_out);
        if (cmd_simulate->parsed()) return run_simulate(sim_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
