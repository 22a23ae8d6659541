#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ccfour/families.hpp"
#include "test_util.hpp"

using nlohmann::json;

namespace {

int run(const std::string& args, const std::string& stdout_path = "",
        const std::string& stderr_path = "") {
    std::string cmd = std::string(CC4_BIN) + " " + args;
    if (!stdout_path.empty()) cmd += " >" + stdout_path;
    if (!stderr_path.empty()) cmd += " 2>" + stderr_path;
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json slurp_json(const std::string& path) { return json::parse(slurp(path)); }

struct GridCsv {
    std::vector<double> alpha, beta;
    std::vector<int> allowed;
};

GridCsv read_grid(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);  // header
    GridCsv g;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ',');
        g.alpha.push_back(std::stod(cell));
        std::getline(ss, cell, ',');
        g.beta.push_back(std::stod(cell));
        std::getline(ss, cell, ',');
        g.allowed.push_back(std::stoi(cell));
    }
    return g;
}

}  // namespace

TEST_CASE("build + check: tetrahedron is central, exit 0") {
    REQUIRE(run("build tetrahedron --edge 1 --out cli_tet.json") == 0);
    CHECK(run("check cli_tet.json --out cli_tet_report.json") == 0);
    json report = slurp_json("cli_tet_report.json");
    CHECK(report["central"].get<bool>());
    CHECK(report["lambda_fit"]["lambda"].get<double>() == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(report["shape"]["kind"].get<std::string>() == "Tetrahedral");
    for (const auto& e : report["residuals_4cc"]["entries"])
        CHECK(std::abs(e["normalized"].get<double>()) < 1e-12);
}

TEST_CASE("check: random configuration exits 2") {
    testutil::Rng rng(61);
    ccfour::Configuration c = testutil::random_configuration(rng, 4, 2);
    json j = {{"dim", 2}, {"positions", json::array()}, {"masses", {1.0, 2.0, 0.5, 1.5}}, {"G", 1.0}};
    for (int i = 0; i < 4; ++i) j["positions"].push_back({c.position(i).x, c.position(i).y});
    std::ofstream("cli_random.json") << j.dump();
    CHECK(run("check cli_random.json", "cli_random_report.json") == 2);
    json report = slurp_json("cli_random_report.json");
    CHECK_FALSE(report["central"].get<bool>());
    CHECK(report["lambda_fit"]["max_relative_deviation"].get<double>() > 1e-3);
}

TEST_CASE("check: input validation exit codes and messages") {
    std::ofstream("cli_negmass.json")
        << R"({"dim":2,"positions":[[0,0],[1,0],[0,1],[1,1]],"masses":[1,1,-1,1],"G":1})";
    CHECK(run("check cli_negmass.json", "", "cli_negmass_err.txt") == 1);
    CHECK(slurp("cli_negmass_err.txt").find("mass must be positive") != std::string::npos);

    std::ofstream("cli_garbage.json") << "{not json";
    CHECK(run("check cli_garbage.json", "", "cli_garbage_err.txt") == 1);
    CHECK(slurp("cli_garbage_err.txt").find("malformed JSON") != std::string::npos);

    std::ofstream("cli_collide.json")
        << R"({"dim":2,"positions":[[0,0],[0,0],[0,1],[1,1]],"masses":[1,1,1,1],"G":1})";
    CHECK(run("check cli_collide.json", "", "cli_collide_err.txt") == 1);
    CHECK(slurp("cli_collide_err.txt").find("collision") != std::string::npos);

    CHECK(run("check does_not_exist.json", "", "/dev/null") == 1);
    CHECK(run("frobnicate", "", "/dev/null") == 1);
}

TEST_CASE("build trapezium solves beta internally") {
    REQUIRE(run("build trapezium --alpha 75deg --out cli_trap.json") == 0);
    CHECK(run("check cli_trap.json", "cli_trap_report.json") == 0);
    json report = slurp_json("cli_trap_report.json");
    CHECK(report["shape"]["kind"].get<std::string>() == "IsoscelesTrapezium");
}

TEST_CASE("build rhombus from a mass ratio of one gives the square") {
    REQUIRE(run("build rhombus --ratio 1 --out cli_square.json") == 0);
    json j = slurp_json("cli_square.json");
    for (const auto& m : j["masses"]) CHECK(m.get<double>() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(run("check cli_square.json", "/dev/null") == 0);
}

TEST_CASE("build kite-convex at the singular point names it") {
    CHECK(run("build kite-convex --alpha 30deg --beta 30deg", "", "cli_kite_err.txt") == 1);
    CHECK(slurp("cli_kite_err.txt").find("singular point") != std::string::npos);
}

TEST_CASE("--deg flag applies to bare angles") {
    REQUIRE(run("--deg build rhombus --alpha 45 --out cli_sq2.json") == 0);
    json j = slurp_json("cli_sq2.json");
    for (const auto& m : j["masses"]) CHECK(m.get<double>() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("invert rhombus and trapezium") {
    REQUIRE(run("invert rhombus --ratio 1 --out cli_inv1.json") == 0);
    CHECK(slurp_json("cli_inv1.json")["alpha_deg"].get<double>() == doctest::Approx(45.0).epsilon(1e-10));

    REQUIRE(run("invert trapezium --ratio 1 --out cli_inv2.json") == 0);
    json inv = slurp_json("cli_inv2.json");
    CHECK(inv["alpha_deg"].get<double>() == doctest::Approx(90.0).epsilon(1e-8));
    CHECK(inv["beta_deg"].get<double>() == doctest::Approx(45.0).epsilon(1e-8));
}

TEST_CASE("region grid: convex kite admissible fraction approximates the polygon area") {
    REQUIRE(run("region kite-convex --grid 512 --out cli_convex_grid.csv") == 0);
    GridCsv g = read_grid("cli_convex_grid.csv");
    REQUIRE(g.allowed.size() == 512u * 512u);
    long count = 0;
    for (int a : g.allowed) count += a;
    double fraction = static_cast<double>(count) / static_cast<double>(g.allowed.size());
    CHECK(fraction == doctest::Approx(1.0 / 6.0).epsilon(0.01));
}

TEST_CASE("region grid: concave kite splits into two components") {
    const int n = 256;
    REQUIRE(run("region kite-concave --grid 256 --out cli_concave_grid.csv") == 0);
    GridCsv g = read_grid("cli_concave_grid.csv");
    REQUIRE(g.allowed.size() == static_cast<size_t>(n) * n);

    // rows are alpha-major; flood fill with 4-neighbour connectivity
    std::vector<int> label(g.allowed.size(), 0);
    int components = 0;
    for (size_t start = 0; start < g.allowed.size(); ++start) {
        if (!g.allowed[start] || label[start]) continue;
        ++components;
        std::vector<size_t> stack = {start};
        label[start] = components;
        while (!stack.empty()) {
            size_t cur = stack.back();
            stack.pop_back();
            int i = static_cast<int>(cur) / n;
            int j = static_cast<int>(cur) % n;
            const int di[4] = {1, -1, 0, 0};
            const int dj[4] = {0, 0, 1, -1};
            for (int k = 0; k < 4; ++k) {
                int ni = i + di[k], nj = j + dj[k];
                if (ni < 0 || nj < 0 || ni >= n || nj >= n) continue;
                size_t nxt = static_cast<size_t>(ni) * n + static_cast<size_t>(nj);
                if (g.allowed[nxt] && !label[nxt]) {
                    label[nxt] = components;
                    stack.push_back(nxt);
                }
            }
        }
    }
    CHECK(components == 2);
}

TEST_CASE("region trapezium emits an on-region curve") {
    REQUIRE(run("region trapezium --grid 64 --out cli_trap_grid.csv --curve-out cli_trap_curve.csv") ==
            0);
    std::ifstream in("cli_trap_curve.csv");
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ',');
        double a = std::stod(cell);
        std::getline(ss, cell, ',');
        double b = std::stod(cell);
        std::getline(ss, cell, ',');
        double ratio = std::stod(cell);
        CHECK(ccfour::trapezium_region(a, b));
        CHECK(ratio > 0.0);
        ++rows;
    }
    CHECK(rows == 64);
}

TEST_CASE("simulate: collapse and rotate behave per the exit-code contract") {
    REQUIRE(run("build tetrahedron --out cli_sim_tet.json") == 0);
    CHECK(run("simulate cli_sim_tet.json --mode collapse --summary cli_sim_tet_diag.json",
              "/dev/null") == 0);
    json diag = slurp_json("cli_sim_tet_diag.json");
    CHECK(diag["max_shape_deviation"].get<double>() < 1e-6);
    CHECK(diag["stopped_at_scale"].get<bool>());

    REQUIRE(run("build equilateral --m 1 --m4 2 --out cli_sim_eq.json") == 0);
    CHECK(run("simulate cli_sim_eq.json --mode rotate --steps 4000 --out cli_sim_eq_traj.csv "
              "--summary cli_sim_eq_diag.json",
              "/dev/null") == 0);
    json diag2 = slurp_json("cli_sim_eq_diag.json");
    CHECK(diag2["max_shape_deviation"].get<double>() < 1e-6);
    std::ifstream traj("cli_sim_eq_traj.csv");
    std::string header;
    std::getline(traj, header);
    CHECK(header == "t,x1,y1,x2,y2,x3,y3,x4,y4");

    CHECK(run("simulate cli_random.json --mode rotate", "/dev/null", "/dev/null") == 2);
}

TEST_CASE("check output round-trips without value drift") {
    REQUIRE(run("build kite-convex --alpha 50deg --beta 40deg --out cli_rt.json") == 0);
    REQUIRE(run("check cli_rt.json --out cli_rt_report.json") == 0);
    json report = slurp_json("cli_rt_report.json");
    std::ofstream("cli_rt2.json") << report["config"].dump();
    REQUIRE(run("check cli_rt2.json --out cli_rt_report2.json") == 0);
    json report2 = slurp_json("cli_rt_report2.json");
    CHECK(report["config"].dump() == report2["config"].dump());
    CHECK(report["lambda_fit"]["lambda"].get<double>() ==
          doctest::Approx(report2["lambda_fit"]["lambda"].get<double>()).epsilon(1e-15));
}
