#include "ccfour/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ccfour::io {

using nlohmann::json;

ConfigFile parse_configuration(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("configuration must be a JSON object");
    if (!j.contains("dim") || !j.contains("positions") || !j.contains("masses"))
        throw std::invalid_argument("configuration needs dim, positions and masses");

    int dim = j.at("dim").get<int>();
    if (dim != 2 && dim != 3) throw std::invalid_argument("dim must be 2 or 3");

    const json& jp = j.at("positions");
    const json& jm = j.at("masses");
    if (!jp.is_array() || !jm.is_array()) throw std::invalid_argument("positions and masses must be arrays");
    if (jp.size() != jm.size()) throw std::invalid_argument("positions and masses must have equal length");

    std::vector<Vec3> positions;
    for (const json& row : jp) {
        if (!row.is_array() || static_cast<int>(row.size()) != dim)
            throw std::invalid_argument("each position needs exactly dim components");
        Vec3 p{row.at(0).get<double>(), row.at(1).get<double>(),
               dim == 3 ? row.at(2).get<double>() : 0.0};
        positions.push_back(p);
    }

    std::vector<double> masses;
    for (const json& v : jm) {
        double m = v.get<double>();
        if (!(m > 0.0)) throw std::invalid_argument("mass must be positive");
        masses.push_back(m);
    }

    double G = j.value("G", 1.0);
    return {Configuration(dim, std::move(positions)), Masses(std::move(masses), G)};
}

ConfigFile read_configuration(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
    }
    return parse_configuration(j);
}

json configuration_json(const Configuration& config, const Masses& masses) {
    json jp = json::array();
    for (int i = 0; i < config.size(); ++i) {
        const Vec3& p = config.position(i);
        if (config.dim() == 2)
            jp.push_back({p.x, p.y});
        else
            jp.push_back({p.x, p.y, p.z});
    }
    return json{{"dim", config.dim()}, {"positions", jp}, {"masses", masses.values()}, {"G", masses.grav()}};
}

void write_configuration(const std::string& path, const Configuration& config, const Masses& masses) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << configuration_json(config, masses).dump(2) << "\n";
}

void write_distances_csv(const std::string& path, const DistanceSet& d) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "i,j,q\n";
    out.precision(17);
    for (int i = 0; i < d.size(); ++i)
        for (int j = i + 1; j < d.size(); ++j) out << i + 1 << "," << j + 1 << "," << d.q(i, j) << "\n";
}

DistanceSet read_distances_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty distances file");

    struct Row {
        int i, j;
        double q;
    };
    std::vector<Row> rows;
    int nmax = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        Row r;
        char c1, c2;
        if (!(ss >> r.i >> c1 >> r.j >> c2 >> r.q) || c1 != ',' || c2 != ',')
            throw std::invalid_argument("bad distances row: " + line);
        nmax = std::max({nmax, r.i, r.j});
        rows.push_back(r);
    }
    DistanceSet d(nmax);
    for (const Row& r : rows) d.set(r.i - 1, r.j - 1, r.q);
    return d;
}

json residual_report_json(const ResidualReport& report) {
    json entries = json::array();
    for (const ResidualEntry& e : report.entries) {
        json je{{"label", e.label}, {"raw", e.raw}, {"normalized", e.normalized}};
        if (e.degenerate) je["degenerate"] = true;
        entries.push_back(je);
    }
    return json{{"entries", entries},
                {"max_normalized", report.max_normalized()},
                {"collinear_vacuous", report.collinear_vacuous}};
}

json lambda_fit_json(const LambdaFit& fit) {
    return json{{"lambda", fit.lambda},
                {"max_relative_deviation", fit.max_relative_deviation},
                {"per_body_deviation", fit.per_body_deviation}};
}

json shape_json(const ShapeClass& shape) {
    return json{{"kind", to_string(shape.kind)}, {"tolerance", shape.tol}, {"matched", shape.matched}};
}

json diagnostics_json(const TrajectoryDiagnostics& diag) {
    json lam = json::array();
    for (const auto& [t, l] : diag.lambda_history) lam.push_back({{"t", t}, {"lambda", l}});
    return json{{"max_shape_deviation", diag.max_shape_deviation},
                {"pair_momentum_drift", diag.pair_momentum_drift},
                {"max_pair_momentum_drift", diag.max_pair_momentum_drift},
                {"total_momentum_drift", diag.total_momentum_drift},
                {"energy_drift", diag.energy_drift},
                {"lambda_history", lam}};
}

void write_trajectory_csv(const std::string& path, const Trajectory& trajectory, int dim) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    const int n = trajectory.final_state.masses.size();
    out << "t";
    for (int i = 0; i < n; ++i) {
        out << ",x" << i + 1 << ",y" << i + 1;
        if (dim == 3) out << ",z" << i + 1;
    }
    out << "\n";
    out.precision(17);
    for (const TrajectorySample& s : trajectory.samples) {
        out << s.t;
        for (int i = 0; i < n; ++i) {
            const Vec3& p = s.positions[static_cast<size_t>(i)];
            out << "," << p.x << "," << p.y;
            if (dim == 3) out << "," << p.z;
        }
        out << "\n";
    }
}

double parse_angle(const std::string& text, bool deg_default) {
    size_t pos = 0;
    double value;
    try {
        value = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("cannot parse angle: " + text);
    }
    std::string suffix = text.substr(pos);
    while (!suffix.empty() && suffix.front() == ' ') suffix.erase(suffix.begin());
    if (suffix == "deg") return value * std::numbers::pi / 180.0;
    if (suffix == "rad") return value;
    if (!suffix.empty()) throw std::invalid_argument("cannot parse angle: " + text);
    return deg_default ? value * std::numbers::pi / 180.0 : value;
}

}  // namespace ccfour::io
