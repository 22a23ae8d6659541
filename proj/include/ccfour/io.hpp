#pragma once

#include <string>

#include <json.hpp>

#include "ccfour/centrality.hpp"
#include "ccfour/dynamics.hpp"
#include "ccfour/geometry.hpp"

namespace ccfour::io {

struct ConfigFile {
    Configuration config;
    Masses masses;
};

/// Schema: {"dim":2|3, "positions":[[x,y(,z)],...], "masses":[m1,...], "G":1.0}
ConfigFile parse_configuration(const nlohmann::json& j);
ConfigFile read_configuration(const std::string& path);
nlohmann::json configuration_json(const Configuration& config, const Masses& masses);
void write_configuration(const std::string& path, const Configuration& config, const Masses& masses);

/// CSV with header "i,j,q", 1-based indices.
void write_distances_csv(const std::string& path, const DistanceSet& d);
DistanceSet read_distances_csv(const std::string& path);

nlohmann::json residual_report_json(const ResidualReport& report);
nlohmann::json lambda_fit_json(const LambdaFit& fit);
nlohmann::json shape_json(const ShapeClass& shape);
nlohmann::json diagnostics_json(const TrajectoryDiagnostics& diag);

/// CSV "t,x1,y1(,z1),..." at the sample stride.
void write_trajectory_csv(const std::string& path, const Trajectory& trajectory, int dim);

/// Accepts raw radians ("0.7853") or degrees with suffix ("45deg"); a bare
/// number is taken as degrees when deg_default is set.
double parse_angle(const std::string& text, bool deg_default = false);

}  // namespace ccfour::io
