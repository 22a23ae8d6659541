#include "ccfour/families.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "ccfour/rootfind.hpp"

namespace ccfour {

namespace {

constexpr double pi = std::numbers::pi;

double cube(double v) { return v * v * v; }

void require_angle_range(double alpha, double beta, const char* what) {
    if (!(alpha > 0.0 && alpha < pi / 2.0 && beta > 0.0 && beta < pi / 2.0)) {
        std::ostringstream msg;
        msg << what << " angles must lie in (0, pi/2)";
        throw std::domain_error(msg.str());
    }
}

}  // namespace

const char* to_string(Family family) {
    switch (family) {
        case Family::Tetrahedron: return "tetrahedron";
        case Family::EquilateralCentered: return "equilateral-centered";
        case Family::KiteConvex: return "kite-convex";
        case Family::KiteConcave: return "kite-concave";
        case Family::Rhombus: return "rhombus";
        case Family::IsoscelesTrapezium: return "trapezium";
    }
    return "?";
}

namespace detail {

double kite_convex_m1_over_m2(double a, double b) {
    return std::sin(b) * std::sin(a + b) * std::sin(a + b) * (8.0 * cube(std::cos(b)) - 1.0) /
           (4.0 * std::cos(a) * std::cos(a) * (cube(std::sin(a + b)) - cube(std::cos(b))));
}

double kite_convex_m4_over_m2(double a, double b) { return kite_convex_m1_over_m2(b, a); }

double kite_concave_m1_over_m2(double a, double b) {
    return std::sin(b) * std::sin(a - b) * std::sin(a - b) * (1.0 - 8.0 * cube(std::cos(b))) /
           (4.0 * std::cos(a) * std::cos(a) * (cube(std::sin(a - b)) - cube(std::cos(b))));
}

double kite_concave_m4_over_m2(double a, double b) {
    return std::sin(a) * std::sin(a - b) * std::sin(a - b) * (8.0 * cube(std::cos(a)) - 1.0) /
           (4.0 * std::cos(b) * std::cos(b) * (cube(std::sin(a - b)) - cube(std::cos(a))));
}

double rhombus_ratio_raw(double a) {
    return (1.0 - 1.0 / (8.0 * cube(std::cos(a)))) / (1.0 - 1.0 / (8.0 * cube(std::sin(a))));
}

double trapezium_angle_residual(double a, double b) {
    double s_a = cube(std::sin(a));
    double s_b = cube(std::sin(b));
    double s_2ab = cube(std::sin(2.0 * a - b));
    double s_ab = cube(std::sin(a - b));
    return (s_a - s_2ab) / (s_a - s_b) - (s_2ab - s_ab) / (s_ab - s_b);
}

}  // namespace detail

// ---- tetrahedron ----

FamilySolution build_tetrahedron(const Masses& masses, double edge) {
    if (masses.size() != 4) throw std::invalid_argument("four masses required");
    if (!(edge > 0.0)) throw std::domain_error("edge must be positive");
    const double s = edge / (2.0 * std::sqrt(2.0));
    std::vector<Vec3> r = {
        {s, s, s},
        {s, -s, -s},
        {-s, s, -s},
        {-s, -s, s},
    };
    FamilyShape shape;
    shape.kind = Family::Tetrahedron;
    shape.scale = edge;
    return {Configuration(3, std::move(r)), masses, shape};
}

// ---- centered equilateral triangle ----

FamilySolution build_equilateral_centered(double m, double m4, double side, double G) {
    if (!(m > 0.0 && m4 > 0.0)) throw std::domain_error("mass must be positive");
    if (!(side > 0.0)) throw std::domain_error("side must be positive");
    const double rc = side / std::sqrt(3.0);  // circumradius
    std::vector<Vec3> r(4);
    for (int k = 0; k < 3; ++k) {
        double ang = pi / 2.0 + 2.0 * pi * k / 3.0;
        r[static_cast<size_t>(k)] = {rc * std::cos(ang), rc * std::sin(ang), 0.0};
    }
    r[3] = {0.0, 0.0, 0.0};
    FamilyShape shape;
    shape.kind = Family::EquilateralCentered;
    shape.scale = side;
    shape.mass_ratios["m4/m1"] = m4 / m;
    return {Configuration(2, std::move(r)), Masses({m, m, m, m4}, G), shape};
}

// ---- kites ----

bool kite_convex_region(double alpha, double beta) {
    if (!(alpha > 0.0 && alpha < pi / 2.0 && beta > 0.0 && beta < pi / 2.0)) return false;
    return alpha < pi / 3.0 && beta < pi / 3.0 && alpha + 2.0 * beta > pi / 2.0 &&
           beta + 2.0 * alpha > pi / 2.0;
}

bool kite_concave_region(double alpha, double beta) {
    if (!(beta > 0.0 && beta < alpha && alpha < pi / 2.0)) return false;
    if (!(beta < pi / 3.0)) return false;
    if (alpha < pi / 3.0) return 2.0 * alpha - beta > pi / 2.0;
    if (alpha > pi / 3.0) return 2.0 * alpha - beta < pi / 2.0;
    return false;  // alpha == pi/3 is a boundary line
}

std::pair<double, double> kite_convex_mass_ratios(double alpha, double beta) {
    require_angle_range(alpha, beta, "convex kite");
    if (std::abs(alpha - pi / 6.0) < 1e-12 && std::abs(beta - pi / 6.0) < 1e-12)
        throw std::domain_error(
            "alpha = beta = pi/6 is the singular point where m2 vanishes and is excluded");
    if (!(alpha < pi / 3.0)) throw std::domain_error("convex kite requires alpha < pi/3");
    if (!(beta < pi / 3.0)) throw std::domain_error("convex kite requires beta < pi/3");
    if (!(alpha + 2.0 * beta > pi / 2.0))
        throw std::domain_error("convex kite requires alpha + 2*beta > pi/2");
    if (!(beta + 2.0 * alpha > pi / 2.0))
        throw std::domain_error("convex kite requires beta + 2*alpha > pi/2");
    return {detail::kite_convex_m1_over_m2(alpha, beta), detail::kite_convex_m4_over_m2(alpha, beta)};
}

std::pair<double, double> kite_concave_mass_ratios(double alpha, double beta) {
    require_angle_range(alpha, beta, "concave kite");
    if (std::abs(alpha - beta) < 1e-12)
        throw std::domain_error("alpha = beta makes bodies 1 and 4 coincide");
    if (!(beta < alpha)) throw std::domain_error("concave kite ratios expect alpha > beta");
    if (!(beta < pi / 3.0)) throw std::domain_error("concave kite requires beta < pi/3");
    if (alpha < pi / 3.0) {
        if (!(2.0 * alpha - beta > pi / 2.0))
            throw std::domain_error("concave kite with alpha < pi/3 requires 2*alpha - beta > pi/2");
    } else if (alpha > pi / 3.0) {
        if (!(2.0 * alpha - beta < pi / 2.0))
            throw std::domain_error("concave kite with alpha > pi/3 requires 2*alpha - beta < pi/2");
    } else {
        throw std::domain_error("alpha = pi/3 is outside the allowed range");
    }
    return {detail::kite_concave_m1_over_m2(alpha, beta), detail::kite_concave_m4_over_m2(alpha, beta)};
}

Configuration kite_coordinates(Family kind, double alpha, double beta, double scale) {
    if (!(scale > 0.0)) throw std::domain_error("scale must be positive");
    switch (kind) {
        case Family::KiteConvex:
            if (!kite_convex_region(alpha, beta))
                throw std::domain_error("angles outside the convex kite region");
            break;
        case Family::KiteConcave:
            if (!kite_concave_region(alpha, beta))
                throw std::domain_error("angles outside the concave kite region");
            break;
        case Family::Rhombus:
            if (std::abs(alpha - beta) > 1e-12 || !(alpha > pi / 6.0 && alpha < pi / 3.0))
                throw std::domain_error("rhombus angle must lie in (pi/6, pi/3)");
            break;
        default:
            throw std::invalid_argument("not a kite family");
    }

    // apex axis is vertical: bodies 2,3 on the base, 1 above, 4 below (convex)
    // or above (concave)
    const double xc = scale * std::cos(alpha);
    const double y1 = scale * std::sin(alpha);
    const double y4 = xc * std::tan(beta);
    std::vector<Vec3> r = {
        {xc, y1, 0.0},
        {0.0, 0.0, 0.0},
        {2.0 * xc, 0.0, 0.0},
        {xc, kind == Family::KiteConcave ? y4 : -y4, 0.0},
    };
    return Configuration(2, std::move(r));
}

FamilySolution build_kite_convex(double alpha, double beta, double scale, double G) {
    auto [m1, m4] = kite_convex_mass_ratios(alpha, beta);
    FamilyShape shape;
    shape.kind = Family::KiteConvex;
    shape.alpha = alpha;
    shape.beta = beta;
    shape.scale = scale;
    shape.mass_ratios["m1/m2"] = m1;
    shape.mass_ratios["m4/m2"] = m4;
    return {kite_coordinates(Family::KiteConvex, alpha, beta, scale), Masses({m1, 1.0, 1.0, m4}, G),
            shape};
}

FamilySolution build_kite_concave(double alpha, double beta, double scale, double G) {
    if (std::abs(alpha - beta) < 1e-12)
        throw std::domain_error("alpha = beta makes bodies 1 and 4 coincide");
    if (beta > alpha) {
        // mirror case: relabel bodies 1 <-> 4 and swap the angles
        FamilySolution canon = build_kite_concave(beta, alpha, scale, G);
        std::vector<Vec3> r = {canon.config.position(3), canon.config.position(1),
                               canon.config.position(2), canon.config.position(0)};
        Masses m({canon.masses[3], canon.masses[1], canon.masses[2], canon.masses[0]}, G);
        FamilyShape shape;
        shape.kind = Family::KiteConcave;
        shape.alpha = alpha;
        shape.beta = beta;
        shape.scale = scale;
        shape.mass_ratios["m1/m2"] = m[0] / m[1];
        shape.mass_ratios["m4/m2"] = m[3] / m[1];
        return {Configuration(2, std::move(r)), m, shape};
    }
    auto [m1, m4] = kite_concave_mass_ratios(alpha, beta);
    FamilyShape shape;
    shape.kind = Family::KiteConcave;
    shape.alpha = alpha;
    shape.beta = beta;
    shape.scale = scale;
    shape.mass_ratios["m1/m2"] = m1;
    shape.mass_ratios["m4/m2"] = m4;
    return {kite_coordinates(Family::KiteConcave, alpha, beta, scale), Masses({m1, 1.0, 1.0, m4}, G),
            shape};
}

// ---- rhombus ----

double rhombus_ratio(double alpha) {
    if (!(alpha > pi / 6.0 && alpha < pi / 3.0))
        throw std::domain_error("rhombus angle must lie in (pi/6, pi/3)");
    return detail::rhombus_ratio_raw(alpha);
}

double rhombus_angle(double ratio) {
    if (!(ratio > 0.0) || !std::isfinite(ratio))
        throw std::domain_error("rhombus mass ratio must be positive and finite");
    const double lo = pi / 6.0 + 1e-9;
    const double hi = pi / 3.0 - 1e-9;
    try {
        return bisect([&](double a) { return detail::rhombus_ratio_raw(a) - ratio; }, lo, hi, 1e-14);
    } catch (const std::runtime_error&) {
        throw std::domain_error("rhombus mass ratio outside the invertible range");
    }
}

FamilySolution build_rhombus(double alpha, double scale, double G) {
    double ratio = rhombus_ratio(alpha);
    FamilyShape shape;
    shape.kind = Family::Rhombus;
    shape.alpha = alpha;
    shape.beta = alpha;
    shape.scale = scale;
    shape.mass_ratios["m1/m2"] = ratio;
    return {kite_coordinates(Family::Rhombus, alpha, alpha, scale), Masses({ratio, 1.0, 1.0, ratio}, G),
            shape};
}

// ---- isosceles trapezium ----

bool trapezium_region(double alpha, double beta) {
    if (!(alpha > pi / 3.0 && alpha < pi / 2.0)) return false;
    return beta > 0.0 && beta < alpha / 2.0 && beta < 3.0 * alpha - pi &&
           beta > (3.0 * alpha - pi) / 2.0;
}

double trapezium_beta(double alpha, int* bracket_count) {
    if (!(alpha > pi / 3.0 && alpha < pi / 2.0))
        throw std::domain_error("trapezium requires pi/3 < alpha < pi/2");
    double lo = (3.0 * alpha - pi) / 2.0;
    double hi = std::min(alpha / 2.0, 3.0 * alpha - pi);
    if (!(lo < hi)) throw std::runtime_error("admissible beta interval is empty");
    // shrink inward off the singular boundaries; near the pinch at
    // alpha -> pi/2 the interval itself is narrower than the usual inset
    const double inset = std::min(1e-9, 0.1 * (hi - lo));
    lo += inset;
    hi -= inset;
    auto f = [&](double b) { return detail::trapezium_angle_residual(alpha, b); };
    if (bracket_count) *bracket_count = count_sign_changes(f, lo, hi, 64);
    return bisect(f, lo, hi, 1e-14);
}

double trapezium_mass_ratio(double alpha, double beta) {
    double s_a = cube(std::sin(alpha));
    double s_b = cube(std::sin(beta));
    double s_2ab = cube(std::sin(2.0 * alpha - beta));
    double pref = std::sin(beta) * std::sin(beta) /
                  (std::sin(2.0 * alpha - beta) * std::sin(2.0 * alpha - beta));
    return pref * (s_a - s_2ab) / (s_a - s_b);
}

Configuration trapezium_coordinates(double alpha, double beta, double scale) {
    if (!(scale > 0.0)) throw std::domain_error("scale must be positive");
    if (!(beta > 0.0 && beta < alpha && alpha <= pi / 2.0))
        throw std::domain_error("trapezium angles require 0 < beta < alpha <= pi/2");
    if (std::abs(alpha - beta) < 1e-12)
        throw std::domain_error("alpha = beta makes sin(alpha - beta) vanish");
    const double q14 = scale * std::sin(2.0 * alpha - beta) / std::sin(alpha - beta);
    std::vector<Vec3> r = {
        {0.0, 0.0, 0.0},
        {scale * std::cos(alpha), scale * std::sin(alpha), 0.0},
        {q14 - scale * std::cos(alpha), scale * std::sin(alpha), 0.0},
        {q14, 0.0, 0.0},
    };
    return Configuration(2, std::move(r));
}

namespace {

bool trapezium_square_limit(double alpha, double beta) {
    return std::abs(alpha - pi / 2.0) <= 1e-9 && std::abs(beta - pi / 4.0) <= 1e-9;
}

}  // namespace

FamilySolution build_trapezium(double alpha, double beta, double scale, double G) {
    if (!trapezium_square_limit(alpha, beta)) {
        if (!(alpha > pi / 3.0)) throw std::domain_error("trapezium requires alpha > pi/3");
        if (!(alpha < pi / 2.0)) throw std::domain_error("trapezium requires alpha < pi/2");
        if (!(beta > 0.0)) throw std::domain_error("trapezium requires beta > 0");
        if (!(beta < alpha / 2.0)) throw std::domain_error("trapezium requires beta < alpha/2");
        if (!(beta < 3.0 * alpha - pi))
            throw std::domain_error("trapezium requires beta < 3*alpha - pi");
        if (!(beta > (3.0 * alpha - pi) / 2.0))
            throw std::domain_error("trapezium requires beta > (3*alpha - pi)/2");
    }
    double ratio = trapezium_mass_ratio(alpha, beta);
    if (!(ratio > 0.0) || !std::isfinite(ratio))
        throw std::domain_error("trapezium mass ratio is not positive at these angles");
    FamilyShape shape;
    shape.kind = Family::IsoscelesTrapezium;
    shape.alpha = alpha;
    shape.beta = beta;
    shape.scale = scale;
    shape.mass_ratios["m2/m1"] = ratio;
    return {trapezium_coordinates(alpha, beta, scale), Masses({1.0, ratio, ratio, 1.0}, G), shape};
}

FamilySolution build_trapezium_auto(double alpha, double scale, double G) {
    return build_trapezium(alpha, trapezium_beta(alpha), scale, G);
}

std::pair<double, double> trapezium_invert(double ratio) {
    if (!(ratio > 0.0 && ratio <= 1.0))
        throw std::domain_error("trapezium mass ratio m2/m1 must lie in (0, 1]");
    const double lo = pi / 3.0 + 1e-6;
    const double hi = pi / 2.0 - 1e-9;
    // m2/m1 increases towards 1 at the square pinch alpha = pi/2, beta = pi/4
    double reach = trapezium_mass_ratio(hi, trapezium_beta(hi));
    if (ratio >= reach) return {pi / 2.0, pi / 4.0};
    auto h = [&](double a) { return trapezium_mass_ratio(a, trapezium_beta(a)) - ratio; };
    double alpha = bisect(h, lo, hi, 1e-13);
    return {alpha, trapezium_beta(alpha)};
}

// ---- parallelogram property check ----

ParallelogramNote parallelogram_check(const Configuration& config, const Masses& masses,
                                      double oracle_tol, double len_tol) {
    if (config.size() != 4) throw std::invalid_argument("four bodies required");
    ParallelogramNote note;

    double mean = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) mean += config.distance(i, j);
    mean /= 6.0;

    // diagonal midpoints coincide for some pairing <=> parallelogram
    static const int pairings[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
    int found = -1;
    for (int k = 0; k < 3; ++k) {
        Vec3 mid = config.position(pairings[k][0]) + config.position(pairings[k][1]) -
                   config.position(pairings[k][2]) - config.position(pairings[k][3]);
        if (mid.norm() <= len_tol * mean) {
            found = k;
            break;
        }
    }
    if (found < 0) {
        note.note = "not a parallelogram";
        return note;
    }
    note.parallelogram = true;

    // sides of the parallelogram: each diagonal endpoint to each of the others
    const int a = pairings[found][0], c = pairings[found][1];
    const int b = pairings[found][2], dd = pairings[found][3];
    double s1 = config.distance(a, b), s2 = config.distance(b, c);
    note.rhombus = std::abs(s1 - s2) <= len_tol * mean;

    note.central = lambda_fit(config, masses).max_relative_deviation < oracle_tol;
    if (note.central && !note.rhombus)
        note.note = "central parallelogram that is not a rhombus (should not exist)";
    else if (note.central)
        note.note = "central rhombus";
    else
        note.note = "not central";
    (void)dd;
    return note;
}

}  // namespace ccfour
