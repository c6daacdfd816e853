#pragma once

#include <span>
#include <string>
#include <vector>

#include "ventcel/core.hpp"

namespace ventcel {

enum class FaceKind { Bottom, Top, Side };

// Names one planar face of the prism: bottom, top, or the side face erected
// over cross-section edge `side_edge` (edge i runs from vertex i to i+1).
struct FaceSelector {
    FaceKind kind = FaceKind::Bottom;
    int side_edge = -1;

    bool operator==(const FaceSelector&) const = default;
    std::string to_string() const;
    static FaceSelector parse(const std::string& text);
};

// Right prism over a simple CCW polygon, with one face carrying the Ventcel
// condition and homogeneous Dirichlet data everywhere else.  lambda_v holds
// the vertex singular exponents (user-supplied data, +inf = benign vertex),
// indexed by cross-section vertex, for the bottom and top base separately.
struct PrismDomain {
    std::vector<Vec2> cross_section;
    double height = 1.0;
    FaceSelector ventcel_face;
    std::vector<double> lambda_v_bottom;
    std::vector<double> lambda_v_top;

    int n_vertices() const { return static_cast<int>(cross_section.size()); }
    double polygon_area() const;
    double edge_length(int i) const;

    static PrismDomain create(std::vector<Vec2> polygon, double height, FaceSelector face);
};

double polygon_signed_area(std::span<const Vec2> polygon);

// Interior angle of a CCW simple polygon at vertex i, in (0, 2*pi).
double interior_angle(std::span<const Vec2> polygon, int i);

// Edge singular exponent lambda_e = pi / omega_e.
double edge_exponent(double omega);

// Interior angle of the Ventcel face at one of its corners, attributed to the
// cross-section vertex `region` under the corner.
struct FaceCorner {
    int region = -1;
    double omega = 0.0;
};

struct SingularityInfo {
    std::vector<Vec2> vertex_positions;
    std::vector<double> vertical_edge_angles;   // per cross-section vertex
    std::vector<double> horizontal_edge_angles; // bottom edges then top edges
    std::vector<double> lambda_e;               // per vertical edge
    std::vector<double> lambda_v;               // bottom vertices then top vertices
    std::vector<FaceCorner> face_corners;       // corners of the Ventcel face
    FaceKind face_kind = FaceKind::Bottom;

    bool edge_is_singular(int vertex) const;
    std::vector<int> singular_corners() const;
};

SingularityInfo compute_singularity_info(const PrismDomain& domain);

// One evaluated grading condition.  `greater` records the inequality
// direction: pass = (lhs > threshold) when set, (lhs < threshold) otherwise.
struct ConditionRecord {
    int region = -1;
    const char* id = "";
    double lhs = 0.0;
    double threshold = 0.0;
    bool greater = false;
    bool pass = false;
};

struct AdmissibilityReport {
    std::vector<ConditionRecord> records;
    bool all_pass = true;

    const ConditionRecord* find(int region, const std::string& id) const;
};

// Evaluates the admissible-grading conditions for each macro region (one per
// cross-section vertex).  mu/nu are the declared grading exponents per
// region.  Non-singular edges and vertices enter with exponent +inf, which
// passes the corresponding conditions vacuously.
AdmissibilityReport check_grading_conditions(std::span<const double> mu,
                                             std::span<const double> nu,
                                             const SingularityInfo& sing);

}  // namespace ventcel
