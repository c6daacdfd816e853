#include "ventcel/geometry.hpp"

#include <algorithm>
#include <numbers>

namespace ventcel {

namespace {

constexpr double kPi = std::numbers::pi;

double polygon_scale(std::span<const Vec2> poly) {
    double s = 0.0;
    for (const Vec2& p : poly) s = std::max({s, std::abs(p.x), std::abs(p.y)});
    return std::max(s, 1e-300);
}

// Proper or touching intersection of two segments, used by the simplicity
// check.  Adjacent edges are never passed in.
bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d, double eps) {
    const double o1 = cross(b - a, c - a);
    const double o2 = cross(b - a, d - a);
    const double o3 = cross(d - c, a - c);
    const double o4 = cross(d - c, b - c);
    if (((o1 > eps && o2 < -eps) || (o1 < -eps && o2 > eps)) &&
        ((o3 > eps && o4 < -eps) || (o3 < -eps && o4 > eps)))
        return true;
    auto on_segment = [eps](Vec2 p, Vec2 q, Vec2 r) {
        if (std::abs(cross(q - p, r - p)) > eps) return false;
        return std::min(p.x, q.x) - 1e-12 <= r.x && r.x <= std::max(p.x, q.x) + 1e-12 &&
               std::min(p.y, q.y) - 1e-12 <= r.y && r.y <= std::max(p.y, q.y) + 1e-12;
    };
    if (std::abs(o1) <= eps && on_segment(a, b, c)) return true;
    if (std::abs(o2) <= eps && on_segment(a, b, d)) return true;
    if (std::abs(o3) <= eps && on_segment(c, d, a)) return true;
    if (std::abs(o4) <= eps && on_segment(c, d, b)) return true;
    return false;
}

}  // namespace

std::string FaceSelector::to_string() const {
    switch (kind) {
        case FaceKind::Bottom: return "bottom";
        case FaceKind::Top: return "top";
        case FaceKind::Side: return "side:" + std::to_string(side_edge);
    }
    return "?";
}

FaceSelector FaceSelector::parse(const std::string& text) {
    if (text == "bottom") return {FaceKind::Bottom, -1};
    if (text == "top") return {FaceKind::Top, -1};
    if (text.rfind("side:", 0) == 0) {
        try {
            return {FaceKind::Side, std::stoi(text.substr(5))};
        } catch (const std::exception&) {
            throw config_error("invalid side face index in '" + text + "'");
        }
    }
    throw config_error("unknown face selector '" + text + "' (expected bottom, top, or side:<i>)");
}

double polygon_signed_area(std::span<const Vec2> polygon) {
    const int n = static_cast<int>(polygon.size());
    double a = 0.0;
    for (int i = 0; i < n; ++i) a += cross(polygon[i], polygon[(i + 1) % n]);
    return 0.5 * a;
}

double interior_angle(std::span<const Vec2> polygon, int i) {
    const int n = static_cast<int>(polygon.size());
    if (n < 3) throw geometry_error("interior_angle: polygon needs at least 3 vertices");
    if (i < 0 || i >= n) throw geometry_error("interior_angle: vertex index out of range");
    const Vec2 prev = polygon[(i + n - 1) % n];
    const Vec2 cur = polygon[i];
    const Vec2 next = polygon[(i + 1) % n];
    const Vec2 din = cur - prev;
    const Vec2 dout = next - cur;
    const double scale = polygon_scale(polygon);
    if (norm(din) < 1e-14 * scale || norm(dout) < 1e-14 * scale)
        throw geometry_error("interior_angle: zero-length polygon edge at vertex " + std::to_string(i));
    const double turn = std::atan2(cross(din, dout), dot(din, dout));
    const double omega = kPi - turn;
    if (omega < kAngleTol || omega > 2.0 * kPi - kAngleTol)
        throw geometry_error("interior_angle: degenerate (collinear spike) at vertex " + std::to_string(i));
    return omega;
}

double edge_exponent(double omega) {
    if (!(omega > 0.0) || !(omega < 2.0 * kPi))
        throw geometry_error("edge_exponent: opening angle must lie in (0, 2*pi)");
    return kPi / omega;
}

double PrismDomain::polygon_area() const { return polygon_signed_area(cross_section); }

double PrismDomain::edge_length(int i) const {
    const int n = n_vertices();
    return norm(cross_section[(i + 1) % n] - cross_section[i]);
}

PrismDomain PrismDomain::create(std::vector<Vec2> polygon, double height, FaceSelector face) {
    const int n = static_cast<int>(polygon.size());
    if (n < 3) throw geometry_error("cross-section needs at least 3 vertices");
    if (!(height > 0.0)) throw geometry_error("prism height must be positive");
    const double area = polygon_signed_area(polygon);
    if (!(area > 0.0)) throw geometry_error("cross-section must be CCW with positive area");

    // Every vertex must have a proper interior angle; this also rejects
    // repeated points and collinear spikes.
    for (int i = 0; i < n; ++i) interior_angle(polygon, i);

    const double scale = polygon_scale(polygon);
    const double eps = 1e-14 * scale * scale;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            if (segments_intersect(polygon[i], polygon[(i + 1) % n], polygon[j],
                                   polygon[(j + 1) % n], eps))
                throw geometry_error("cross-section polygon is self-intersecting");
        }
    }

    if (face.kind == FaceKind::Side && (face.side_edge < 0 || face.side_edge >= n))
        throw geometry_error("ventcel side face index out of range");

    PrismDomain d;
    d.cross_section = std::move(polygon);
    d.height = height;
    d.ventcel_face = face;
    d.lambda_v_bottom.assign(n, kInf);
    d.lambda_v_top.assign(n, kInf);
    return d;
}

bool SingularityInfo::edge_is_singular(int vertex) const {
    return vertical_edge_angles[vertex] > kPi + kAngleTol;
}

std::vector<int> SingularityInfo::singular_corners() const {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(vertical_edge_angles.size()); ++i)
        if (edge_is_singular(i)) out.push_back(i);
    return out;
}

SingularityInfo compute_singularity_info(const PrismDomain& domain) {
    const int n = domain.n_vertices();
    SingularityInfo s;
    s.vertex_positions = domain.cross_section;
    s.face_kind = domain.ventcel_face.kind;
    s.vertical_edge_angles.resize(n);
    s.lambda_e.resize(n);
    for (int i = 0; i < n; ++i) {
        s.vertical_edge_angles[i] = interior_angle(domain.cross_section, i);
        s.lambda_e[i] = edge_exponent(s.vertical_edge_angles[i]);
    }
    // Right prism: every horizontal edge has dihedral angle pi/2.
    s.horizontal_edge_angles.assign(2 * n, 0.5 * kPi);
    s.lambda_v.resize(2 * n);
    for (int i = 0; i < n; ++i) {
        s.lambda_v[i] = domain.lambda_v_bottom[i];
        s.lambda_v[n + i] = domain.lambda_v_top[i];
    }
    if (domain.ventcel_face.kind == FaceKind::Side) {
        const int e = domain.ventcel_face.side_edge;
        // Rectangular side face: four right-angle corners over the two edge
        // endpoints.
        s.face_corners.push_back({e, 0.5 * kPi});
        s.face_corners.push_back({(e + 1) % n, 0.5 * kPi});
    } else {
        for (int i = 0; i < n; ++i) s.face_corners.push_back({i, s.vertical_edge_angles[i]});
    }
    return s;
}

const ConditionRecord* AdmissibilityReport::find(int region, const std::string& id) const {
    for (const ConditionRecord& r : records)
        if (r.region == region && id == r.id) return &r;
    return nullptr;
}

AdmissibilityReport check_grading_conditions(std::span<const double> mu,
                                             std::span<const double> nu,
                                             const SingularityInfo& sing) {
    const int n = static_cast<int>(sing.vertical_edge_angles.size());
    if (static_cast<int>(mu.size()) != n || static_cast<int>(nu.size()) != n)
        throw data_error("check_grading_conditions: mu/nu must have one entry per cross-section vertex");
    for (int i = 0; i < n; ++i) {
        if (!(mu[i] > 0.0 && mu[i] <= 1.0)) throw data_error("grading exponent mu out of (0,1]");
        if (!(nu[i] > 0.0 && nu[i] <= 1.0)) throw data_error("grading exponent nu out of (0,1]");
    }

    AdmissibilityReport rep;
    auto emit = [&rep](int region, const char* id, double lhs, double thr, bool greater) {
        const bool pass = greater ? (lhs > thr) : (lhs < thr);
        rep.records.push_back({region, id, lhs, thr, greater, pass});
        rep.all_pass = rep.all_pass && pass;
    };

    for (int v = 0; v < n; ++v) {
        // Edge condition: only singular edges constrain mu.
        const double lam_e = sing.edge_is_singular(v) ? sing.lambda_e[v] : kInf;
        emit(v, "edge", mu[v], lam_e, false);

        // Vertex conditions: only singular vertices (lambda_v < 1/2) bind; the
        // worse of the two endpoints of the vertical edge governs.
        double lam_v = std::min(sing.lambda_v[v], sing.lambda_v[n + v]);
        if (!(lam_v < 0.5)) lam_v = kInf;
        emit(v, "vertex-axial", nu[v], lam_v + 0.5, false);
        emit(v, "vertex-combined", 1.0 / nu[v] + (lam_v - 0.5) / mu[v], 1.0, true);
    }

    // Face-corner conditions.  The checked exponents are the ones that grade
    // the mesh within the face toward the corner: for a side face the mesh is
    // graded by mu transversally and nu along the vertical edge; for the
    // bottom/top face the edge grading acts isotropically in-face, so mu
    // plays both roles.
    for (const FaceCorner& c : sing.face_corners) {
        const double ratio = kPi / c.omega;
        const bool side = (sing.face_kind == FaceKind::Side);
        const double mu_f = mu[c.region];
        const double nu_f = side ? nu[c.region] : mu[c.region];
        emit(c.region, "face-corner", nu_f, ratio, false);
        emit(c.region, "face-corner-combined", 1.0 / nu_f + (ratio - 1.0) / mu_f, 1.0, true);
    }

    return rep;
}

}  // namespace ventcel
