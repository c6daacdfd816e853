#include <algorithm>
#include <map>
#include <numbers>
#include <numeric>

#include "ventcel/mesh.hpp"

namespace ventcel {

namespace {

double tri_area(const Vec2& a, const Vec2& b, const Vec2& c) {
    return 0.5 * cross(b - a, c - a);
}

double tri_diameter(const Vec2& a, const Vec2& b, const Vec2& c) {
    return std::max({norm(b - a), norm(c - b), norm(a - c)});
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return norm(p - (a + t * ab));
}

// Inclusive point-in-triangle test against a CCW triangle.
bool point_in_triangle(Vec2 p, Vec2 a, Vec2 b, Vec2 c, double eps) {
    return cross(b - a, p - a) >= -eps && cross(c - b, p - b) >= -eps &&
           cross(a - c, p - c) >= -eps;
}

std::vector<std::array<int, 3>> ear_clip(const std::vector<Vec2>& poly) {
    const int n = static_cast<int>(poly.size());
    double scale = 0.0;
    for (const Vec2& p : poly) scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
    const double eps = 1e-14 * scale * scale;

    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<std::array<int, 3>> tris;
    tris.reserve(n - 2);

    while (idx.size() > 3) {
        bool clipped = false;
        const int m = static_cast<int>(idx.size());
        for (int k = 0; k < m; ++k) {
            const int ip = idx[(k + m - 1) % m];
            const int ic = idx[k];
            const int in = idx[(k + 1) % m];
            const Vec2 a = poly[ip], b = poly[ic], c = poly[in];
            if (cross(b - a, c - b) <= eps) continue;  // reflex or straight corner
            bool blocked = false;
            for (int j : idx) {
                if (j == ip || j == ic || j == in) continue;
                if (point_in_triangle(poly[j], a, b, c, eps)) {
                    blocked = true;
                    break;
                }
            }
            if (blocked) continue;
            tris.push_back({ip, ic, in});
            idx.erase(idx.begin() + k);
            clipped = true;
            break;
        }
        if (!clipped) throw geometry_error("triangulation failed: no ear found (polygon not simple?)");
    }
    tris.push_back({idx[0], idx[1], idx[2]});
    return tris;
}

}  // namespace

double TriMesh2D::max_diameter() const {
    double d = 0.0;
    for (const auto& t : triangles)
        d = std::max(d, tri_diameter(nodes[t[0]], nodes[t[1]], nodes[t[2]]));
    return d;
}

void TriMesh2D::validate(const std::vector<Vec2>* polygon) const {
    for (const auto& t : triangles)
        if (tri_area(nodes[t[0]], nodes[t[1]], nodes[t[2]]) <= 0.0)
            throw geometry_error("trimesh: non-positive triangle area");

    // Edge incidence: interior edges twice, boundary edges once, and the
    // recorded boundary set must coincide with the combinatorial boundary.
    std::map<std::pair<int, int>, int> count;
    for (const auto& t : triangles)
        for (int e = 0; e < 3; ++e) {
            int a = t[e], b = t[(e + 1) % 3];
            if (a > b) std::swap(a, b);
            ++count[{a, b}];
        }
    std::map<std::pair<int, int>, int> tagged;
    for (const auto& be : boundary) {
        int a = be.a, b = be.b;
        if (a > b) std::swap(a, b);
        ++tagged[{a, b}];
    }
    for (const auto& [e, c] : count) {
        if (c > 2) throw geometry_error("trimesh: edge shared by more than two triangles");
        const bool on_boundary = tagged.count(e) > 0;
        if (c == 1 && !on_boundary) throw geometry_error("trimesh: untagged boundary edge");
        if (c == 2 && on_boundary) throw geometry_error("trimesh: interior edge tagged as boundary");
    }
    if (tagged.size() != boundary.size())
        throw geometry_error("trimesh: duplicate boundary edge tags");

    if (polygon) {
        const int n = static_cast<int>(polygon->size());
        for (const auto& be : boundary) {
            if (be.polygon_edge < 0 || be.polygon_edge >= n)
                throw geometry_error("trimesh: boundary tag out of range");
            const Vec2 a = (*polygon)[be.polygon_edge];
            const Vec2 b = (*polygon)[(be.polygon_edge + 1) % n];
            if (point_segment_distance(nodes[be.a], a, b) > 1e-12 ||
                point_segment_distance(nodes[be.b], a, b) > 1e-12)
                throw geometry_error("trimesh: boundary node off its polygon edge");
        }
    }
}

TriMesh2D refine_uniform(const TriMesh2D& mesh, int levels) {
    TriMesh2D cur = mesh;
    for (int l = 0; l < levels; ++l) {
        TriMesh2D next;
        next.nodes = cur.nodes;
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            std::pair<int, int> key{std::min(a, b), std::max(a, b)};
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            const int id = static_cast<int>(next.nodes.size());
            next.nodes.push_back(0.5 * (cur.nodes[a] + cur.nodes[b]));
            midpoint.emplace(key, id);
            return id;
        };
        next.triangles.reserve(4 * cur.triangles.size());
        for (const auto& t : cur.triangles) {
            const int ab = mid(t[0], t[1]);
            const int bc = mid(t[1], t[2]);
            const int ca = mid(t[2], t[0]);
            next.triangles.push_back({t[0], ab, ca});
            next.triangles.push_back({t[1], bc, ab});
            next.triangles.push_back({t[2], ca, bc});
            next.triangles.push_back({ab, bc, ca});
        }
        next.boundary.reserve(2 * cur.boundary.size());
        for (const auto& be : cur.boundary) {
            const int m = mid(be.a, be.b);
            next.boundary.push_back({be.a, m, be.polygon_edge});
            next.boundary.push_back({m, be.b, be.polygon_edge});
        }
        cur = std::move(next);
    }
    return cur;
}

TriMesh2D triangulate_cross_section(const PrismDomain& domain, double h0) {
    if (!(h0 > 0.0)) throw geometry_error("triangulate_cross_section: h0 must be positive");
    const std::vector<Vec2>& poly = domain.cross_section;
    const int n = domain.n_vertices();

    TriMesh2D mesh;
    mesh.nodes = poly;
    mesh.triangles = ear_clip(poly);
    for (int i = 0; i < n; ++i) mesh.boundary.push_back({i, (i + 1) % n, i});

    const double target = std::sqrt(2.0) * h0 * (1.0 + 1e-12);
    int guard = 0;
    while (mesh.max_diameter() > target) {
        mesh = refine_uniform(mesh, 1);
        if (++guard > 40) throw geometry_error("triangulate_cross_section: refinement overflow");
    }

    // Separate singular corners: no triangle may touch two of them.  One
    // extra refinement always suffices because children keep at most one
    // parent vertex.
    std::vector<char> singular(n, 0);
    for (int i = 0; i < n; ++i)
        if (interior_angle(poly, i) > std::numbers::pi + kAngleTol) singular[i] = 1;
    auto max_singular_touch = [&]() {
        int worst = 0;
        for (const auto& t : mesh.triangles) {
            int c = 0;
            for (int v : t)
                if (v < n && singular[v]) ++c;
            worst = std::max(worst, c);
        }
        return worst;
    };
    if (max_singular_touch() > 1) {
        mesh = refine_uniform(mesh, 1);
        if (max_singular_touch() > 1)
            throw geometry_error("triangulate_cross_section: singular corners not separated");
    }

    mesh.validate(&poly);
    return mesh;
}

double max_grading_radius(const PrismDomain& domain, int vertex) {
    const std::vector<Vec2>& poly = domain.cross_section;
    const int n = domain.n_vertices();
    if (vertex < 0 || vertex >= n) throw geometry_error("grading corner index out of range");
    double d = kInf;
    for (int e = 0; e < n; ++e) {
        if (e == vertex || (e + 1) % n == vertex) continue;  // adjacent edges
        d = std::min(d, point_segment_distance(poly[vertex], poly[e], poly[(e + 1) % n]));
    }
    return d;
}

double default_grading_radius(const PrismDomain& domain, int vertex) {
    return 0.5 * max_grading_radius(domain, vertex);
}

TriMesh2D apply_grading(const TriMesh2D& mesh, Vec2 corner, double mu, double r0) {
    if (!(mu > 0.0 && mu <= 1.0)) throw grading_error("grading exponent mu must lie in (0,1]");
    if (!(r0 > 0.0)) throw grading_error("grading radius r0 must be positive");
    if (mu == 1.0) return mesh;

    // The corner must be a mesh node so that corner elements stay anchored.
    bool corner_found = false;
    for (const Vec2& p : mesh.nodes)
        if (norm(p - corner) < 1e-12) {
            corner_found = true;
            break;
        }
    if (!corner_found) throw grading_error("grading corner is not a mesh node");

    TriMesh2D out = mesh;
    const double inv_mu = 1.0 / mu;
    for (Vec2& p : out.nodes) {
        const Vec2 d = p - corner;
        const double r = norm(d);
        if (r <= 0.0 || r >= r0) continue;
        const double rg = r0 * std::pow(r / r0, inv_mu);
        p = corner + (rg / r) * d;
    }

    for (std::size_t i = 0; i < out.triangles.size(); ++i) {
        const auto& t = out.triangles[i];
        const auto& s = mesh.triangles[i];
        const double a = tri_area(out.nodes[t[0]], out.nodes[t[1]], out.nodes[t[2]]);
        const double a0 = tri_area(mesh.nodes[s[0]], mesh.nodes[s[1]], mesh.nodes[s[2]]);
        if (!(a >= 1e-14 * a0))
            throw grading_error("grading degenerated a triangle (area ratio below 1e-14)");
    }
    return out;
}

}  // namespace ventcel
