#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "ventcel/mesh.hpp"

namespace ventcel {

namespace {

double tet_signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    return dot(cross(b - a, c - a), d - a) / 6.0;
}

// Orientation fix: swapping two labels never changes the tet's faces.
void orient_positive(std::array<int, 4>& t, const std::vector<Vec3>& nodes) {
    if (tet_signed_volume(nodes[t[0]], nodes[t[1]], nodes[t[2]], nodes[t[3]]) < 0.0)
        std::swap(t[2], t[3]);
}

std::array<int, 3> sorted_tri(int a, int b, int c) {
    std::array<int, 3> t{a, b, c};
    std::sort(t.begin(), t.end());
    return t;
}

// Distance from a point to the convex hull of up to four coplanar points,
// evaluated as min over the triangles they span.
double point_to_projected_tet(Vec2 p, const std::array<Vec2, 4>& q) {
    auto in_tri = [&](Vec2 a, Vec2 b, Vec2 c) {
        const double s = cross(b - a, c - a);
        if (std::abs(s) < 1e-30) return false;
        const double sgn = s > 0 ? 1.0 : -1.0;
        return sgn * cross(b - a, p - a) >= 0.0 && sgn * cross(c - b, p - b) >= 0.0 &&
               sgn * cross(a - c, p - c) >= 0.0;
    };
    static constexpr int faces[4][3] = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
    for (const auto& f : faces)
        if (in_tri(q[f[0]], q[f[1]], q[f[2]])) return 0.0;
    auto seg = [&](Vec2 a, Vec2 b) {
        const Vec2 ab = b - a;
        const double l2 = dot(ab, ab);
        double t = l2 > 0 ? dot(p - a, ab) / l2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        return norm(p - (a + t * ab));
    };
    double d = kInf;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) d = std::min(d, seg(q[i], q[j]));
    return d;
}

// Closest distance from a point to a 3D triangle (Ericson).
double point_to_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 ab = b - a, ac = c - a, ap = p - a;
    const double d1 = dot(ab, ap), d2 = dot(ac, ap);
    if (d1 <= 0.0 && d2 <= 0.0) return norm(p - a);
    const Vec3 bp = p - b;
    const double d3 = dot(ab, bp), d4 = dot(ac, bp);
    if (d3 >= 0.0 && d4 <= d3) return norm(p - b);
    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return norm(p - (a + (d1 / (d1 - d3)) * ab));
    const Vec3 cp = p - c;
    const double d5 = dot(ab, cp), d6 = dot(ac, cp);
    if (d6 >= 0.0 && d5 <= d6) return norm(p - c);
    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return norm(p - (a + (d2 / (d2 - d6)) * ac));
    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && d4 - d3 >= 0.0 && d5 - d6 >= 0.0)
        return norm(p - (b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b)));
    const double denom = 1.0 / (va + vb + vc);
    return norm(p - (a + (vb * denom) * ab + (vc * denom) * ac));
}

double point_to_tet(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    // Inside iff p is on the inner side of all four faces.
    const double v = tet_signed_volume(a, b, c, d);
    const double s0 = tet_signed_volume(a, b, c, p);
    const double s1 = tet_signed_volume(a, b, p, d);
    const double s2 = tet_signed_volume(a, p, c, d);
    const double s3 = tet_signed_volume(p, b, c, d);
    const double sgn = v > 0 ? 1.0 : -1.0;
    if (sgn * s0 >= 0 && sgn * s1 >= 0 && sgn * s2 >= 0 && sgn * s3 >= 0) return 0.0;
    return std::min({point_to_triangle(p, a, b, c), point_to_triangle(p, a, b, d),
                     point_to_triangle(p, a, c, d), point_to_triangle(p, b, c, d)});
}

}  // namespace

double TetMesh::total_volume() const {
    double v = 0.0;
    for (const auto& t : tets)
        v += tet_signed_volume(nodes[t[0]], nodes[t[1]], nodes[t[2]], nodes[t[3]]);
    return v;
}

long TetMesh::n_free_nodes() const {
    long n = 0;
    for (NodeClass c : node_class)
        if (c == NodeClass::Interior || c == NodeClass::VentcelInterior) ++n;
    return n;
}

void TetMesh::validate() const {
    if (node_class.size() != nodes.size())
        throw geometry_error("tetmesh: node classification size mismatch");
    for (const auto& t : tets)
        if (tet_signed_volume(nodes[t[0]], nodes[t[1]], nodes[t[2]], nodes[t[3]]) <= 0.0)
            throw geometry_error("tetmesh: non-positive tet volume");

    std::map<std::array<int, 3>, int> count;
    for (const auto& t : tets) {
        ++count[sorted_tri(t[0], t[1], t[2])];
        ++count[sorted_tri(t[0], t[1], t[3])];
        ++count[sorted_tri(t[0], t[2], t[3])];
        ++count[sorted_tri(t[1], t[2], t[3])];
    }
    std::map<std::array<int, 3>, int> tagged;
    for (const auto& bt : boundary) ++tagged[sorted_tri(bt.v[0], bt.v[1], bt.v[2])];
    long n_boundary = 0;
    for (const auto& [f, c] : count) {
        if (c > 2) throw geometry_error("tetmesh: face shared by more than two tets");
        if (c == 1) {
            ++n_boundary;
            if (!tagged.count(f)) throw geometry_error("tetmesh: untagged boundary face");
        } else if (tagged.count(f)) {
            throw geometry_error("tetmesh: interior face tagged as boundary");
        }
    }
    if (n_boundary != static_cast<long>(tagged.size()) ||
        tagged.size() != boundary.size())
        throw geometry_error("tetmesh: boundary tag list mismatch");
}

TetMesh extrude_to_tets(const TriMesh2D& footprint, const PrismDomain& domain, int nz) {
    if (nz < 1) throw geometry_error("extrude_to_tets: need at least one layer");
    const int n2 = static_cast<int>(footprint.nodes.size());
    const double dz = domain.height / nz;

    TetMesh mesh;
    mesh.ventcel_face = domain.ventcel_face;
    mesh.footprint = domain.cross_section;
    mesh.height = domain.height;
    mesh.nodes.reserve(static_cast<std::size_t>(n2) * (nz + 1));
    for (int l = 0; l <= nz; ++l) {
        const double z = (l == nz) ? domain.height : l * dz;
        for (const Vec2& p : footprint.nodes) mesh.nodes.push_back({p.x, p.y, z});
    }

    mesh.tets.reserve(static_cast<std::size_t>(footprint.triangles.size()) * nz * 3);
    for (int l = 0; l < nz; ++l) {
        const int base = l * n2, top = (l + 1) * n2;
        for (const auto& tri : footprint.triangles) {
            // Rotate so the smallest bottom index leads; top copies are
            // always larger, so v0 is the global prism minimum.
            std::array<int, 3> b{tri[0], tri[1], tri[2]};
            while (!(b[0] < b[1] && b[0] < b[2])) std::rotate(b.begin(), b.begin() + 1, b.end());
            const int v0 = base + b[0], v1 = base + b[1], v2 = base + b[2];
            const int v3 = top + b[0], v4 = top + b[1], v5 = top + b[2];
            std::array<std::array<int, 4>, 3> split;
            if (v1 < v2)  // quad (v1,v2,v5,v4) splits along v1-v5
                split = {{{v0, v1, v2, v5}, {v0, v1, v5, v4}, {v0, v4, v5, v3}}};
            else  // along v2-v4
                split = {{{v0, v1, v2, v4}, {v0, v4, v2, v5}, {v0, v4, v5, v3}}};
            for (auto& t : split) {
                orient_positive(t, mesh.nodes);
                mesh.tets.push_back(t);
            }
        }
    }

    // Tagged boundary: bottom and top copies of the footprint plus the side
    // quads, split along the diagonal through their lowest node index so the
    // triangles coincide with tet faces.
    for (const auto& tri : footprint.triangles) {
        mesh.boundary.push_back({{tri[0], tri[1], tri[2]}, {FaceKind::Bottom, -1}});
        const int off = nz * n2;
        mesh.boundary.push_back({{off + tri[0], off + tri[1], off + tri[2]}, {FaceKind::Top, -1}});
    }
    for (const auto& be : footprint.boundary) {
        const FaceSelector face{FaceKind::Side, be.polygon_edge};
        for (int l = 0; l < nz; ++l) {
            const int p = l * n2 + be.a, q = l * n2 + be.b;
            const int pt = p + n2, qt = q + n2;
            if (p < q) {
                mesh.boundary.push_back({{p, q, qt}, face});
                mesh.boundary.push_back({{p, qt, pt}, face});
            } else {
                mesh.boundary.push_back({{p, q, pt}, face});
                mesh.boundary.push_back({{q, qt, pt}, face});
            }
        }
    }

    // Classification follows from the boundary tags alone: a node on the
    // Ventcel face and nothing else is a free trace node; on the Ventcel
    // face and another face it sits on the face boundary and is pinned.
    mesh.node_class.assign(mesh.nodes.size(), NodeClass::Interior);
    std::vector<char> on_ventcel(mesh.nodes.size(), 0), on_other(mesh.nodes.size(), 0);
    for (const auto& bt : mesh.boundary) {
        const bool v = (bt.face == domain.ventcel_face);
        for (int i : bt.v) (v ? on_ventcel : on_other)[i] = 1;
    }
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        if (on_ventcel[i])
            mesh.node_class[i] = on_other[i] ? NodeClass::VentcelBoundary : NodeClass::VentcelInterior;
        else if (on_other[i])
            mesh.node_class[i] = NodeClass::Dirichlet;
    }
    return mesh;
}

GradingSpec GradingSpec::for_level(const PrismDomain& domain, const SingularityInfo& sing,
                                   int level, double mu, double r0) {
    if (level < 1) throw data_error("mesh level must be at least 1");
    GradingSpec spec;
    spec.h = std::pow(2.0, -level);
    spec.nz = std::max(1, static_cast<int>(std::lround(domain.height / spec.h)));
    for (int v : sing.singular_corners())
        spec.corners.push_back({v, mu, r0 > 0.0 ? r0 : default_grading_radius(domain, v)});
    return spec;
}

TetMesh generate_mesh(const PrismDomain& domain, const GradingSpec& spec) {
    if (!(spec.h > 0.0 && spec.h < 1.0)) throw data_error("mesh parameter h must lie in (0,1)");
    TriMesh2D footprint = triangulate_cross_section(domain, spec.h);
    for (const auto& c : spec.corners) {
        const double rmax = max_grading_radius(domain, c.vertex);
        const double r0 = c.r0 > 0.0 ? c.r0 : 0.5 * rmax;
        if (r0 > rmax * (1.0 + 1e-12))
            throw grading_error("grading radius exceeds distance to nearest non-adjacent edge");
        footprint = apply_grading(footprint, domain.cross_section[c.vertex], c.mu, r0);
    }
    TetMesh mesh = extrude_to_tets(footprint, domain, spec.nz);
    return mesh;
}

double SurfaceMesh::total_area() const {
    double a = 0.0;
    for (const auto& t : triangles)
        a += 0.5 * cross(nodes[t[1]] - nodes[t[0]], nodes[t[2]] - nodes[t[0]]);
    return a;
}

SurfaceMesh extract_surface(const TetMesh& mesh, FaceSelector face) {
    SurfaceMesh surf;
    surf.face = face;

    Vec2 origin{0, 0}, tangent{1, 0};
    if (face.kind == FaceKind::Side) {
        if (mesh.footprint.empty())
            throw geometry_error("extract_surface: mesh lacks footprint polygon for side chart");
        const int n = static_cast<int>(mesh.footprint.size());
        if (face.side_edge < 0 || face.side_edge >= n)
            throw geometry_error("extract_surface: side edge out of range");
        origin = mesh.footprint[face.side_edge];
        const Vec2 b = mesh.footprint[(face.side_edge + 1) % n];
        const double len = norm(b - origin);
        tangent = (1.0 / len) * (b - origin);
    }
    auto chart = [&](const Vec3& p) -> Vec2 {
        if (face.kind == FaceKind::Side)
            return {dot(Vec2{p.x, p.y} - origin, tangent), p.z};
        return {p.x, p.y};
    };

    std::vector<int> vol_to_surf(mesh.nodes.size(), -1);
    for (const auto& bt : mesh.boundary) {
        if (!(bt.face == face)) continue;
        std::array<int, 3> tri;
        for (int k = 0; k < 3; ++k) {
            const int vn = bt.v[k];
            if (vol_to_surf[vn] < 0) {
                vol_to_surf[vn] = static_cast<int>(surf.nodes.size());
                surf.nodes.push_back(chart(mesh.nodes[vn]));
                surf.volume_node.push_back(vn);
            }
            tri[k] = vol_to_surf[vn];
        }
        // Normalize to CCW in the chart.
        if (cross(surf.nodes[tri[1]] - surf.nodes[tri[0]], surf.nodes[tri[2]] - surf.nodes[tri[0]]) < 0.0)
            std::swap(tri[1], tri[2]);
        surf.triangles.push_back(tri);
    }
    if (surf.triangles.empty()) throw geometry_error("extract_surface: no boundary triangles on face");
    return surf;
}

SurfaceMesh surface_from_trimesh(const TriMesh2D& mesh) {
    SurfaceMesh surf;
    surf.face = {FaceKind::Bottom, -1};
    surf.nodes = mesh.nodes;
    surf.triangles = mesh.triangles;
    surf.volume_node.resize(mesh.nodes.size());
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) surf.volume_node[i] = static_cast<int>(i);
    return surf;
}

long MeshSizeReport::singular_tet_count() const {
    long c = 0;
    for (double ri : r)
        if (ri <= 1e-14) ++c;
    return c;
}

double MeshSizeReport::max_log_grading_ratio() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] <= 1e-14) continue;
        const double law = has_singular ? h * std::pow(r[i], 1.0 - mu) : h;
        worst = std::max(worst, std::abs(std::log(inplane[i] / law)));
    }
    return worst;
}

double MeshSizeReport::max_corner_ratio() const {
    double worst = 0.0;
    const double law = std::pow(h, 1.0 / mu);
    for (std::size_t i = 0; i < r.size(); ++i)
        if (r[i] <= 1e-14) worst = std::max(worst, inplane[i] / law);
    return worst;
}

std::string MeshSizeReport::to_csv() const {
    std::ostringstream os;
    os << "r,R,inplane_extent,vertical_extent\n";
    char line[128];
    for (std::size_t i = 0; i < r.size(); ++i) {
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g\n", r[i], R[i], inplane[i],
                      vertical[i]);
        os << line;
    }
    return os.str();
}

MeshSizeReport mesh_size_report(const TetMesh& mesh, Vec2 corner, double h, double mu) {
    MeshSizeReport rep;
    rep.h = h;
    rep.mu = mu;
    rep.has_singular = true;
    const std::size_t n = mesh.tets.size();
    rep.r.resize(n);
    rep.R.resize(n);
    rep.inplane.resize(n);
    rep.vertical.resize(n);
    const Vec3 vertex{corner.x, corner.y, 0.0};  // singular vertex at the edge foot
    for (std::size_t i = 0; i < n; ++i) {
        const auto& t = mesh.tets[i];
        std::array<Vec3, 4> p;
        std::array<Vec2, 4> q;
        for (int k = 0; k < 4; ++k) {
            p[k] = mesh.nodes[t[k]];
            q[k] = {p[k].x, p[k].y};
        }
        rep.r[i] = point_to_projected_tet(corner, q);
        rep.R[i] = point_to_tet(vertex, p[0], p[1], p[2], p[3]);
        double dxy = 0.0, zmin = p[0].z, zmax = p[0].z;
        for (int a = 0; a < 4; ++a) {
            zmin = std::min(zmin, p[a].z);
            zmax = std::max(zmax, p[a].z);
            for (int b = a + 1; b < 4; ++b) dxy = std::max(dxy, norm(q[a] - q[b]));
        }
        rep.inplane[i] = dxy;
        rep.vertical[i] = zmax - zmin;
    }
    return rep;
}

MeshSizeReport mesh_size_report(const TetMesh& mesh, const SingularityInfo& sing, double h,
                                double mu) {
    const std::vector<int> corners = sing.singular_corners();
    if (corners.empty()) {
        MeshSizeReport rep = mesh_size_report(mesh, Vec2{0, 0}, h, mu);
        rep.has_singular = false;
        std::fill(rep.r.begin(), rep.r.end(), kInf);
        std::fill(rep.R.begin(), rep.R.end(), kInf);
        return rep;
    }
    return mesh_size_report(mesh, sing.vertex_positions[corners.front()], h, mu);
}

}  // namespace ventcel
