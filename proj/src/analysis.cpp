#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "ventcel/analysis.hpp"

namespace ventcel {

namespace {

constexpr double kBaryTolStrict = 1e-10;
constexpr double kBaryTolLoose = 1e-9;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// 4-point degree-2 tet rule and 3-point edge-midpoint triangle rule, both
// with equal weights (measure / npoints).
constexpr double kTetA = 0.58541019662496845;
constexpr double kTetB = 0.13819660112501051;
constexpr std::array<std::array<double, 4>, 4> kTetBary{{
    {kTetA, kTetB, kTetB, kTetB},
    {kTetB, kTetA, kTetB, kTetB},
    {kTetB, kTetB, kTetA, kTetB},
    {kTetB, kTetB, kTetB, kTetA},
}};
constexpr std::array<std::array<double, 3>, 3> kTriMidBary{{
    {0.5, 0.5, 0.0},
    {0.0, 0.5, 0.5},
    {0.5, 0.0, 0.5},
}};

// Dunavant degree-4 rule, 6 points, weights in area coordinates (sum 1).
struct Dunavant6 {
    double w;
    std::array<double, 3> bary;
};
constexpr std::array<Dunavant6, 6> kDunavant6{{
    {0.223381589678011, {0.108103018168070, 0.445948490915965, 0.445948490915965}},
    {0.223381589678011, {0.445948490915965, 0.108103018168070, 0.445948490915965}},
    {0.223381589678011, {0.445948490915965, 0.445948490915965, 0.108103018168070}},
    {0.109951743655322, {0.816847572980459, 0.091576213509771, 0.091576213509771}},
    {0.109951743655322, {0.091576213509771, 0.816847572980459, 0.091576213509771}},
    {0.109951743655322, {0.091576213509771, 0.091576213509771, 0.816847572980459}},
}};

double tet_volume6(const std::array<Vec3, 4>& p) {
    return dot(cross(p[1] - p[0], p[2] - p[0]), p[3] - p[0]);
}

// Barycentric shape-function gradients; constant over the tet.
std::array<Vec3, 4> tet_gradients(const std::array<Vec3, 4>& p) {
    const double vol6 = tet_volume6(p);
    std::array<Vec3, 4> g;
    g[1] = (1.0 / vol6) * cross(p[2] - p[0], p[3] - p[0]);
    g[2] = (1.0 / vol6) * cross(p[3] - p[0], p[1] - p[0]);
    g[3] = (1.0 / vol6) * cross(p[1] - p[0], p[2] - p[0]);
    g[0] = {-g[1].x - g[2].x - g[3].x, -g[1].y - g[2].y - g[3].y, -g[1].z - g[2].z - g[3].z};
    return g;
}

std::array<Vec2, 3> tri_gradients(const std::array<Vec2, 3>& p) {
    const double area2 = cross(p[1] - p[0], p[2] - p[0]);
    std::array<Vec2, 3> g;
    g[1] = (1.0 / area2) * Vec2{p[2].y - p[0].y, p[0].x - p[2].x};
    g[2] = (1.0 / area2) * Vec2{p[0].y - p[1].y, p[1].x - p[0].x};
    g[0] = {-g[1].x - g[2].x, -g[1].y - g[2].y};
    return g;
}

bool tet_barycentric(const std::array<Vec3, 4>& p, const Vec3& q, std::array<double, 4>& bary) {
    const Vec3 e1 = p[1] - p[0], e2 = p[2] - p[0], e3 = p[3] - p[0], r = q - p[0];
    const double det = dot(cross(e1, e2), e3);
    if (det == 0.0) return false;
    bary[1] = dot(cross(r, e2), e3) / det;
    bary[2] = dot(cross(e1, r), e3) / det;
    bary[3] = dot(cross(e1, e2), r) / det;
    bary[0] = 1.0 - bary[1] - bary[2] - bary[3];
    return true;
}

bool tri_barycentric(const std::array<Vec2, 3>& p, const Vec2& q, std::array<double, 3>& bary) {
    const double det = cross(p[1] - p[0], p[2] - p[0]);
    if (det == 0.0) return false;
    bary[1] = cross(q - p[0], p[2] - p[0]) / det;
    bary[2] = cross(p[1] - p[0], q - p[0]) / det;
    bary[0] = 1.0 - bary[1] - bary[2];
    return true;
}

int grid_res(std::size_t n_elems, double exponent) {
    const double r = std::pow(static_cast<double>(n_elems), exponent);
    return std::clamp(static_cast<int>(std::lround(r)), 4, 128);
}

int clamp_cell(double x, double lo, double hi, int n) {
    if (hi <= lo) return 0;
    const int c = static_cast<int>((x - lo) / (hi - lo) * n);
    return std::clamp(c, 0, n - 1);
}

// Orthonormal chart frame recovered from the first surface triangle: the
// chart is an isometry, so [dp1 dp2] = [e1 e2] [dq1 dq2] has a unique solution.
std::pair<Vec3, Vec3> chart_frame(const SurfaceMesh& surf, const TetMesh& mesh) {
    if (surf.triangles.empty()) throw data_error("chart_frame: empty surface mesh");
    const auto& t = surf.triangles.front();
    const Vec2 dq1 = surf.nodes[t[1]] - surf.nodes[t[0]];
    const Vec2 dq2 = surf.nodes[t[2]] - surf.nodes[t[0]];
    const Vec3 dp1 = mesh.nodes[surf.volume_node[t[1]]] - mesh.nodes[surf.volume_node[t[0]]];
    const Vec3 dp2 = mesh.nodes[surf.volume_node[t[2]]] - mesh.nodes[surf.volume_node[t[0]]];
    const double det = cross(dq1, dq2);
    const Vec3 e1 = (1.0 / det) * (dq2.y * dp1 - dq1.y * dp2);
    const Vec3 e2 = (1.0 / det) * (dq1.x * dp2 - dq2.x * dp1);
    return {e1, e2};
}

Vec2 surface_tri_gradient(const SurfaceMesh& surf, const std::vector<double>& coeffs, int tri) {
    const auto& t = surf.triangles[tri];
    const auto g = tri_gradients({surf.nodes[t[0]], surf.nodes[t[1]], surf.nodes[t[2]]});
    Vec2 grad{0, 0};
    for (int a = 0; a < 3; ++a) grad = grad + coeffs[surf.volume_node[t[a]]] * g[a];
    return grad;
}

}  // namespace

PointLocator::PointLocator(const TetMesh& mesh) : mesh_(&mesh) {
    if (mesh.tets.empty()) throw data_error("PointLocator: empty mesh");
    lo_ = hi_ = mesh.nodes.front();
    for (const auto& p : mesh.nodes) {
        lo_ = {std::min(lo_.x, p.x), std::min(lo_.y, p.y), std::min(lo_.z, p.z)};
        hi_ = {std::max(hi_.x, p.x), std::max(hi_.y, p.y), std::max(hi_.z, p.z)};
    }
    const double pad = 1e-12 * (norm(hi_ - lo_) + 1.0);
    lo_ = lo_ - Vec3{pad, pad, pad};
    hi_ = hi_ + Vec3{pad, pad, pad};
    nx_ = ny_ = nz_ = grid_res(mesh.tets.size(), 1.0 / 3.0);
    cells_.assign(static_cast<std::size_t>(nx_) * ny_ * nz_, {});
    for (std::size_t t = 0; t < mesh.tets.size(); ++t) {
        Vec3 blo = mesh.nodes[mesh.tets[t][0]], bhi = blo;
        for (int a = 1; a < 4; ++a) {
            const Vec3& p = mesh.nodes[mesh.tets[t][a]];
            blo = {std::min(blo.x, p.x), std::min(blo.y, p.y), std::min(blo.z, p.z)};
            bhi = {std::max(bhi.x, p.x), std::max(bhi.y, p.y), std::max(bhi.z, p.z)};
        }
        const int ix0 = clamp_cell(blo.x, lo_.x, hi_.x, nx_), ix1 = clamp_cell(bhi.x, lo_.x, hi_.x, nx_);
        const int iy0 = clamp_cell(blo.y, lo_.y, hi_.y, ny_), iy1 = clamp_cell(bhi.y, lo_.y, hi_.y, ny_);
        const int iz0 = clamp_cell(blo.z, lo_.z, hi_.z, nz_), iz1 = clamp_cell(bhi.z, lo_.z, hi_.z, nz_);
        for (int ix = ix0; ix <= ix1; ++ix)
            for (int iy = iy0; iy <= iy1; ++iy)
                for (int iz = iz0; iz <= iz1; ++iz)
                    cells_[(static_cast<std::size_t>(ix) * ny_ + iy) * nz_ + iz].push_back(
                        static_cast<int>(t));
    }
}

bool PointLocator::candidates_pass(const std::vector<int>& cand, const Vec3& p, double tol,
                                   std::array<double, 4>& bary, int& tet) const {
    for (int t : cand) {
        const auto& v = mesh_->tets[t];
        std::array<double, 4> b;
        if (!tet_barycentric({mesh_->nodes[v[0]], mesh_->nodes[v[1]], mesh_->nodes[v[2]],
                              mesh_->nodes[v[3]]},
                             p, b))
            continue;
        if (std::min({b[0], b[1], b[2], b[3]}) >= -tol) {
            bary = b;
            tet = t;
            return true;
        }
    }
    return false;
}

int PointLocator::locate(const Vec3& p, std::array<double, 4>& bary) const {
    const int ix = clamp_cell(p.x, lo_.x, hi_.x, nx_);
    const int iy = clamp_cell(p.y, lo_.y, hi_.y, ny_);
    const int iz = clamp_cell(p.z, lo_.z, hi_.z, nz_);
    const auto& own = cells_[(static_cast<std::size_t>(ix) * ny_ + iy) * nz_ + iz];
    int tet = -1;
    if (candidates_pass(own, p, kBaryTolStrict, bary, tet)) return tet;
    if (candidates_pass(own, p, kBaryTolLoose, bary, tet)) return tet;
    for (int dx = -1; dx <= 1; ++dx)
        for (int dy = -1; dy <= 1; ++dy)
            for (int dz = -1; dz <= 1; ++dz) {
                if (dx == 0 && dy == 0 && dz == 0) continue;
                const int jx = ix + dx, jy = iy + dy, jz = iz + dz;
                if (jx < 0 || jx >= nx_ || jy < 0 || jy >= ny_ || jz < 0 || jz >= nz_) continue;
                const auto& cell = cells_[(static_cast<std::size_t>(jx) * ny_ + jy) * nz_ + jz];
                if (candidates_pass(cell, p, kBaryTolLoose, bary, tet)) return tet;
            }
    throw location_error("point (" + fmt17(p.x) + ", " + fmt17(p.y) + ", " + fmt17(p.z) +
                         ") not found in mesh");
}

SurfaceLocator::SurfaceLocator(const SurfaceMesh& surface) : surface_(&surface) {
    if (surface.triangles.empty()) throw data_error("SurfaceLocator: empty surface mesh");
    lo_ = hi_ = surface.nodes.front();
    for (const auto& p : surface.nodes) {
        lo_ = {std::min(lo_.x, p.x), std::min(lo_.y, p.y)};
        hi_ = {std::max(hi_.x, p.x), std::max(hi_.y, p.y)};
    }
    const double pad = 1e-12 * (norm(hi_ - lo_) + 1.0);
    lo_ = lo_ - Vec2{pad, pad};
    hi_ = hi_ + Vec2{pad, pad};
    nx_ = ny_ = grid_res(surface.triangles.size(), 0.5);
    cells_.assign(static_cast<std::size_t>(nx_) * ny_, {});
    for (std::size_t t = 0; t < surface.triangles.size(); ++t) {
        Vec2 blo = surface.nodes[surface.triangles[t][0]], bhi = blo;
        for (int a = 1; a < 3; ++a) {
            const Vec2& p = surface.nodes[surface.triangles[t][a]];
            blo = {std::min(blo.x, p.x), std::min(blo.y, p.y)};
            bhi = {std::max(bhi.x, p.x), std::max(bhi.y, p.y)};
        }
        const int ix0 = clamp_cell(blo.x, lo_.x, hi_.x, nx_), ix1 = clamp_cell(bhi.x, lo_.x, hi_.x, nx_);
        const int iy0 = clamp_cell(blo.y, lo_.y, hi_.y, ny_), iy1 = clamp_cell(bhi.y, lo_.y, hi_.y, ny_);
        for (int ix = ix0; ix <= ix1; ++ix)
            for (int iy = iy0; iy <= iy1; ++iy)
                cells_[static_cast<std::size_t>(ix) * ny_ + iy].push_back(static_cast<int>(t));
    }
}

bool SurfaceLocator::candidates_pass(const std::vector<int>& cand, const Vec2& p, double tol,
                                     std::array<double, 3>& bary, int& tri) const {
    for (int t : cand) {
        const auto& v = surface_->triangles[t];
        std::array<double, 3> b;
        if (!tri_barycentric({surface_->nodes[v[0]], surface_->nodes[v[1]], surface_->nodes[v[2]]},
                             p, b))
            continue;
        if (std::min({b[0], b[1], b[2]}) >= -tol) {
            bary = b;
            tri = t;
            return true;
        }
    }
    return false;
}

int SurfaceLocator::locate(const Vec2& p, std::array<double, 3>& bary) const {
    const int ix = clamp_cell(p.x, lo_.x, hi_.x, nx_);
    const int iy = clamp_cell(p.y, lo_.y, hi_.y, ny_);
    const auto& own = cells_[static_cast<std::size_t>(ix) * ny_ + iy];
    int tri = -1;
    if (candidates_pass(own, p, kBaryTolStrict, bary, tri)) return tri;
    if (candidates_pass(own, p, kBaryTolLoose, bary, tri)) return tri;
    for (int dx = -1; dx <= 1; ++dx)
        for (int dy = -1; dy <= 1; ++dy) {
            if (dx == 0 && dy == 0) continue;
            const int jx = ix + dx, jy = iy + dy;
            if (jx < 0 || jx >= nx_ || jy < 0 || jy >= ny_) continue;
            if (candidates_pass(cells_[static_cast<std::size_t>(jx) * ny_ + jy], p, kBaryTolLoose,
                                bary, tri))
                return tri;
        }
    throw location_error("chart point (" + fmt17(p.x) + ", " + fmt17(p.y) + ") not found in surface mesh");
}

double evaluate(const Solution& sol, const PointLocator& loc, const Vec3& p) {
    std::array<double, 4> bary;
    const int t = loc.locate(p, bary);
    // Clamp boundary roundoff so the value stays a convex combination.
    double sum = 0.0, v = 0.0;
    for (int a = 0; a < 4; ++a) {
        const double b = std::max(bary[a], 0.0);
        sum += b;
        v += b * sol.coeffs[loc.mesh().tets[t][a]];
    }
    return v / sum;
}

Vec3 evaluate_gradient(const Solution& sol, const PointLocator& loc, const Vec3& p) {
    std::array<double, 4> bary;
    const int t = loc.locate(p, bary);
    const auto& v = loc.mesh().tets[t];
    const auto g = tet_gradients({loc.mesh().nodes[v[0]], loc.mesh().nodes[v[1]],
                                  loc.mesh().nodes[v[2]], loc.mesh().nodes[v[3]]});
    Vec3 grad{0, 0, 0};
    for (int a = 0; a < 4; ++a) grad = grad + sol.coeffs[v[a]] * g[a];
    return grad;
}

double VNormParts::total() const { return std::sqrt(l2_volume_sq + h1_volume_sq + face_seminorm_sq); }
double VNormParts::volume_h1() const { return std::sqrt(l2_volume_sq + h1_volume_sq); }
double VNormParts::face() const { return std::sqrt(face_seminorm_sq); }

VNormParts vnorm_diff(const Solution& a, const Solution& b) {
    const bool a_fine = a.mesh->tets.size() >= b.mesh->tets.size();
    const Solution& fine = a_fine ? a : b;
    const Solution& coarse = a_fine ? b : a;
    if (fine.mesh->ventcel_face != coarse.mesh->ventcel_face)
        throw data_error("vnorm_diff: solutions use different boundary faces");

    const TetMesh& fm = *fine.mesh;
    const PointLocator loc(*coarse.mesh);
    VNormParts out;
    for (const auto& t : fm.tets) {
        const std::array<Vec3, 4> p{fm.nodes[t[0]], fm.nodes[t[1]], fm.nodes[t[2]], fm.nodes[t[3]]};
        const auto g = tet_gradients(p);
        Vec3 gf{0, 0, 0};
        for (int i = 0; i < 4; ++i) gf = gf + fine.coeffs[t[i]] * g[i];
        const double w = std::abs(tet_volume6(p)) / 6.0 / 4.0;
        for (const auto& bary : kTetBary) {
            Vec3 x{0, 0, 0};
            double vf = 0.0;
            for (int i = 0; i < 4; ++i) {
                x = x + bary[i] * p[i];
                vf += bary[i] * fine.coeffs[t[i]];
            }
            const double dv = vf - evaluate(coarse, loc, x);
            const Vec3 dg = gf - evaluate_gradient(coarse, loc, x);
            out.l2_volume_sq += w * dv * dv;
            out.h1_volume_sq += w * dot(dg, dg);
        }
    }

    const SurfaceMesh fs = extract_surface(fm, fm.ventcel_face);
    const SurfaceMesh cs = extract_surface(*coarse.mesh, coarse.mesh->ventcel_face);
    const SurfaceLocator sloc(cs);
    for (std::size_t ti = 0; ti < fs.triangles.size(); ++ti) {
        const auto& t = fs.triangles[ti];
        const std::array<Vec2, 3> q{fs.nodes[t[0]], fs.nodes[t[1]], fs.nodes[t[2]]};
        const Vec2 gf = surface_tri_gradient(fs, fine.coeffs, static_cast<int>(ti));
        const double w = std::abs(cross(q[1] - q[0], q[2] - q[0])) / 2.0 / 3.0;
        for (const auto& bary : kTriMidBary) {
            Vec2 x{0, 0};
            for (int i = 0; i < 3; ++i) x = x + bary[i] * q[i];
            std::array<double, 3> cb;
            const int ct = sloc.locate(x, cb);
            const Vec2 dg = gf - surface_tri_gradient(cs, coarse.coeffs, ct);
            out.face_seminorm_sq += w * dot(dg, dg);
        }
    }
    return out;
}

VNormParts vnorm_error_exact(const Solution& sol, const ExactSolution& exact) {
    const TetMesh& m = *sol.mesh;
    VNormParts out;
    for (const auto& t : m.tets) {
        const std::array<Vec3, 4> p{m.nodes[t[0]], m.nodes[t[1]], m.nodes[t[2]], m.nodes[t[3]]};
        const auto g = tet_gradients(p);
        Vec3 gh{0, 0, 0};
        for (int i = 0; i < 4; ++i) gh = gh + sol.coeffs[t[i]] * g[i];
        const double w = std::abs(tet_volume6(p)) / 6.0 / 4.0;
        for (const auto& bary : kTetBary) {
            Vec3 x{0, 0, 0};
            double vh = 0.0;
            for (int i = 0; i < 4; ++i) {
                x = x + bary[i] * p[i];
                vh += bary[i] * sol.coeffs[t[i]];
            }
            const double dv = exact.value(x) - vh;
            const Vec3 dg = exact.gradient(x) - gh;
            out.l2_volume_sq += w * dv * dv;
            out.h1_volume_sq += w * dot(dg, dg);
        }
    }

    const SurfaceMesh surf = extract_surface(m, m.ventcel_face);
    const auto [e1, e2] = chart_frame(surf, m);
    for (std::size_t ti = 0; ti < surf.triangles.size(); ++ti) {
        const auto& t = surf.triangles[ti];
        const std::array<Vec2, 3> q{surf.nodes[t[0]], surf.nodes[t[1]], surf.nodes[t[2]]};
        const Vec2 gh = surface_tri_gradient(surf, sol.coeffs, static_cast<int>(ti));
        const std::array<Vec3, 3> p{m.nodes[surf.volume_node[t[0]]], m.nodes[surf.volume_node[t[1]]],
                                    m.nodes[surf.volume_node[t[2]]]};
        const double w = std::abs(cross(q[1] - q[0], q[2] - q[0])) / 2.0 / 3.0;
        for (const auto& bary : kTriMidBary) {
            Vec3 x{0, 0, 0};
            for (int i = 0; i < 3; ++i) x = x + bary[i] * p[i];
            const Vec3 ge = exact.gradient(x);
            const Vec2 dg = Vec2{dot(ge, e1), dot(ge, e2)} - gh;
            out.face_seminorm_sq += w * dot(dg, dg);
        }
    }
    return out;
}

VNormParts solution_vnorm(const Solution& sol) {
    const TetMesh& m = *sol.mesh;
    VNormParts out;
    for (const auto& t : m.tets) {
        const std::array<Vec3, 4> p{m.nodes[t[0]], m.nodes[t[1]], m.nodes[t[2]], m.nodes[t[3]]};
        const auto g = tet_gradients(p);
        const double vol = std::abs(tet_volume6(p)) / 6.0;
        Vec3 gh{0, 0, 0};
        for (int i = 0; i < 4; ++i) gh = gh + sol.coeffs[t[i]] * g[i];
        out.h1_volume_sq += vol * dot(gh, gh);
        // Exact P1 mass: V/10 on the diagonal, V/20 off it.
        double diag = 0.0, all = 0.0;
        for (int i = 0; i < 4; ++i) {
            diag += sol.coeffs[t[i]] * sol.coeffs[t[i]];
            all += sol.coeffs[t[i]];
        }
        out.l2_volume_sq += vol / 20.0 * (diag + all * all);
    }
    const SurfaceMesh surf = extract_surface(m, m.ventcel_face);
    for (std::size_t ti = 0; ti < surf.triangles.size(); ++ti) {
        const auto& t = surf.triangles[ti];
        const std::array<Vec2, 3> q{surf.nodes[t[0]], surf.nodes[t[1]], surf.nodes[t[2]]};
        const double area = std::abs(cross(q[1] - q[0], q[2] - q[0])) / 2.0;
        const Vec2 gh = surface_tri_gradient(surf, sol.coeffs, static_cast<int>(ti));
        out.face_seminorm_sq += area * dot(gh, gh);
    }
    return out;
}

std::vector<double> interpolate_nodal(const TriMesh2D& mesh, const PlaneFn& f) {
    std::vector<double> v(mesh.nodes.size());
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        v[i] = f(mesh.nodes[i]);
        if (!std::isfinite(v[i])) throw data_error("interpolate_nodal: f not finite at a mesh node");
    }
    return v;
}

double InterpError::l2() const { return std::sqrt(l2_sq); }
double InterpError::h1() const { return std::sqrt(h1_sq); }

InterpError interpolation_error_2d(const TriMesh2D& mesh, const PlaneFn& f,
                                   const PlaneGradFn& grad_f) {
    const std::vector<double> v = interpolate_nodal(mesh, f);
    InterpError out;
    for (const auto& t : mesh.triangles) {
        const std::array<Vec2, 3> p{mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]]};
        const auto g = tri_gradients(p);
        Vec2 gh{0, 0};
        for (int i = 0; i < 3; ++i) gh = gh + v[t[i]] * g[i];
        const double area = std::abs(cross(p[1] - p[0], p[2] - p[0])) / 2.0;
        for (const auto& [w, bary] : kDunavant6) {
            Vec2 x{0, 0};
            double vh = 0.0;
            for (int i = 0; i < 3; ++i) {
                x = x + bary[i] * p[i];
                vh += bary[i] * v[t[i]];
            }
            const double dv = f(x) - vh;
            const Vec2 dg = grad_f(x) - gh;
            out.l2_sq += w * area * dv * dv;
            out.h1_sq += w * area * dot(dg, dg);
        }
    }
    return out;
}

std::vector<double> convergence_rates(std::span<const double> values) {
    for (double v : values)
        if (!(v > 0.0) || !std::isfinite(v))
            throw data_error("convergence_rates: values must be finite and positive");
    std::vector<double> rates;
    for (std::size_t k = 0; k + 1 < values.size(); ++k)
        rates.push_back(std::log2(values[k] / values[k + 1]));
    return rates;
}

std::string ConvergenceReport::to_csv() const {
    std::string out = "h,n_free,n_tets,value,rate\n";
    for (std::size_t i = 0; i < levels.size(); ++i) {
        out += fmt17(h[i]) + "," + std::to_string(n_free[i]) + "," + std::to_string(n_tets[i]) + ",";
        if (std::isfinite(values[i])) out += fmt17(values[i]);
        out += ",";
        if (std::isfinite(rates[i])) out += fmt17(rates[i]);
        out += "\n";
    }
    return out;
}

std::string ConvergenceReport::to_table(const std::string& value_label) const {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-6s %-12s %-10s %-10s %-14s %-8s\n", "level", "h", "n_free",
                  "n_tets", value_label.c_str(), "rate");
    std::string out = buf;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        std::string vs = std::isfinite(values[i]) ? [&] {
            char b[32];
            std::snprintf(b, sizeof b, "%.6e", values[i]);
            return std::string(b);
        }() : std::string("-");
        std::string rs = std::isfinite(rates[i]) ? [&] {
            char b[32];
            std::snprintf(b, sizeof b, "%.3f", rates[i]);
            return std::string(b);
        }() : std::string("-");
        std::snprintf(buf, sizeof buf, "%-6d %-12.6g %-10lld %-10lld %-14s %-8s\n", levels[i], h[i],
                      n_free[i], n_tets[i], vs.c_str(), rs.c_str());
        out += buf;
    }
    return out;
}

}  // namespace ventcel
