#include <algorithm>
#include <cmath>

#include "ventcel/fem.hpp"

namespace ventcel {

namespace {

// 4-point degree-2 tetrahedron rule, weights V/4.
struct TetRule {
    static constexpr double a = 0.58541019662496845;  // (5 + 3*sqrt(5)) / 20
    static constexpr double b = 0.13819660112501051;  // (5 - sqrt(5)) / 20
    static constexpr std::array<std::array<double, 4>, 4> bary{{
        {a, b, b, b},
        {b, a, b, b},
        {b, b, a, b},
        {b, b, b, a},
    }};
};

// 3-point edge-midpoint triangle rule, weights A/3 (degree 2).
constexpr std::array<std::array<double, 3>, 3> kTriMidBary{{
    {0.5, 0.5, 0.0},
    {0.0, 0.5, 0.5},
    {0.5, 0.0, 0.5},
}};

double tet_volume6(const std::array<Vec3, 4>& p) {
    return dot(cross(p[1] - p[0], p[2] - p[0]), p[3] - p[0]);
}

// Shared pattern-then-accumulate CSR builder; both passes walk elements in
// index order, so assembly is deterministic.
class CsrBuilder {
public:
    explicit CsrBuilder(int n) : n_(n), pattern_(n) {}

    void note(int i, int j) { pattern_[i].push_back(j); }

    void compile() {
        mat_.n = n_;
        mat_.row_ptr.assign(n_ + 1, 0);
        for (int i = 0; i < n_; ++i) {
            auto& row = pattern_[i];
            std::sort(row.begin(), row.end());
            row.erase(std::unique(row.begin(), row.end()), row.end());
            mat_.row_ptr[i + 1] = mat_.row_ptr[i] + static_cast<int>(row.size());
        }
        mat_.col.reserve(mat_.row_ptr[n_]);
        for (int i = 0; i < n_; ++i)
            mat_.col.insert(mat_.col.end(), pattern_[i].begin(), pattern_[i].end());
        mat_.val.assign(mat_.col.size(), 0.0);
        pattern_.clear();
        pattern_.shrink_to_fit();
    }

    void add(int i, int j, double v) {
        const auto begin = mat_.col.begin() + mat_.row_ptr[i];
        const auto end = mat_.col.begin() + mat_.row_ptr[i + 1];
        const auto it = std::lower_bound(begin, end, j);
        mat_.val[static_cast<std::size_t>(it - mat_.col.begin())] += v;
    }

    SparseMatrix take() { return std::move(mat_); }

private:
    int n_;
    std::vector<std::vector<int>> pattern_;
    SparseMatrix mat_;
};

}  // namespace

DofMap DofMap::from_mesh(const TetMesh& mesh) {
    DofMap d;
    d.node_to_dof.assign(mesh.nodes.size(), -1);
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        const NodeClass c = mesh.node_class[i];
        if (c == NodeClass::Interior || c == NodeClass::VentcelInterior)
            d.node_to_dof[i] = d.n_free++;
    }
    return d;
}

DofMap DofMap::all_free(std::size_t n_nodes) {
    DofMap d;
    d.node_to_dof.resize(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) d.node_to_dof[i] = static_cast<int>(i);
    d.n_free = static_cast<int>(n_nodes);
    return d;
}

void SparseMatrix::matvec(std::span<const double> x, std::span<double> y) const {
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += val[k] * x[col[k]];
        y[i] = s;
    }
}

double SparseMatrix::entry(int i, int j) const {
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
        if (col[k] == j) return val[k];
    return 0.0;
}

double SparseMatrix::symmetry_defect() const {
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
            if (col[k] > i) worst = std::max(worst, std::abs(val[k] - entry(col[k], i)));
    return worst;
}

double SparseMatrix::max_abs() const {
    double m = 0.0;
    for (double v : val) m = std::max(m, std::abs(v));
    return m;
}

SparseMatrix matrix_sum(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.n != b.n) throw assembly_error("matrix_sum: dimension mismatch");
    SparseMatrix out;
    out.n = a.n;
    out.row_ptr.assign(a.n + 1, 0);
    for (int i = 0; i < a.n; ++i) {
        int ka = a.row_ptr[i], kb = b.row_ptr[i];
        while (ka < a.row_ptr[i + 1] || kb < b.row_ptr[i + 1]) {
            int ja = ka < a.row_ptr[i + 1] ? a.col[ka] : a.n;
            int jb = kb < b.row_ptr[i + 1] ? b.col[kb] : a.n;
            if (ja == jb) {
                out.col.push_back(ja);
                out.val.push_back(a.val[ka] + b.val[kb]);
                ++ka, ++kb;
            } else if (ja < jb) {
                out.col.push_back(ja);
                out.val.push_back(a.val[ka]);
                ++ka;
            } else {
                out.col.push_back(jb);
                out.val.push_back(b.val[kb]);
                ++kb;
            }
        }
        out.row_ptr[i + 1] = static_cast<int>(out.col.size());
    }
    return out;
}

std::array<std::array<double, 4>, 4> tet_stiffness(const std::array<Vec3, 4>& p) {
    const double vol6 = tet_volume6(p);
    if (!(std::abs(vol6) > 0.0)) throw assembly_error("tet_stiffness: degenerate tetrahedron");
    // Barycentric gradients: grad(lam_i) = (opposite face normal) / (6V);
    // grad(lam_0) is recovered from the partition of unity, which makes the
    // element row sums exactly zero.
    std::array<Vec3, 4> g;
    g[1] = (1.0 / vol6) * cross(p[2] - p[0], p[3] - p[0]);
    g[2] = (1.0 / vol6) * cross(p[3] - p[0], p[1] - p[0]);
    g[3] = (1.0 / vol6) * cross(p[1] - p[0], p[2] - p[0]);
    g[0] = {-g[1].x - g[2].x - g[3].x, -g[1].y - g[2].y - g[3].y, -g[1].z - g[2].z - g[3].z};
    const double vol = std::abs(vol6) / 6.0;
    std::array<std::array<double, 4>, 4> k{};
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) k[i][j] = k[j][i] = vol * dot(g[i], g[j]);
    return k;
}

std::array<std::array<double, 3>, 3> tri_stiffness(const std::array<Vec2, 3>& p) {
    const double area2 = cross(p[1] - p[0], p[2] - p[0]);
    if (!(std::abs(area2) > 0.0)) throw assembly_error("tri_stiffness: degenerate triangle");
    std::array<Vec2, 3> g;
    g[1] = (1.0 / area2) * Vec2{p[2].y - p[0].y, p[0].x - p[2].x};
    g[2] = (1.0 / area2) * Vec2{p[0].y - p[1].y, p[1].x - p[0].x};
    g[0] = {-g[1].x - g[2].x, -g[1].y - g[2].y};
    const double area = std::abs(area2) / 2.0;
    std::array<std::array<double, 3>, 3> k{};
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) k[i][j] = k[j][i] = area * dot(g[i], g[j]);
    return k;
}

SparseMatrix assemble_volume_stiffness(const TetMesh& mesh, const DofMap& dofs) {
    CsrBuilder builder(dofs.n_free);
    for (const auto& t : mesh.tets)
        for (int a = 0; a < 4; ++a) {
            const int i = dofs.node_to_dof[t[a]];
            if (i < 0) continue;
            for (int b = 0; b < 4; ++b) {
                const int j = dofs.node_to_dof[t[b]];
                if (j >= 0) builder.note(i, j);
            }
        }
    builder.compile();
    for (const auto& t : mesh.tets) {
        const auto k = tet_stiffness({mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]],
                                      mesh.nodes[t[3]]});
        for (int a = 0; a < 4; ++a) {
            const int i = dofs.node_to_dof[t[a]];
            if (i < 0) continue;
            for (int b = 0; b < 4; ++b) {
                const int j = dofs.node_to_dof[t[b]];
                if (j >= 0) builder.add(i, j, k[a][b]);
            }
        }
    }
    return builder.take();
}

SparseMatrix assemble_surface_stiffness(const SurfaceMesh& surface, const DofMap& dofs) {
    CsrBuilder builder(dofs.n_free);
    for (const auto& t : surface.triangles)
        for (int a = 0; a < 3; ++a) {
            const int i = dofs.node_to_dof[surface.volume_node[t[a]]];
            if (i < 0) continue;
            for (int b = 0; b < 3; ++b) {
                const int j = dofs.node_to_dof[surface.volume_node[t[b]]];
                if (j >= 0) builder.note(i, j);
            }
        }
    builder.compile();
    for (const auto& t : surface.triangles) {
        const auto k = tri_stiffness({surface.nodes[t[0]], surface.nodes[t[1]], surface.nodes[t[2]]});
        for (int a = 0; a < 3; ++a) {
            const int i = dofs.node_to_dof[surface.volume_node[t[a]]];
            if (i < 0) continue;
            for (int b = 0; b < 3; ++b) {
                const int j = dofs.node_to_dof[surface.volume_node[t[b]]];
                if (j >= 0) builder.add(i, j, k[a][b]);
            }
        }
    }
    return builder.take();
}

std::vector<double> assemble_load(const TetMesh& mesh, const SurfaceMesh* surface,
                                  const VolumeFn& f, const VolumeFn& g, const DofMap& dofs) {
    std::vector<double> b(dofs.n_free, 0.0);
    for (const auto& t : mesh.tets) {
        const std::array<Vec3, 4> p{mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]],
                                    mesh.nodes[t[3]]};
        const double w = std::abs(tet_volume6(p)) / 6.0 / 4.0;
        for (const auto& bary : TetRule::bary) {
            Vec3 x{0, 0, 0};
            for (int a = 0; a < 4; ++a) x = x + bary[a] * p[a];
            const double fv = f(x);
            if (!std::isfinite(fv)) throw data_error("assemble_load: f not finite at quadrature point");
            for (int a = 0; a < 4; ++a) {
                const int i = dofs.node_to_dof[t[a]];
                if (i >= 0) b[i] += w * fv * bary[a];
            }
        }
    }
    if (surface) {
        for (const auto& t : surface->triangles) {
            const std::array<Vec2, 3> q{surface->nodes[t[0]], surface->nodes[t[1]],
                                        surface->nodes[t[2]]};
            const std::array<Vec3, 3> p{mesh.nodes[surface->volume_node[t[0]]],
                                        mesh.nodes[surface->volume_node[t[1]]],
                                        mesh.nodes[surface->volume_node[t[2]]]};
            const double w = std::abs(cross(q[1] - q[0], q[2] - q[0])) / 2.0 / 3.0;
            for (const auto& bary : kTriMidBary) {
                Vec3 x{0, 0, 0};
                for (int a = 0; a < 3; ++a) x = x + bary[a] * p[a];
                const double gv = g(x);
                if (!std::isfinite(gv))
                    throw data_error("assemble_load: g not finite at quadrature point");
                for (int a = 0; a < 3; ++a) {
                    const int i = dofs.node_to_dof[surface->volume_node[t[a]]];
                    if (i >= 0) b[i] += w * gv * bary[a];
                }
            }
        }
    }
    return b;
}

SparseSystem assemble_system(const TetMesh& mesh, const SurfaceMesh& surface, const VolumeFn& f,
                             const VolumeFn& g, const DofMap& dofs) {
    SparseSystem sys;
    sys.A = matrix_sum(assemble_volume_stiffness(mesh, dofs),
                       assemble_surface_stiffness(surface, dofs));
    sys.b = assemble_load(mesh, &surface, f, g, dofs);
    return sys;
}

CgResult solve_cg(const SparseMatrix& A, std::span<const double> b, double rel_tol, long max_iter) {
    const int n = A.n;
    if (static_cast<int>(b.size()) != n) throw solver_error("solve_cg: rhs size mismatch");
    if (max_iter <= 0) max_iter = static_cast<long>(50.0 * std::sqrt(static_cast<double>(n))) + 1000;

    CgResult res;
    res.x.assign(n, 0.0);
    double bnorm = 0.0;
    for (double v : b) bnorm += v * v;
    bnorm = std::sqrt(bnorm);
    if (bnorm == 0.0) return res;  // zero data: exact zero solution

    std::vector<double> dinv(n);
    for (int i = 0; i < n; ++i) {
        const double d = A.entry(i, i);
        if (!(d > 0.0)) throw solver_error("solve_cg: non-positive diagonal entry");
        dinv[i] = 1.0 / d;
    }

    std::vector<double> r(b.begin(), b.end()), z(n), p(n), q(n);
    auto dot_v = [n](const std::vector<double>& u, const std::vector<double>& v) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += u[i] * v[i];
        return s;
    };
    for (int i = 0; i < n; ++i) z[i] = dinv[i] * r[i];
    p = z;
    double rz = dot_v(r, z);

    while (res.iterations < max_iter) {
        A.matvec(p, q);
        const double pq = dot_v(p, q);
        if (!(pq > 0.0) || !std::isfinite(pq))
            throw solver_error("solve_cg: matrix is not positive definite");
        const double alpha = rz / pq;
        for (int i = 0; i < n; ++i) {
            res.x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        ++res.iterations;
        double rnorm = std::sqrt(dot_v(r, r));
        if (rnorm <= rel_tol * bnorm) {
            // Guard against recurrence drift: accept only the true residual.
            A.matvec(res.x, q);
            for (int i = 0; i < n; ++i) r[i] = b[i] - q[i];
            rnorm = std::sqrt(dot_v(r, r));
            if (rnorm <= rel_tol * bnorm) {
                res.rel_residual = rnorm / bnorm;
                return res;
            }
        }
        for (int i = 0; i < n; ++i) z[i] = dinv[i] * r[i];
        const double rz_next = dot_v(r, z);
        const double beta = rz_next / rz;
        rz = rz_next;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    A.matvec(res.x, q);
    double rnorm = 0.0;
    for (int i = 0; i < n; ++i) rnorm += (b[i] - q[i]) * (b[i] - q[i]);
    throw solver_error("solve_cg: no convergence within " + std::to_string(max_iter) +
                       " iterations (relative residual " + std::to_string(std::sqrt(rnorm) / bnorm) +
                       ")");
}

bool Solution::satisfies_constraints() const {
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const NodeClass c = mesh->node_class[i];
        if ((c == NodeClass::Dirichlet || c == NodeClass::VentcelBoundary) && coeffs[i] != 0.0)
            return false;
    }
    return true;
}

Solution solve_problem(std::shared_ptr<const TetMesh> mesh, const VolumeFn& f, const VolumeFn& g,
                       double rel_tol, long max_iter) {
    const DofMap dofs = DofMap::from_mesh(*mesh);
    const SurfaceMesh surface = extract_surface(*mesh, mesh->ventcel_face);
    const SparseSystem sys = assemble_system(*mesh, surface, f, g, dofs);
    const CgResult cg = solve_cg(sys.A, sys.b, rel_tol, max_iter);

    Solution sol;
    sol.mesh = std::move(mesh);
    sol.coeffs.assign(sol.mesh->nodes.size(), 0.0);
    for (std::size_t i = 0; i < sol.coeffs.size(); ++i) {
        const int d = dofs.node_to_dof[i];
        if (d >= 0) sol.coeffs[i] = cg.x[d];
    }
    sol.info.cg_iterations = cg.iterations;
    sol.info.residual = cg.rel_residual;
    return sol;
}

}  // namespace ventcel
