#pragma once

// Error measurement and convergence-study utilities: point location in
// tetrahedral and surface meshes, combined volume+trace norm evaluation,
// nodal interpolation error on planar meshes, and rate tables.

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ventcel/fem.hpp"
#include "ventcel/mesh.hpp"

namespace ventcel {

// Uniform-grid spatial index over a tetrahedral mesh. locate() returns a tet
// containing the query point (within a small barycentric tolerance, so points
// on element interfaces resolve to one of the incident tets) and fills its
// barycentric coordinates. Throws location_error for points outside the mesh.
class PointLocator {
public:
    explicit PointLocator(const TetMesh& mesh);

    int locate(const Vec3& p, std::array<double, 4>& bary) const;
    const TetMesh& mesh() const { return *mesh_; }

private:
    bool candidates_pass(const std::vector<int>& cand, const Vec3& p, double tol,
                         std::array<double, 4>& bary, int& tet) const;

    const TetMesh* mesh_;
    Vec3 lo_{}, hi_{};
    int nx_ = 1, ny_ = 1, nz_ = 1;
    std::vector<std::vector<int>> cells_;
};

// Same index for a surface mesh in its chart plane.
class SurfaceLocator {
public:
    explicit SurfaceLocator(const SurfaceMesh& surface);

    int locate(const Vec2& p, std::array<double, 3>& bary) const;
    const SurfaceMesh& surface() const { return *surface_; }

private:
    bool candidates_pass(const std::vector<int>& cand, const Vec2& p, double tol,
                         std::array<double, 3>& bary, int& tri) const;

    const SurfaceMesh* surface_;
    Vec2 lo_{}, hi_{};
    int nx_ = 1, ny_ = 1;
    std::vector<std::vector<int>> cells_;
};

double evaluate(const Solution& sol, const PointLocator& loc, const Vec3& p);
Vec3 evaluate_gradient(const Solution& sol, const PointLocator& loc, const Vec3& p);

// Squared pieces of the combined norm
//   |||v|||^2 = ||v||^2_{L2(volume)} + |v|^2_{H1(volume)} + |trace v|^2_{H1(face)}.
struct VNormParts {
    double l2_volume_sq = 0.0;
    double h1_volume_sq = 0.0;
    double face_seminorm_sq = 0.0;

    double total() const;
    double volume_h1() const;
    double face() const;
};

// Combined norm of the difference of two solutions of the same problem on
// (possibly non-nested) meshes of the same domain. Quadrature runs over the
// finer mesh (more tets; ties keep the first argument) and the other solution
// is evaluated by point location, so the result is symmetric in its arguments.
VNormParts vnorm_diff(const Solution& a, const Solution& b);

struct ExactSolution {
    VolumeFn value;
    std::function<Vec3(const Vec3&)> gradient;
};

// Combined norm of (exact - discrete), integrated over the solution's own mesh.
VNormParts vnorm_error_exact(const Solution& sol, const ExactSolution& exact);

// Combined norm of the discrete solution itself, integrated exactly.
VNormParts solution_vnorm(const Solution& sol);

using PlaneFn = std::function<double(const Vec2&)>;
using PlaneGradFn = std::function<Vec2(const Vec2&)>;

// Vertex values of f on a planar mesh (the P1 interpolant's coefficients).
std::vector<double> interpolate_nodal(const TriMesh2D& mesh, const PlaneFn& f);

struct InterpError {
    double l2_sq = 0.0;
    double h1_sq = 0.0;

    double l2() const;
    double h1() const;
};

// L2 and H1-seminorm error of the P1 interpolant of f on a planar mesh,
// integrated with a degree-4 rule (interior points only, so gradients that
// blow up at mesh vertices are never sampled at the singularity).
InterpError interpolation_error_2d(const TriMesh2D& mesh, const PlaneFn& f,
                                   const PlaneGradFn& grad_f);

// rates[k] = log2(values[k] / values[k+1]); values must be finite and > 0.
std::vector<double> convergence_rates(std::span<const double> values);

// One row per refinement level; NaN entries render as empty CSV cells.
struct ConvergenceReport {
    std::vector<int> levels;
    std::vector<double> h;
    std::vector<long long> n_free;
    std::vector<long long> n_tets;
    std::vector<double> values;
    std::vector<double> rates;

    std::string to_csv() const;
    std::string to_table(const std::string& value_label) const;
};

}  // namespace ventcel
