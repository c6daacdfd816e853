#pragma once

#include <functional>
#include <memory>

#include "ventcel/mesh.hpp"

namespace ventcel {

// Free unknowns are interior nodes and Ventcel-face interior nodes, numbered
// consecutively in node order; Dirichlet and Ventcel-boundary nodes carry -1.
struct DofMap {
    std::vector<int> node_to_dof;
    int n_free = 0;

    static DofMap from_mesh(const TetMesh& mesh);
    static DofMap all_free(std::size_t n_nodes);
};

// Symmetric sparse matrix in CSR layout with sorted column indices.
struct SparseMatrix {
    int n = 0;
    std::vector<int> row_ptr;
    std::vector<int> col;
    std::vector<double> val;

    void matvec(std::span<const double> x, std::span<double> y) const;
    double entry(int i, int j) const;  // 0 when the slot is absent
    double symmetry_defect() const;    // max |A_ij - A_ji|
    double max_abs() const;
};

SparseMatrix matrix_sum(const SparseMatrix& a, const SparseMatrix& b);

// Exact P1 element matrices (constant gradients).
std::array<std::array<double, 4>, 4> tet_stiffness(const std::array<Vec3, 4>& p);
std::array<std::array<double, 3>, 3> tri_stiffness(const std::array<Vec2, 3>& p);

SparseMatrix assemble_volume_stiffness(const TetMesh& mesh, const DofMap& dofs);
SparseMatrix assemble_surface_stiffness(const SurfaceMesh& surface, const DofMap& dofs);

using VolumeFn = std::function<double(const Vec3&)>;

// Volume load by the 4-point degree-2 tet rule plus the Ventcel-face load by
// the 3-point edge-midpoint rule; entries at constrained nodes are dropped.
std::vector<double> assemble_load(const TetMesh& mesh, const SurfaceMesh* surface,
                                  const VolumeFn& f, const VolumeFn& g, const DofMap& dofs);

struct SparseSystem {
    SparseMatrix A;
    std::vector<double> b;
};

SparseSystem assemble_system(const TetMesh& mesh, const SurfaceMesh& surface, const VolumeFn& f,
                             const VolumeFn& g, const DofMap& dofs);

struct CgResult {
    std::vector<double> x;
    long iterations = 0;
    double rel_residual = 0.0;  // recomputed true residual at exit
};

// Jacobi-preconditioned CG.  max_iter <= 0 selects 50*sqrt(n) + 1000.
// Throws solver_error when the iteration budget is exhausted.
CgResult solve_cg(const SparseMatrix& A, std::span<const double> b, double rel_tol = 1e-10,
                  long max_iter = 0);

struct SolveInfo {
    double h = 0.0;
    double mu = 1.0;
    long cg_iterations = 0;
    double residual = 0.0;
};

struct Solution {
    std::shared_ptr<const TetMesh> mesh;
    std::vector<double> coeffs;  // full nodal vector, constrained entries exactly 0
    SolveInfo info;

    bool satisfies_constraints() const;
};

Solution solve_problem(std::shared_ptr<const TetMesh> mesh, const VolumeFn& f, const VolumeFn& g,
                       double rel_tol = 1e-10, long max_iter = 0);

}  // namespace ventcel
