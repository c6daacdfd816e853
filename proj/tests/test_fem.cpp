#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "ventcel/fem.hpp"

using namespace ventcel;

namespace {

PrismDomain cube_domain() {
    return PrismDomain::create({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, 1.0, {FaceKind::Bottom, -1});
}

TetMesh small_cube(int level) {
    const PrismDomain d = cube_domain();
    const SingularityInfo s = compute_singularity_info(d);
    return generate_mesh(d, GradingSpec::for_level(d, s, level, 1.0));
}

// Mesh consisting of the single reference tetrahedron, all nodes free.
TetMesh reference_tet_mesh() {
    TetMesh m;
    m.nodes = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    m.tets = {{0, 1, 2, 3}};
    m.node_class.assign(4, NodeClass::Interior);
    m.height = 1.0;
    return m;
}

std::vector<std::vector<double>> to_dense(const SparseMatrix& A) {
    std::vector<std::vector<double>> d(A.n, std::vector<double>(A.n, 0.0));
    for (int i = 0; i < A.n; ++i)
        for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k) d[i][A.col[k]] = A.val[k];
    return d;
}

SparseMatrix from_dense(const std::vector<std::vector<double>>& d) {
    SparseMatrix A;
    A.n = static_cast<int>(d.size());
    A.row_ptr.assign(A.n + 1, 0);
    for (int i = 0; i < A.n; ++i) {
        for (int j = 0; j < A.n; ++j)
            if (d[i][j] != 0.0) {
                A.col.push_back(j);
                A.val.push_back(d[i][j]);
            }
        A.row_ptr[i + 1] = static_cast<int>(A.col.size());
    }
    return A;
}

// Independent planar P1 stiffness via the cotangent formula.
std::vector<std::vector<double>> cotangent_stiffness(const SurfaceMesh& surf, int n) {
    std::vector<std::vector<double>> K(n, std::vector<double>(n, 0.0));
    for (const auto& t : surf.triangles) {
        for (int c = 0; c < 3; ++c) {
            const int a = t[(c + 1) % 3], b = t[(c + 2) % 3], o = t[c];
            const Vec2 u = surf.nodes[a] - surf.nodes[o];
            const Vec2 v = surf.nodes[b] - surf.nodes[o];
            const double cot = dot(u, v) / std::abs(cross(u, v));
            K[a][b] -= 0.5 * cot;
            K[b][a] -= 0.5 * cot;
            K[a][a] += 0.5 * cot;
            K[b][b] += 0.5 * cot;
        }
    }
    return K;
}

}  // namespace

TEST_CASE("tet stiffness on the reference element") {
    const auto K = tet_stiffness({{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}});
    const double e[4][4] = {{0.5, -1.0 / 6, -1.0 / 6, -1.0 / 6},
                            {-1.0 / 6, 1.0 / 6, 0, 0},
                            {-1.0 / 6, 0, 1.0 / 6, 0},
                            {-1.0 / 6, 0, 0, 1.0 / 6}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(K[i][j] == doctest::Approx(e[i][j]).epsilon(1e-14));
}

TEST_CASE("tet stiffness on the regular tetrahedron") {
    const auto K = tet_stiffness({{{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}}});
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const double e = i == j ? 0.5 : -1.0 / 6;
            CHECK(K[i][j] == doctest::Approx(e).epsilon(1e-13));
        }
    for (int i = 0; i < 4; ++i)
        CHECK(std::abs(K[i][0] + K[i][1] + K[i][2] + K[i][3]) <= 1e-15);
}

TEST_CASE("tet stiffness is orientation-invariant and rejects degenerate input") {
    const std::array<Vec3, 4> p{{{0.2, 0.1, 0}, {1, 0.3, 0.1}, {0.4, 1.2, 0}, {0.3, 0.2, 0.9}}};
    const auto K1 = tet_stiffness(p);
    const auto K2 = tet_stiffness({p[0], p[1], p[3], p[2]});  // swapped: negative volume
    CHECK(K1[0][1] == doctest::Approx(K2[0][1]).epsilon(1e-13));
    CHECK(K1[2][3] == doctest::Approx(K2[3][2]).epsilon(1e-13));
    // exactly coplanar: zero volume detected without any size-dependent tolerance
    CHECK_THROWS_AS(tet_stiffness({{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}}}), assembly_error);
}

TEST_CASE("triangle stiffness on the reference element") {
    const auto K = tri_stiffness({{{0, 0}, {1, 0}, {0, 1}}});
    const double e[3][3] = {{1.0, -0.5, -0.5}, {-0.5, 0.5, 0}, {-0.5, 0, 0.5}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(K[i][j] == doctest::Approx(e[i][j]).epsilon(1e-14));
    CHECK_THROWS_AS(tri_stiffness({{{0, 0}, {1, 0}, {2, 0}}}), assembly_error);
}

TEST_CASE("linear load on the reference tetrahedron") {
    const TetMesh m = reference_tet_mesh();
    const DofMap dofs = DofMap::all_free(4);
    const auto f = [](const Vec3& p) { return 1.0 + 2.0 * p.x + 3.0 * p.y + 4.0 * p.z; };
    const auto zero = [](const Vec3&) { return 0.0; };
    const std::vector<double> b = assemble_load(m, nullptr, f, zero, dofs);
    REQUIRE(b.size() == 4);
    CHECK(b[0] == doctest::Approx(7.0 / 60).epsilon(1e-13));
    CHECK(b[1] == doctest::Approx(2.0 / 15).epsilon(1e-13));
    CHECK(b[2] == doctest::Approx(17.0 / 120).epsilon(1e-13));
    CHECK(b[3] == doctest::Approx(3.0 / 20).epsilon(1e-13));
}

TEST_CASE("surface load integrates g over the Ventcel face") {
    const TetMesh mesh = small_cube(1);
    const SurfaceMesh surf = extract_surface(mesh, mesh.ventcel_face);
    const DofMap dofs = DofMap::all_free(mesh.nodes.size());
    const auto zero = [](const Vec3&) { return 0.0; };
    const auto one = [](const Vec3&) { return 1.0; };
    const std::vector<double> b = assemble_load(mesh, &surf, zero, one, dofs);
    double sum = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        sum += b[i];
        if (mesh.nodes[i].z > 0.0) CHECK(b[i] == 0.0);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));  // area of the face
}

TEST_CASE("volume stiffness is symmetric with constant kernel") {
    const TetMesh mesh = small_cube(2);
    const DofMap dofs = DofMap::all_free(mesh.nodes.size());
    const SparseMatrix A = assemble_volume_stiffness(mesh, dofs);
    CHECK(A.symmetry_defect() <= 1e-13 * A.max_abs());
    std::vector<double> ones(A.n, 1.0), y(A.n);
    A.matvec(ones, y);
    for (double v : y) CHECK(std::abs(v) <= 1e-12 * A.max_abs());
}

TEST_CASE("surface stiffness matches the cotangent formula") {
    const PrismDomain d =
        PrismDomain::create({{0, 0}, {0.5, 0.5}, {1, 0}, {1, 1}, {0, 1}}, 1.0, {FaceKind::Bottom, -1});
    const TriMesh2D foot = triangulate_cross_section(d, 0.25);
    const SurfaceMesh surf = surface_from_trimesh(foot);
    const int n = static_cast<int>(foot.nodes.size());
    const SparseMatrix A = assemble_surface_stiffness(surf, DofMap::all_free(n));
    const auto expected = cotangent_stiffness(surf, n);
    const auto got = to_dense(A);
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(got[i][j] - expected[i][j]));
    CHECK(worst <= 1e-12);
}

TEST_CASE("matrix sum merges sparsity patterns") {
    const SparseMatrix A = from_dense({{1, 0, 2}, {0, 3, 0}, {2, 0, 4}});
    const SparseMatrix B = from_dense({{0, 5, 0}, {5, 1, 0}, {0, 0, -4}});
    const auto S = to_dense(matrix_sum(A, B));
    const double e[3][3] = {{1, 5, 2}, {5, 4, 0}, {2, 0, 0}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(S[i][j] == doctest::Approx(e[i][j]).epsilon(1e-15));
}

TEST_CASE("cg solves small systems to high accuracy") {
    const SparseMatrix I5 = from_dense(
        {{1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}, {0, 0, 1, 0, 0}, {0, 0, 0, 1, 0}, {0, 0, 0, 0, 1}});
    const std::vector<double> b5 = {1, -2, 3, 0.5, -0.25};
    const CgResult r5 = solve_cg(I5, b5);
    for (int i = 0; i < 5; ++i) CHECK(r5.x[i] == doctest::Approx(b5[i]).epsilon(1e-14));
    CHECK(r5.iterations <= 2);

    const SparseMatrix A = from_dense({{4, 1}, {1, 3}});
    const CgResult r = solve_cg(A, std::vector<double>{1, 2});
    CHECK(r.x[0] == doctest::Approx(1.0 / 11).epsilon(1e-10));
    CHECK(r.x[1] == doctest::Approx(7.0 / 11).epsilon(1e-10));
    CHECK(r.rel_residual <= 1e-10);
}

TEST_CASE("cg rejects bad systems and zero data shortcuts") {
    const SparseMatrix neg = from_dense({{1, 0}, {0, -1}});
    CHECK_THROWS_AS(solve_cg(neg, std::vector<double>{1, 1}), solver_error);

    const SparseMatrix indef = from_dense({{1, 2}, {2, 1}});
    CHECK_THROWS_AS(solve_cg(indef, std::vector<double>{1, 0}), solver_error);

    const SparseMatrix spd = from_dense({{4, 1}, {1, 3}});
    CHECK_THROWS_AS(solve_cg(spd, std::vector<double>{1, 2}, 1e-30, 1), solver_error);

    const CgResult z = solve_cg(spd, std::vector<double>{0, 0});
    CHECK(z.iterations == 0);
    CHECK(z.x[0] == 0.0);
    CHECK(z.x[1] == 0.0);
}

TEST_CASE("zero data yields the exact zero solution") {
    const auto mesh = std::make_shared<const TetMesh>(small_cube(2));
    const auto zero = [](const Vec3&) { return 0.0; };
    const Solution sol = solve_problem(mesh, zero, zero);
    CHECK(sol.info.cg_iterations == 0);
    for (double c : sol.coeffs) CHECK(c == 0.0);
    CHECK(sol.satisfies_constraints());
}

TEST_CASE("solve satisfies constraints and the energy identity") {
    const auto mesh = std::make_shared<const TetMesh>(small_cube(2));
    const auto f = [](const Vec3&) { return 1.0; };
    const auto g = [](const Vec3&) { return 0.0; };
    const Solution sol = solve_problem(mesh, f, g);
    CHECK(sol.satisfies_constraints());
    CHECK(sol.info.residual <= 1e-10);

    const DofMap dofs = DofMap::from_mesh(*mesh);
    const SurfaceMesh surf = extract_surface(*mesh, mesh->ventcel_face);
    const SparseSystem sys = assemble_system(*mesh, surf, f, g, dofs);
    std::vector<double> x(dofs.n_free), y(dofs.n_free);
    for (std::size_t i = 0; i < mesh->nodes.size(); ++i)
        if (dofs.node_to_dof[i] >= 0) x[dofs.node_to_dof[i]] = sol.coeffs[i];
    sys.A.matvec(x, y);
    double xax = 0.0, btx = 0.0;
    for (int i = 0; i < dofs.n_free; ++i) {
        xax += x[i] * y[i];
        btx += sys.b[i] * x[i];
    }
    CHECK(xax == doctest::Approx(btx).epsilon(1e-10));
    CHECK(xax > 0.0);

    // free values should be nonzero for a positive source
    bool any = false;
    for (double c : sol.coeffs) any = any || c != 0.0;
    CHECK(any);
}

TEST_CASE("dof map counts free nodes") {
    const TetMesh mesh = small_cube(1);
    const DofMap dofs = DofMap::from_mesh(mesh);
    CHECK(dofs.n_free == mesh.n_free_nodes());
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        const bool free = mesh.node_class[i] == NodeClass::Interior ||
                          mesh.node_class[i] == NodeClass::VentcelInterior;
        CHECK((dofs.node_to_dof[i] >= 0) == free);
    }
}
