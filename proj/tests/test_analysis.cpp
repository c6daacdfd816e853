#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "doctest.h"
#include "ventcel/analysis.hpp"

using namespace ventcel;

namespace {

constexpr double kPi = 3.14159265358979323846;

PrismDomain cube_domain() {
    return PrismDomain::create({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, 1.0, {FaceKind::Bottom, -1});
}

PrismDomain pentagon_domain() {
    return PrismDomain::create({{0, 0}, {0.5, 0.5}, {1, 0}, {1, 1}, {0, 1}}, 1.0,
                               {FaceKind::Bottom, -1});
}

std::shared_ptr<const TetMesh> make_mesh(const PrismDomain& d, int level, double mu) {
    const SingularityInfo s = compute_singularity_info(d);
    return std::make_shared<const TetMesh>(generate_mesh(d, GradingSpec::for_level(d, s, level, mu)));
}

// Discrete function with prescribed nodal values; not a PDE solution.
Solution nodal_function(std::shared_ptr<const TetMesh> mesh, const VolumeFn& f) {
    Solution sol;
    sol.coeffs.resize(mesh->nodes.size());
    for (std::size_t i = 0; i < mesh->nodes.size(); ++i) sol.coeffs[i] = f(mesh->nodes[i]);
    sol.mesh = std::move(mesh);
    return sol;
}

Solution zero_solution(std::shared_ptr<const TetMesh> mesh) {
    return nodal_function(std::move(mesh), [](const Vec3&) { return 0.0; });
}

TriMesh2D reference_triangle() {
    TriMesh2D m;
    m.nodes = {{0, 0}, {1, 0}, {0, 1}};
    m.triangles = {{0, 1, 2}};
    m.boundary = {{0, 1, 0}, {1, 2, 1}, {2, 0, 2}};
    return m;
}

}  // namespace

TEST_CASE("point locator covers the whole domain") {
    struct Case {
        std::shared_ptr<const TetMesh> mesh;
        bool notched;
    };
    const Case cases[] = {{make_mesh(cube_domain(), 2, 1.0), false},
                          {make_mesh(pentagon_domain(), 2, 0.58), true}};
    for (const auto& c : cases) {
        CAPTURE(c.notched);
        const PointLocator loc(*c.mesh);
        std::mt19937 rng(12345);
        std::uniform_real_distribution<double> uni(1e-6, 1.0 - 1e-6);
        int tested = 0;
        while (tested < 10000) {
            const Vec3 p{uni(rng), uni(rng), uni(rng)};
            // the notched footprint excludes the triangle below y=x and y=1-x
            if (c.notched && p.y < p.x - 1e-6 && p.y < 1.0 - p.x - 1e-6) continue;
            if (c.notched && std::abs(p.y - p.x) < 1e-6) continue;
            if (c.notched && std::abs(p.y - (1.0 - p.x)) < 1e-6) continue;
            ++tested;
            std::array<double, 4> bary{};
            const int t = loc.locate(p, bary);
            REQUIRE(t >= 0);
            REQUIRE(t < static_cast<int>(c.mesh->tets.size()));
            double sum = 0.0;
            Vec3 rec{};
            for (int i = 0; i < 4; ++i) {
                REQUIRE(bary[i] >= -1e-9);
                REQUIRE(bary[i] <= 1.0 + 1e-9);
                sum += bary[i];
                rec = rec + bary[i] * c.mesh->nodes[c.mesh->tets[t][i]];
            }
            REQUIRE(sum == doctest::Approx(1.0).epsilon(1e-12));
            REQUIRE(norm(rec - p) <= 1e-9);
        }
    }
}

TEST_CASE("point locator rejects exterior points") {
    const auto mesh = make_mesh(cube_domain(), 1, 1.0);
    const PointLocator loc(*mesh);
    std::array<double, 4> bary{};
    CHECK_THROWS_AS(loc.locate({0.5, 0.5, 1.5}, bary), location_error);
    CHECK_THROWS_AS(loc.locate({-0.2, 0.5, 0.5}, bary), location_error);
}

TEST_CASE("evaluation reproduces linear functions") {
    const auto mesh = make_mesh(pentagon_domain(), 2, 0.58);
    const auto lin = [](const Vec3& p) { return 2.0 + 3.0 * p.x - p.y + 0.5 * p.z; };
    const Solution sol = nodal_function(mesh, lin);
    const PointLocator loc(*mesh);
    const Vec3 pts[] = {{0.1, 0.4, 0.3}, {0.52, 0.55, 0.01}, {0.9, 0.9, 0.99}, {0.25, 0.8, 0.5}};
    for (const Vec3& p : pts) {
        CHECK(evaluate(sol, loc, p) == doctest::Approx(lin(p)).epsilon(1e-12));
        const Vec3 g = evaluate_gradient(sol, loc, p);
        CHECK(g.x == doctest::Approx(3.0).epsilon(1e-10));
        CHECK(g.y == doctest::Approx(-1.0).epsilon(1e-10));
        CHECK(g.z == doctest::Approx(0.5).epsilon(1e-10));
    }
}

TEST_CASE("norm of a difference vanishes for shared linear data") {
    const auto coarse = make_mesh(cube_domain(), 2, 1.0);
    const auto fine = make_mesh(cube_domain(), 3, 1.0);
    const auto lin = [](const Vec3& p) { return 1.0 - 2.0 * p.x + p.y + 4.0 * p.z; };
    const VNormParts d = vnorm_diff(nodal_function(coarse, lin), nodal_function(fine, lin));
    CHECK(d.l2_volume_sq <= 1e-20);
    CHECK(d.h1_volume_sq <= 1e-20);
    CHECK(d.face_seminorm_sq <= 1e-20);
}

TEST_CASE("norm of a difference is symmetric and consistent with the plain norm") {
    const auto mesh2 = make_mesh(pentagon_domain(), 2, 0.58);
    const auto mesh3 = make_mesh(pentagon_domain(), 3, 0.58);
    const auto one = [](const Vec3&) { return 1.0; };
    const auto zero = [](const Vec3&) { return 0.0; };
    const Solution u2 = solve_problem(mesh2, one, zero);
    const Solution u3 = solve_problem(mesh3, one, zero);

    const VNormParts ab = vnorm_diff(u2, u3);
    const VNormParts ba = vnorm_diff(u3, u2);
    CHECK(ab.l2_volume_sq == ba.l2_volume_sq);
    CHECK(ab.h1_volume_sq == ba.h1_volume_sq);
    CHECK(ab.face_seminorm_sq == ba.face_seminorm_sq);
    CHECK(ab.total() > 0.0);

    // against the zero function on the same mesh, the difference is the norm
    const VNormParts diff = vnorm_diff(u2, zero_solution(mesh2));
    const VNormParts plain = solution_vnorm(u2);
    CHECK(diff.l2_volume_sq == doctest::Approx(plain.l2_volume_sq).epsilon(1e-11));
    CHECK(diff.h1_volume_sq == doctest::Approx(plain.h1_volume_sq).epsilon(1e-11));
    CHECK(diff.face_seminorm_sq == doctest::Approx(plain.face_seminorm_sq).epsilon(1e-11));
}

TEST_CASE("exact-error norm of a known function") {
    // u = sin(pi x) sin(pi y) (1 - z) against the zero discrete solution:
    //   ||u||_L2^2 = 1/12, |u|_H1^2 = pi^2/6 + 1/4, |trace u|_H1^2 = pi^2/2.
    const auto mesh = make_mesh(cube_domain(), 3, 1.0);
    ExactSolution exact;
    exact.value = [](const Vec3& p) { return std::sin(kPi * p.x) * std::sin(kPi * p.y) * (1.0 - p.z); };
    exact.gradient = [](const Vec3& p) {
        const double sx = std::sin(kPi * p.x), cx = std::cos(kPi * p.x);
        const double sy = std::sin(kPi * p.y), cy = std::cos(kPi * p.y);
        return Vec3{kPi * cx * sy * (1.0 - p.z), kPi * sx * cy * (1.0 - p.z), -sx * sy};
    };
    const VNormParts e = vnorm_error_exact(zero_solution(mesh), exact);
    CHECK(e.l2_volume_sq == doctest::Approx(1.0 / 12).epsilon(5e-3));
    CHECK(e.h1_volume_sq == doctest::Approx(kPi * kPi / 6 + 0.25).epsilon(5e-3));
    CHECK(e.face_seminorm_sq == doctest::Approx(kPi * kPi / 2).epsilon(5e-3));
    CHECK(e.total() == doctest::Approx(std::sqrt((1.0 + 2.0 * kPi * kPi) / 3)).epsilon(2e-3));
}

TEST_CASE("interpolation error on the reference triangle") {
    const TriMesh2D m = reference_triangle();
    const auto f = [](const Vec2& p) { return p.x * p.x; };
    const auto gf = [](const Vec2& p) { return Vec2{2.0 * p.x, 0.0}; };
    const InterpError e = interpolation_error_2d(m, f, gf);
    CHECK(e.l2_sq == doctest::Approx(1.0 / 60).epsilon(1e-13));
    CHECK(e.h1_sq == doctest::Approx(1.0 / 6).epsilon(1e-13));

    const auto lin = [](const Vec2& p) { return 3.0 * p.x - 2.0 * p.y + 1.0; };
    const auto glin = [](const Vec2&) { return Vec2{3.0, -2.0}; };
    const InterpError z = interpolation_error_2d(m, lin, glin);
    CHECK(z.l2_sq <= 1e-26);
    CHECK(z.h1_sq <= 1e-26);
}

TEST_CASE("interpolation error rates on a smooth function") {
    const PrismDomain d = cube_domain();
    const auto f = [](const Vec2& p) { return std::sin(kPi * p.x) * std::sin(kPi * p.y); };
    const auto gf = [](const Vec2& p) {
        return Vec2{kPi * std::cos(kPi * p.x) * std::sin(kPi * p.y),
                    kPi * std::sin(kPi * p.x) * std::cos(kPi * p.y)};
    };
    std::vector<double> l2, h1;
    for (int k = 2; k <= 4; ++k) {
        const TriMesh2D m = triangulate_cross_section(d, std::pow(0.5, k));
        const InterpError e = interpolation_error_2d(m, f, gf);
        l2.push_back(e.l2());
        h1.push_back(e.h1());
    }
    for (double r : convergence_rates(l2)) CHECK(r == doctest::Approx(2.0).epsilon(0.1));
    for (double r : convergence_rates(h1)) CHECK(r == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("nodal interpolation validates its input") {
    const TriMesh2D m = reference_triangle();
    const std::vector<double> v = interpolate_nodal(m, [](const Vec2& p) { return p.x + p.y; });
    REQUIRE(v.size() == 3);
    CHECK(v[0] == 0.0);
    CHECK(v[1] == 1.0);
    CHECK(v[2] == 1.0);
    CHECK_THROWS_AS(interpolate_nodal(m, [](const Vec2&) { return std::nan(""); }), data_error);
}

TEST_CASE("convergence rates") {
    const std::vector<double> v = {4.0, 2.0, 1.0};
    const std::vector<double> r = convergence_rates(v);
    REQUIRE(r.size() == 2);
    CHECK(r[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(convergence_rates(std::vector<double>{1.0, 0.0}), data_error);
    CHECK_THROWS_AS(convergence_rates(std::vector<double>{-1.0, 1.0}), data_error);
}

TEST_CASE("convergence report rendering") {
    ConvergenceReport rep;
    rep.levels = {2, 3};
    rep.h = {0.25, 0.125};
    rep.n_free = {60, 500};
    rep.n_tets = {576, 4608};
    rep.values = {0.04, 0.02};
    rep.rates = {std::nan(""), 1.0};
    const std::string csv = rep.to_csv();
    CHECK(csv.substr(0, csv.find('\n')) == "h,n_free,n_tets,value,rate");
    CHECK(csv.find("0.25,60,576,") != std::string::npos);
    CHECK(csv.find("nan") == std::string::npos);
    CHECK(csv == rep.to_csv());  // deterministic

    const std::string table = rep.to_table("vnorm_diff");
    CHECK(table.find("vnorm_diff") != std::string::npos);
    CHECK(table.find('-') != std::string::npos);
}
