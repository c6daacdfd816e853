// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.  Tolerances and reference values are pinned here.
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "ventcel/commands.hpp"

using namespace ventcel;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Reference final rate for the graded pentagon study and its allowed band.
constexpr double kGradedRateRef = 0.938;
constexpr double kGradedRateTol = 0.08;
constexpr double kGradedRateFloor = 0.90;
constexpr double kUngradedRateCeil = 0.92;

// Mesh-law bands: N*h^3 and (singular tet count)*h may drift by at most this
// factor across levels, and the in-plane sizes must track the grading law
// h*r^(1-mu) within exp(kLogRatioBound).
constexpr double kLawBand = 4.0;
constexpr double kLogRatioBound = 1.2;

int g_failures = 0;

void report(int idx, bool ok, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", idx, detail.c_str());
    if (!ok) ++g_failures;
}

std::string fmt(const char* f, ...) {
    char buf[768];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

std::string join(const std::vector<double>& v, const char* pat = "%.3f") {
    std::string out;
    for (double x : v) out += (out.empty() ? "" : " ") + fmt(pat, x);
    return out;
}

struct StudyData {
    std::vector<double> h;
    std::vector<long> n_tets;
    std::vector<long> singular;
    std::vector<double> log_ratio;
    std::vector<double> residuals;
    std::vector<double> values;  // successive-difference or exact-error norms
    std::vector<double> rates;
};

// Solves cfg.k_min..k_max and measures either the combined norm of successive
// differences (no exact solution) or of the exact error (when one is known).
StudyData run_volume_study(const StudyConfig& cfg) {
    StudyData out;
    const PrismDomain domain = cfg.make_domain();
    const SingularityInfo sing = compute_singularity_info(domain);
    const ProblemData prob = make_problem(cfg.problem, domain);
    Solution prev;
    bool have_prev = false;
    for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
        const GradingSpec spec = GradingSpec::for_level(domain, sing, k, cfg.mu, cfg.r0);
        auto mesh = std::make_shared<const TetMesh>(generate_mesh(domain, spec));
        const MeshSizeReport sizes = mesh_size_report(*mesh, sing, spec.h, cfg.mu);
        Solution sol = solve_problem(mesh, prob.f, prob.g, cfg.rel_tol, cfg.max_iter);
        out.h.push_back(spec.h);
        out.n_tets.push_back(static_cast<long>(mesh->tets.size()));
        out.singular.push_back(sizes.singular_tet_count());
        out.log_ratio.push_back(sizes.has_singular ? sizes.max_log_grading_ratio() : 0.0);
        out.residuals.push_back(sol.info.residual);
        if (prob.has_exact)
            out.values.push_back(vnorm_error_exact(sol, prob.exact).total());
        else if (have_prev)
            out.values.push_back(vnorm_diff(prev, sol).total());
        prev = std::move(sol);
        have_prev = true;
    }
    out.rates = convergence_rates(out.values);
    return out;
}

double band_spread(const std::vector<double>& v) {
    double lo = v[0], hi = v[0];
    for (double x : v) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    return hi / lo;
}

// Trace singularity model for an opening angle of 3*pi/2 at the origin:
// u = r^(2/3) sin(2 theta / 3) with theta in [0, 3*pi/2].
double corner_theta(const Vec2& p) {
    double th = std::atan2(p.y, p.x);
    if (th < 0.0) th += 2.0 * kPi;
    return th;
}

double corner_value(const Vec2& p) {
    const double r = std::hypot(p.x, p.y);
    if (r == 0.0) return 0.0;
    return std::pow(r, 2.0 / 3.0) * std::sin(2.0 * corner_theta(p) / 3.0);
}

Vec2 corner_gradient(const Vec2& p) {
    const double r = std::hypot(p.x, p.y);
    if (r == 0.0) return {0.0, 0.0};
    const double th = corner_theta(p);
    const double s = std::sin(2.0 * th / 3.0), c = std::cos(2.0 * th / 3.0);
    const double a = (2.0 / 3.0) * std::pow(r, -1.0 / 3.0);
    const double ct = std::cos(th), st = std::sin(th);
    return {a * (s * ct - c * st), a * (s * st + c * ct)};
}

}  // namespace

int main() {
    std::printf("acceptance suite\n");
    try {
        // graded and ungraded pentagon studies (criteria 1, 2, 6, 7)
        StudyConfig case1 = preset("prism-case-1");
        const StudyData graded = run_volume_study(case1);
        case1.mu = 1.0;
        const StudyData ungraded = run_volume_study(case1);
        const StudyConfig case2 = preset("prism-case-2");
        const StudyData side = run_volume_study(case2);
        const StudyData cube = run_volume_study(preset("cube-exact"));

        const double graded_final = graded.rates.back();
        report(1,
               graded_final >= kGradedRateFloor &&
                   std::abs(graded_final - kGradedRateRef) <= kGradedRateTol,
               fmt("graded pentagon study (mu 0.58), rates %s, final %.3f within %.3f +/- %.2f "
                   "and >= %.2f",
                   join(graded.rates).c_str(), graded_final, kGradedRateRef, kGradedRateTol,
                   kGradedRateFloor));

        const double ungraded_final = ungraded.rates.back();
        report(2, ungraded_final <= kUngradedRateCeil && ungraded_final < graded_final,
               fmt("ungraded pentagon study (mu 1.00), rates %s, final %.3f <= %.2f and below "
                   "the graded %.3f",
                   join(ungraded.rates).c_str(), ungraded_final, kUngradedRateCeil, graded_final));

        const double side_final = side.rates.back();
        report(3, side_final >= kGradedRateFloor,
               fmt("side-face pentagon study (mu 0.58), rates %s, final %.3f >= %.2f",
                   join(side.rates).c_str(), side_final, kGradedRateFloor));

        bool cube_ok = true;
        for (double r : cube.rates) cube_ok = cube_ok && std::abs(r - 1.0) <= 0.15;
        for (std::size_t i = 1; i < cube.values.size(); ++i)
            cube_ok = cube_ok && cube.values[i] < cube.values[i - 1];
        report(4, cube_ok,
               fmt("cube with known solution, errors %s decrease with rates %s, all within "
                   "1.00 +/- 0.15",
                   join(cube.values).c_str(), join(cube.rates).c_str()));

        // trace-interpolation dichotomy on an L-shaped face (criterion 5)
        {
            const PrismDomain lshape = PrismDomain::create(
                {{0, 0}, {1, 0}, {1, 1}, {-1, 1}, {-1, -1}, {0, -1}}, 1.0, {FaceKind::Bottom, -1});
            std::vector<double> uni, gra;
            for (int k = 3; k <= 6; ++k) {
                const TriMesh2D mesh = triangulate_cross_section(lshape, std::pow(0.5, k));
                uni.push_back(interpolation_error_2d(mesh, corner_value, corner_gradient).h1());
                const TriMesh2D moved = apply_grading(mesh, {0, 0}, 0.58, 0.5);
                gra.push_back(interpolation_error_2d(moved, corner_value, corner_gradient).h1());
            }
            const double u_final = convergence_rates(uni).back();
            const double g_final = convergence_rates(gra).back();
            report(5, std::abs(u_final - 2.0 / 3.0) <= 0.1 && g_final >= 0.9,
                   fmt("corner-singular face interpolation: uniform H1 rate %.3f within "
                       "0.667 +/- 0.10, graded (mu 0.58) rate %.3f >= 0.90",
                       u_final, g_final));
        }

        // mesh laws for both pentagon studies (criterion 6)
        {
            bool ok = true;
            std::string detail;
            for (const auto* sd : {&graded, &ungraded}) {
                std::vector<double> nh3, sh;
                double worst_ratio = 0.0;
                for (std::size_t i = 0; i < sd->h.size(); ++i) {
                    nh3.push_back(static_cast<double>(sd->n_tets[i]) * std::pow(sd->h[i], 3));
                    sh.push_back(static_cast<double>(sd->singular[i]) * sd->h[i]);
                    worst_ratio = std::max(worst_ratio, sd->log_ratio[i]);
                }
                ok = ok && band_spread(nh3) <= kLawBand && band_spread(sh) <= kLawBand &&
                     worst_ratio <= kLogRatioBound;
                detail += fmt("%smu %.2f: N*h^3 spread %.2f, singular*h spread %.2f, max log "
                              "grading ratio %.2f",
                              detail.empty() ? "" : "; ", sd == &graded ? 0.58 : 1.0,
                              band_spread(nh3), band_spread(sh), worst_ratio);
            }
            report(6, ok,
                   detail + fmt(" (bands <= %.1f, log ratio <= %.1f)", kLawBand, kLogRatioBound));
        }

        // algebraic structure on the graded pentagon at level 3 (criterion 7)
        {
            const StudyConfig cfg = preset("prism-case-1");
            const PrismDomain domain = cfg.make_domain();
            const SingularityInfo sing = compute_singularity_info(domain);
            const ProblemData prob = make_problem(cfg.problem, domain);
            auto mesh = std::make_shared<const TetMesh>(
                generate_mesh(domain, GradingSpec::for_level(domain, sing, 3, cfg.mu)));
            const SurfaceMesh surf = extract_surface(*mesh, mesh->ventcel_face);

            const DofMap dofs = DofMap::from_mesh(*mesh);
            const SparseSystem sys = assemble_system(*mesh, surf, prob.f, prob.g, dofs);
            const double sym = sys.A.symmetry_defect();
            const double scale = sys.A.max_abs();

            const DofMap all = DofMap::all_free(mesh->nodes.size());
            const SparseMatrix full = matrix_sum(assemble_volume_stiffness(*mesh, all),
                                                 assemble_surface_stiffness(surf, all));
            std::vector<double> ones(full.n, 1.0), ky(full.n);
            full.matvec(ones, ky);
            double kernel = 0.0;
            for (double v : ky) kernel = std::max(kernel, std::abs(v));

            const CgResult cg = solve_cg(sys.A, sys.b, cfg.rel_tol);
            std::vector<double> ax(sys.A.n);
            sys.A.matvec(cg.x, ax);
            double xax = 0.0, btx = 0.0;
            for (int i = 0; i < sys.A.n; ++i) {
                xax += cg.x[i] * ax[i];
                btx += sys.b[i] * cg.x[i];
            }
            const double energy_rel =
                std::abs(xax - btx) / std::max(std::abs(xax), std::abs(btx));

            double worst_res = cg.rel_residual;
            for (const auto* sd : {&graded, &ungraded, &side, &cube})
                for (double r : sd->residuals) worst_res = std::max(worst_res, r);

            const bool ok = sym <= 1e-13 * scale && kernel <= 1e-12 * full.max_abs() &&
                            worst_res <= 1.05e-10 && energy_rel <= 1e-8;
            report(7, ok,
                   fmt("symmetry defect %.1e (<= 1e-13 rel), constant-kernel defect %.1e "
                       "(<= 1e-12 rel), worst residual %.2e (<= 1.05e-10), energy identity "
                       "gap %.1e (<= 1e-8)",
                       sym / scale, kernel / full.max_abs(), worst_res, energy_rel));
        }

        // grading admissibility thresholds (criterion 8)
        {
            const StudyConfig cfg = preset("prism-case-1");
            const SingularityInfo sing = compute_singularity_info(cfg.make_domain());
            const int n = static_cast<int>(cfg.polygon.size());
            const std::vector<double> nu(n, 1.0);
            const auto check = [&](double mu) {
                return check_grading_conditions(std::vector<double>(n, mu), nu, sing);
            };
            const AdmissibilityReport pass = check(0.58);
            const AdmissibilityReport f76 = check(0.76);
            const AdmissibilityReport f100 = check(1.00);
            const ConditionRecord* r76 = f76.find(1, "edge");
            const ConditionRecord* r100 = f100.find(1, "edge");
            const bool ok = pass.all_pass && !f76.all_pass && !f100.all_pass && r76 && !r76->pass &&
                            r100 && !r100->pass;
            report(8, ok,
                   fmt("mu 0.58 admissible; mu 0.76 and 1.00 violate the edge condition at the "
                       "reentrant corner (thresholds %.4f, %.4f)",
                       r76 ? r76->threshold : -1.0, r100 ? r100->threshold : -1.0));
        }
    } catch (const std::exception& e) {
        std::printf("FAIL: unexpected exception: %s\n", e.what());
        return 1;
    }

    if (g_failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criteria failed\n", g_failures);
    return 1;
}
