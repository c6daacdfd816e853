#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>

#include "ventcel/commands.hpp"

namespace ventcel {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string out_path(const CommandOptions& opts, const std::string& name) {
    std::filesystem::create_directories(opts.out_dir);
    return (std::filesystem::path(opts.out_dir) / name).string();
}

int pick_level(const CommandOptions& opts, const StudyConfig& cfg) {
    const int level = opts.level > 0 ? opts.level : cfg.k_min;
    if (level > 8 && !cfg.allow_large)
        throw config_error("level > 8 needs --allow-large (meshes grow eightfold per level)");
    return level;
}

std::shared_ptr<const TetMesh> build_mesh(const PrismDomain& domain, const SingularityInfo& sing,
                                          const StudyConfig& cfg, int level, GradingSpec* spec_out) {
    const GradingSpec spec = GradingSpec::for_level(domain, sing, level, cfg.mu, cfg.r0);
    if (spec_out) *spec_out = spec;
    return std::make_shared<const TetMesh>(generate_mesh(domain, spec));
}

AdmissibilityReport check_report(const StudyConfig& cfg, const SingularityInfo& sing) {
    const std::vector<double> mu(sing.vertical_edge_angles.size(), cfg.mu);
    const std::vector<double> nu(sing.vertical_edge_angles.size(), cfg.nu);
    return check_grading_conditions(mu, nu, sing);
}

void write_csv_file(const ConvergenceReport& rep, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw data_error("cannot write '" + path + "'");
    out << rep.to_csv();
}

}  // namespace

StudyConfig resolve_config(const CommandOptions& opts) {
    if (opts.config_path.empty() == opts.preset_name.empty())
        throw config_error("give exactly one of --config or --preset");
    StudyConfig cfg =
        opts.config_path.empty() ? preset(opts.preset_name) : load_config(opts.config_path);
    if (opts.mu > 0.0) cfg.mu = opts.mu;
    if (opts.allow_large) cfg.allow_large = true;
    cfg.validate();
    return cfg;
}

int run_check(const CommandOptions& opts) {
    const StudyConfig cfg = resolve_config(opts);
    const PrismDomain domain = cfg.make_domain();
    const SingularityInfo sing = compute_singularity_info(domain);

    std::printf("domain: %d-gon cross-section, height %g, Ventcel face %s\n", domain.n_vertices(),
                domain.height, domain.ventcel_face.to_string().c_str());
    for (int v = 0; v < domain.n_vertices(); ++v)
        std::printf("  vertex %d: angle %.6f pi, lambda_e = %.6f%s\n", v,
                    sing.vertical_edge_angles[v] / 3.14159265358979323846, sing.lambda_e[v],
                    sing.edge_is_singular(v) ? "  (singular edge)" : "");

    const AdmissibilityReport rep = check_report(cfg, sing);
    std::printf("grading: mu = %g, nu = %g\n", cfg.mu, cfg.nu);
    for (const ConditionRecord& r : rep.records)
        std::printf("  region %d  %-22s  %g %s %g  %s\n", r.region, r.id, r.lhs,
                    r.greater ? ">" : "<", r.threshold, r.pass ? "PASS" : "FAIL");
    std::printf("result: grading %s\n", rep.all_pass ? "admissible" : "NOT admissible");
    return rep.all_pass ? 0 : 3;
}

int run_mesh(const CommandOptions& opts) {
    const StudyConfig cfg = resolve_config(opts);
    const PrismDomain domain = cfg.make_domain();
    const SingularityInfo sing = compute_singularity_info(domain);
    const int level = pick_level(opts, cfg);

    GradingSpec spec;
    const auto mesh = build_mesh(domain, sing, cfg, level, &spec);
    const MeshSizeReport sizes = mesh_size_report(*mesh, sing, spec.h, cfg.mu);

    const std::string tag = "k" + std::to_string(level);
    write_tetmesh_text(*mesh, out_path(opts, "mesh_" + tag + ".txt"));
    write_tetmesh_vtk(*mesh, out_path(opts, "mesh_" + tag + ".vtk"));
    {
        std::ofstream out(out_path(opts, "sizes_" + tag + ".csv"), std::ios::trunc);
        out << sizes.to_csv();
    }
    std::printf("level %d: h = %g, nodes = %zu, tets = %zu, free nodes = %ld\n", level, spec.h,
                mesh->nodes.size(), mesh->tets.size(), mesh->n_free_nodes());
    if (sizes.has_singular)
        std::printf("  tets on the singular edge: %ld, max in-plane/law ratio: %g\n",
                    sizes.singular_tet_count(), std::exp(sizes.max_log_grading_ratio()));
    std::printf("wrote mesh_%s.txt, mesh_%s.vtk, sizes_%s.csv in %s\n", tag.c_str(), tag.c_str(),
                tag.c_str(), opts.out_dir.c_str());
    return 0;
}

int run_solve(const CommandOptions& opts) {
    const StudyConfig cfg = resolve_config(opts);
    const PrismDomain domain = cfg.make_domain();
    const SingularityInfo sing = compute_singularity_info(domain);
    const ProblemData problem = make_problem(cfg.problem, domain);
    const int level = pick_level(opts, cfg);

    GradingSpec spec;
    const auto mesh = build_mesh(domain, sing, cfg, level, &spec);
    Solution sol = solve_problem(mesh, problem.f, problem.g, cfg.rel_tol, cfg.max_iter);
    sol.info.h = spec.h;
    sol.info.mu = cfg.mu;

    const std::string tag = "k" + std::to_string(level);
    write_vector_text(sol.coeffs, out_path(opts, "u_" + tag + ".txt"));
    write_solution_vtk(*mesh, sol.coeffs, out_path(opts, "u_" + tag + ".vtk"));
    std::printf("level %d: h = %g, tets = %zu, free nodes = %ld, cg iterations = %ld, residual = %.3e\n",
                level, spec.h, mesh->tets.size(), mesh->n_free_nodes(), sol.info.cg_iterations,
                sol.info.residual);
    if (problem.has_exact) {
        const VNormParts err = vnorm_error_exact(sol, problem.exact);
        std::printf("exact error: combined norm %.6e (volume H1 %.6e, face seminorm %.6e)\n",
                    err.total(), err.volume_h1(), err.face());
    }
    std::printf("wrote u_%s.txt, u_%s.vtk in %s\n", tag.c_str(), tag.c_str(), opts.out_dir.c_str());
    return 0;
}

int run_study(const CommandOptions& opts) {
    const StudyConfig cfg = resolve_config(opts);
    if (cfg.k_max - cfg.k_min < 2)
        throw config_error("a study needs k_max >= k_min + 2 to report at least one rate");
    const PrismDomain domain = cfg.make_domain();
    const SingularityInfo sing = compute_singularity_info(domain);
    const ProblemData problem = make_problem(cfg.problem, domain);

    if (!check_report(cfg, sing).all_pass)
        std::printf("warning: grading exponents violate the admissibility conditions "
                    "(run the check command for details); first-order convergence is not "
                    "guaranteed\n");

    ConvergenceReport rep;
    const std::string csv_path = out_path(opts, "study.csv");
    Solution prev;
    for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
        GradingSpec spec;
        const auto mesh = build_mesh(domain, sing, cfg, k, &spec);
        Solution sol = solve_problem(mesh, problem.f, problem.g, cfg.rel_tol, cfg.max_iter);
        sol.info.h = spec.h;
        sol.info.mu = cfg.mu;
        std::printf("level %d: h = %-8g tets = %-9zu free = %-8ld cg = %-6ld residual = %.2e\n", k,
                    spec.h, mesh->tets.size(), mesh->n_free_nodes(), sol.info.cg_iterations,
                    sol.info.residual);
        std::fflush(stdout);

        rep.levels.push_back(k);
        rep.h.push_back(spec.h);
        rep.n_free.push_back(mesh->n_free_nodes());
        rep.n_tets.push_back(static_cast<long long>(mesh->tets.size()));
        rep.values.push_back(prev.mesh ? vnorm_diff(sol, prev).total() : kNaN);
        const std::size_t i = rep.values.size() - 1;
        rep.rates.push_back(i >= 2 && rep.values[i - 1] > 0.0 && rep.values[i] > 0.0
                                ? std::log2(rep.values[i - 1] / rep.values[i])
                                : kNaN);
        write_csv_file(rep, csv_path);  // keep partial results if a later level fails
        prev = std::move(sol);
    }

    std::printf("\n%s", rep.to_table("vnorm_diff").c_str());
    std::printf("wrote %s\n", csv_path.c_str());
    return 0;
}

}  // namespace ventcel
