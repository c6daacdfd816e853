#include <cstdio>

#include "CLI11.hpp"
#include "ventcel/commands.hpp"

namespace {

void add_common(CLI::App* cmd, ventcel::CommandOptions& opts, bool with_level) {
    cmd->add_option("-c,--config", opts.config_path, "configuration file");
    cmd->add_option("-p,--preset", opts.preset_name,
                    "built-in configuration: prism-case-1, prism-case-2, cube-exact");
    cmd->add_option("--mu", opts.mu, "override the grading exponent mu");
    cmd->add_option("-o,--out", opts.out_dir, "output directory (default .)");
    cmd->add_flag("--allow-large", opts.allow_large, "permit refinement levels beyond 8");
    if (with_level) cmd->add_option("-k,--level", opts.level, "refinement level (default k_min)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-element solver for the Laplace problem with a Ventcel boundary "
                 "condition on one face of a right prism, with anisotropic graded meshes "
                 "and convergence studies"};
    app.require_subcommand(1);

    ventcel::CommandOptions opts;
    CLI::App* check = app.add_subcommand("check", "evaluate the grading admissibility conditions");
    add_common(check, opts, false);
    CLI::App* mesh = app.add_subcommand("mesh", "generate and write one mesh level");
    add_common(mesh, opts, true);
    CLI::App* solve = app.add_subcommand("solve", "solve one level and write the solution");
    add_common(solve, opts, true);
    CLI::App* study = app.add_subcommand("study", "run the k_min..k_max convergence study");
    add_common(study, opts, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return ventcel::run_check(opts);
        if (mesh->parsed()) return ventcel::run_mesh(opts);
        if (solve->parsed()) return ventcel::run_solve(opts);
        return ventcel::run_study(opts);
    } catch (const ventcel::config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const ventcel::geometry_error& e) {
        std::fprintf(stderr, "meshing error: %s\n", e.what());
        return 4;
    } catch (const ventcel::grading_error& e) {
        std::fprintf(stderr, "meshing error: %s\n", e.what());
        return 4;
    } catch (const ventcel::solver_error& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return 5;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
