#pragma once

#include <string>

#include "ventcel/config.hpp"

namespace ventcel {

// Options shared by the CLI subcommands.  Exactly one of config_path /
// preset_name selects the configuration; the remaining fields override it.
struct CommandOptions {
    std::string config_path;
    std::string preset_name;
    int level = 0;        // 0 = k_min from the config (mesh/solve only)
    double mu = 0.0;      // 0 = keep the configured value
    std::string out_dir = ".";
    bool allow_large = false;
};

StudyConfig resolve_config(const CommandOptions& opts);

// Evaluates the grading admissibility conditions; returns 0 (admissible)
// or 3 (violated).
int run_check(const CommandOptions& opts);

// Generates the mesh for one level and writes mesh_k<k>.txt, mesh_k<k>.vtk,
// and sizes_k<k>.csv to out_dir.
int run_mesh(const CommandOptions& opts);

// Solves one level and writes u_k<k>.txt and u_k<k>.vtk to out_dir; prints
// the exact-error norm when the problem carries an exact solution.
int run_solve(const CommandOptions& opts);

// Runs levels k_min..k_max, prints the rate table of successive-solution
// differences in the combined norm, and writes study.csv to out_dir (updated
// after every level, so an aborted run leaves the completed rows).
int run_study(const CommandOptions& opts);

}  // namespace ventcel
