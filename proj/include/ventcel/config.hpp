#pragma once

#include <string>
#include <vector>

#include "ventcel/analysis.hpp"
#include "ventcel/geometry.hpp"

namespace ventcel {

// Full description of one study: the prism, the grading exponents, the level
// range, and the problem data.  Parsed from an INI-style file or a preset.
struct StudyConfig {
    // [domain]
    std::vector<Vec2> polygon;
    double height = 1.0;
    FaceSelector face;
    double lambda_v_bottom = kInf;
    double lambda_v_top = kInf;

    // [grading]
    double mu = 1.0;
    double nu = 1.0;
    double r0 = 0.0;  // 0 = default radius per corner

    // [study]
    int k_min = 2;
    int k_max = 5;
    std::string problem = "const1";
    bool allow_large = false;

    // [solver]
    double rel_tol = 1e-10;
    long max_iter = 0;  // 0 = automatic budget

    PrismDomain make_domain() const;
    // Semantic checks (ranges, level bounds).  Throws config_error.
    void validate() const;
};

// Parses INI-style text: [section] headers, key = value lines, '#' comments.
// Unknown sections or keys are errors; diagnostics carry line numbers.
// Polygon values accept bracketed pair lists, e.g. (0,0) (1,0) (1,1) (0,1).
StudyConfig parse_config_text(const std::string& text);
StudyConfig load_config(const std::string& path);

// Built-in configurations; see preset_names().
StudyConfig preset(const std::string& name);
std::vector<std::string> preset_names();

// Right-hand sides (and the exact solution when one is known) keyed by name.
struct ProblemData {
    std::string name;
    VolumeFn f;
    VolumeFn g;
    bool has_exact = false;
    ExactSolution exact;
};

// Known problems: "const1" (f = 1, g = 0) on any domain, and
// "manufactured_cube" (smooth exact solution) on the unit cube with the
// Ventcel condition on the bottom face.
ProblemData make_problem(const std::string& name, const PrismDomain& domain);

}  // namespace ventcel
