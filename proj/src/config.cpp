#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "ventcel/config.hpp"

namespace ventcel {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& text, int lineno) {
    const std::string t = trim(text);
    const char* begin = t.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw config_error("line " + std::to_string(lineno) + ": expected a number, got '" + t + "'");
    return v;
}

long parse_long(const std::string& text, int lineno) {
    const std::string t = trim(text);
    const char* begin = t.c_str();
    char* end = nullptr;
    const long v = std::strtol(begin, &end, 10);
    if (end == begin || *end != '\0')
        throw config_error("line " + std::to_string(lineno) + ": expected an integer, got '" + t + "'");
    return v;
}

bool parse_bool(const std::string& text, int lineno) {
    const std::string t = trim(text);
    if (t == "true" || t == "yes" || t == "1") return true;
    if (t == "false" || t == "no" || t == "0") return false;
    throw config_error("line " + std::to_string(lineno) + ": expected a boolean, got '" + t + "'");
}

std::vector<Vec2> parse_polygon(const std::string& text, int lineno) {
    std::string cleaned = text;
    for (char& c : cleaned)
        if (c == '[' || c == ']' || c == '(' || c == ')' || c == '{' || c == '}' || c == ',' ||
            c == ';')
            c = ' ';
    std::istringstream in(cleaned);
    std::vector<double> nums;
    std::string tok;
    while (in >> tok) nums.push_back(parse_double(tok, lineno));
    if (nums.size() % 2 != 0)
        throw config_error("line " + std::to_string(lineno) + ": polygon needs an even number of coordinates");
    std::vector<Vec2> poly;
    for (std::size_t i = 0; i + 1 < nums.size(); i += 2) poly.push_back({nums[i], nums[i + 1]});
    if (poly.size() < 3)
        throw config_error("line " + std::to_string(lineno) + ": polygon needs at least 3 vertices");
    return poly;
}

}  // namespace

PrismDomain StudyConfig::make_domain() const {
    PrismDomain d = PrismDomain::create(polygon, height, face);
    if (lambda_v_bottom < kInf)
        d.lambda_v_bottom.assign(d.lambda_v_bottom.size(), lambda_v_bottom);
    if (lambda_v_top < kInf) d.lambda_v_top.assign(d.lambda_v_top.size(), lambda_v_top);
    return d;
}

void StudyConfig::validate() const {
    if (polygon.size() < 3) throw config_error("domain polygon is missing or too small");
    if (!(height > 0.0)) throw config_error("domain height must be positive");
    if (!(mu > 0.0 && mu <= 1.0)) throw config_error("grading mu must lie in (0, 1]");
    if (!(nu > 0.0 && nu <= 1.0)) throw config_error("grading nu must lie in (0, 1]");
    if (r0 < 0.0) throw config_error("grading r0 must be non-negative");
    if (k_min < 1) throw config_error("k_min must be at least 1");
    if (k_max < k_min) throw config_error("k_max must be at least k_min");
    if (k_max > 8 && !allow_large)
        throw config_error("k_max > 8 needs allow_large = true (meshes grow eightfold per level)");
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw config_error("solver rel_tol must lie in (0, 1)");
    if (max_iter < 0) throw config_error("solver max_iter must be non-negative");
}

StudyConfig parse_config_text(const std::string& text) {
    StudyConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    auto fail = [&lineno](const std::string& msg) {
        throw config_error("line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail("unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "domain" && section != "grading" && section != "study" &&
                section != "solver")
                fail("unknown section [" + section + "]");
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail("expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail("empty key");
        if (value.empty()) fail("empty value for '" + key + "'");
        if (section.empty()) fail("key '" + key + "' appears before any [section]");

        if (section == "domain") {
            if (key == "polygon") cfg.polygon = parse_polygon(value, lineno);
            else if (key == "height") cfg.height = parse_double(value, lineno);
            else if (key == "face") {
                try {
                    cfg.face = FaceSelector::parse(value);
                } catch (const config_error& e) {
                    fail(e.what());
                }
            } else if (key == "lambda_v_bottom") cfg.lambda_v_bottom = parse_double(value, lineno);
            else if (key == "lambda_v_top") cfg.lambda_v_top = parse_double(value, lineno);
            else fail("unknown key '" + key + "' in [domain]");
        } else if (section == "grading") {
            if (key == "mu") cfg.mu = parse_double(value, lineno);
            else if (key == "nu") cfg.nu = parse_double(value, lineno);
            else if (key == "r0") cfg.r0 = parse_double(value, lineno);
            else fail("unknown key '" + key + "' in [grading]");
        } else if (section == "study") {
            if (key == "k_min") cfg.k_min = static_cast<int>(parse_long(value, lineno));
            else if (key == "k_max") cfg.k_max = static_cast<int>(parse_long(value, lineno));
            else if (key == "problem") cfg.problem = value;
            else if (key == "allow_large") cfg.allow_large = parse_bool(value, lineno);
            else fail("unknown key '" + key + "' in [study]");
        } else {
            if (key == "rel_tol") cfg.rel_tol = parse_double(value, lineno);
            else if (key == "max_iter") cfg.max_iter = parse_long(value, lineno);
            else fail("unknown key '" + key + "' in [solver]");
        }
    }
    return cfg;
}

StudyConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

namespace {

// Pentagon with a re-entrant corner at vertex 1; the interior angle there is
// 3*pi/2, so the vertical edge above it is the singular one.
const std::vector<Vec2> kPentagon{{0.0, 0.0}, {0.5, 0.5}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};

}  // namespace

StudyConfig preset(const std::string& name) {
    StudyConfig cfg;
    if (name == "prism-case-1" || name == "prism-case-2") {
        cfg.polygon = kPentagon;
        cfg.height = 1.0;
        cfg.face = name == "prism-case-1" ? FaceSelector{FaceKind::Bottom, -1}
                                          : FaceSelector{FaceKind::Side, 1};
        cfg.mu = 0.58;
        cfg.nu = 1.0;
        cfg.k_min = 2;
        cfg.k_max = 5;
        cfg.problem = "const1";
        return cfg;
    }
    if (name == "cube-exact") {
        cfg.polygon = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
        cfg.height = 1.0;
        cfg.face = {FaceKind::Bottom, -1};
        cfg.mu = 1.0;
        cfg.nu = 1.0;
        cfg.k_min = 2;
        cfg.k_max = 5;
        cfg.problem = "manufactured_cube";
        return cfg;
    }
    std::string known;
    for (const std::string& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw config_error("unknown preset '" + name + "' (known: " + known + ")");
}

std::vector<std::string> preset_names() { return {"prism-case-1", "prism-case-2", "cube-exact"}; }

ProblemData make_problem(const std::string& name, const PrismDomain& domain) {
    ProblemData p;
    p.name = name;
    if (name == "const1") {
        p.f = [](const Vec3&) { return 1.0; };
        p.g = [](const Vec3&) { return 0.0; };
        return p;
    }
    if (name == "manufactured_cube") {
        const std::vector<Vec2> square{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
        bool ok = domain.cross_section.size() == 4 && std::abs(domain.height - 1.0) < 1e-12 &&
                  domain.ventcel_face.kind == FaceKind::Bottom;
        for (std::size_t i = 0; ok && i < 4; ++i)
            ok = norm(domain.cross_section[i] - square[i]) < 1e-12;
        if (!ok)
            throw config_error(
                "problem 'manufactured_cube' needs the unit-square cross-section "
                "(0,0) (1,0) (1,1) (0,1), height 1, face = bottom");
        constexpr double pi = std::numbers::pi;
        // u = sin(pi x) sin(pi y) (1 - z): zero on the four side faces and the
        // top, and on the bottom -lap_T(trace u) + d_nu u = (2 pi^2 + 1) trace u.
        p.f = [pi](const Vec3& x) {
            return 2.0 * pi * pi * std::sin(pi * x.x) * std::sin(pi * x.y) * (1.0 - x.z);
        };
        p.g = [pi](const Vec3& x) {
            return (2.0 * pi * pi + 1.0) * std::sin(pi * x.x) * std::sin(pi * x.y);
        };
        p.has_exact = true;
        p.exact.value = [pi](const Vec3& x) {
            return std::sin(pi * x.x) * std::sin(pi * x.y) * (1.0 - x.z);
        };
        p.exact.gradient = [pi](const Vec3& x) {
            const double sx = std::sin(pi * x.x), cx = std::cos(pi * x.x);
            const double sy = std::sin(pi * x.y), cy = std::cos(pi * x.y);
            return Vec3{pi * cx * sy * (1.0 - x.z), pi * sx * cy * (1.0 - x.z), -sx * sy};
        };
        return p;
    }
    throw config_error("unknown problem '" + name + "' (known: const1, manufactured_cube)");
}

}  // namespace ventcel
