#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "ventcel/geometry.hpp"

namespace ventcel {

// Conforming triangulation of the cross-section polygon.  Triangles are CCW;
// boundary edges carry the index of the polygon edge they subdivide.
struct TriMesh2D {
    std::vector<Vec2> nodes;
    std::vector<std::array<int, 3>> triangles;
    struct BoundaryEdge {
        int a = -1, b = -1;
        int polygon_edge = -1;
    };
    std::vector<BoundaryEdge> boundary;

    double max_diameter() const;
    // Conformity, orientation, and (when the polygon is given) boundary
    // placement checks.  Throws geometry_error on violation.
    void validate(const std::vector<Vec2>* polygon = nullptr) const;
};

// Coarse conforming triangulation, uniformly refined until each triangle
// diameter is at most sqrt(2)*h0, with every triangle touching at most one
// singular polygon corner.
TriMesh2D triangulate_cross_section(const PrismDomain& domain, double h0);

TriMesh2D refine_uniform(const TriMesh2D& mesh, int levels);

// Radial power grading toward `corner`: points at distance r < r0 move to
// r0*(r/r0)^(1/mu).  Nodes at or beyond r0 are untouched; mu = 1 is the
// identity.  Throws grading_error if an element degenerates.
TriMesh2D apply_grading(const TriMesh2D& mesh, Vec2 corner, double mu, double r0);

// Largest admissible grading radius is the distance from the corner to the
// nearest non-adjacent polygon edge; the default is half of it.
double max_grading_radius(const PrismDomain& domain, int vertex);
double default_grading_radius(const PrismDomain& domain, int vertex);

enum class NodeClass : int {
    Interior = 0,
    Dirichlet = 1,
    VentcelInterior = 2,
    VentcelBoundary = 3,
};

struct TetMesh {
    std::vector<Vec3> nodes;
    std::vector<std::array<int, 4>> tets;
    struct BoundaryTri {
        std::array<int, 3> v{};
        FaceSelector face;
    };
    std::vector<BoundaryTri> boundary;
    std::vector<NodeClass> node_class;
    FaceSelector ventcel_face;
    std::vector<Vec2> footprint;  // cross-section polygon of the prism
    double height = 0.0;

    double total_volume() const;
    long n_free_nodes() const;
    // Positive volumes, conforming faces, and agreement between the tagged
    // boundary list and the combinatorial boundary.  Throws geometry_error.
    void validate() const;
};

// Extrudes the footprint into nz uniform layers, splitting each prism into
// three tets; quad faces are split along the diagonal through their lowest
// global node index, which makes neighbouring prisms agree.
TetMesh extrude_to_tets(const TriMesh2D& footprint, const PrismDomain& domain, int nz);

struct GradingSpec {
    double h = 0.0;
    int nz = 0;
    struct Corner {
        int vertex = -1;
        double mu = 1.0;
        double r0 = 0.0;  // 0 = default radius
    };
    std::vector<Corner> corners;

    // Level-k spec: h = 2^-k, nz = round(height/h), one grading corner per
    // singular polygon vertex with the given mu.
    static GradingSpec for_level(const PrismDomain& domain, const SingularityInfo& sing,
                                 int level, double mu, double r0 = 0.0);
};

// Full pipeline: triangulate, grade, extrude.
TetMesh generate_mesh(const PrismDomain& domain, const GradingSpec& spec);

// One boundary face flattened into an isometric chart: (x, y) for bottom and
// top, (arc length along the edge, z) for side faces.
struct SurfaceMesh {
    std::vector<Vec2> nodes;  // chart coordinates
    std::vector<std::array<int, 3>> triangles;
    std::vector<int> volume_node;
    FaceSelector face;

    double total_area() const;
};

SurfaceMesh extract_surface(const TetMesh& mesh, FaceSelector face);

// Treats a cross-section triangulation as a standalone chart surface
// (identity chart, volume_node = identity); used by the 2D face studies.
SurfaceMesh surface_from_trimesh(const TriMesh2D& mesh);

// Per-tet distances to the singular edge/vertex and directional extents,
// with the aggregate ratios used by the mesh-law checks.
struct MeshSizeReport {
    std::vector<double> r;         // distance to the singular vertical edge
    std::vector<double> R;         // distance to the singular vertex
    std::vector<double> inplane;   // in-plane extent
    std::vector<double> vertical;  // vertical extent
    double h = 0.0;
    double mu = 1.0;
    bool has_singular = false;

    long singular_tet_count() const;      // tets with r == 0
    double max_log_grading_ratio() const; // max |log(inplane/(h*r^(1-mu)))| over r > 0
    double max_corner_ratio() const;      // max inplane/h^(1/mu) over r == 0
    std::string to_csv() const;
};

MeshSizeReport mesh_size_report(const TetMesh& mesh, Vec2 singular_corner, double h, double mu);
// Uses the first singular corner in `sing`; degenerates to plain extents
// (r = inf) when none exists.
MeshSizeReport mesh_size_report(const TetMesh& mesh, const SingularityInfo& sing, double h,
                                double mu);

// Plain-text mesh format: node count, "x y z" lines, tet count, "i j k l"
// lines, boundary triangle count, "i j k tag" lines; 0-based indices.
void write_tetmesh_text(const TetMesh& mesh, const std::string& path);
TetMesh read_tetmesh_text(const std::string& path, const PrismDomain& domain);

// Legacy ASCII VTK unstructured grid (cell type 10) with the node
// classification as point data; write_solution_vtk adds the solution values.
void write_tetmesh_vtk(const TetMesh& mesh, const std::string& path);
void write_solution_vtk(const TetMesh& mesh, std::span<const double> u, const std::string& path);

void write_vector_text(std::span<const double> v, const std::string& path);

}  // namespace ventcel
