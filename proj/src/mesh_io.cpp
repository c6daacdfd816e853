#include <cstdio>
#include <fstream>
#include <sstream>

#include "ventcel/mesh.hpp"

namespace ventcel {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw data_error("cannot open '" + path + "' for writing");
    return os;
}

}  // namespace

void write_tetmesh_text(const TetMesh& mesh, const std::string& path) {
    std::ofstream os = open_out(path);
    os << mesh.nodes.size() << "\n";
    for (const Vec3& p : mesh.nodes) os << fmt(p.x) << " " << fmt(p.y) << " " << fmt(p.z) << "\n";
    os << mesh.tets.size() << "\n";
    for (const auto& t : mesh.tets) os << t[0] << " " << t[1] << " " << t[2] << " " << t[3] << "\n";
    os << mesh.boundary.size() << "\n";
    for (const auto& bt : mesh.boundary)
        os << bt.v[0] << " " << bt.v[1] << " " << bt.v[2] << " " << bt.face.to_string() << "\n";
}

TetMesh read_tetmesh_text(const std::string& path, const PrismDomain& domain) {
    std::ifstream is(path);
    if (!is) throw data_error("cannot open mesh file '" + path + "'");
    TetMesh mesh;
    std::size_t n_nodes = 0, n_tets = 0, n_btris = 0;
    if (!(is >> n_nodes)) throw data_error("mesh file: missing node count");
    mesh.nodes.resize(n_nodes);
    for (Vec3& p : mesh.nodes)
        if (!(is >> p.x >> p.y >> p.z)) throw data_error("mesh file: truncated node list");
    if (!(is >> n_tets)) throw data_error("mesh file: missing tet count");
    mesh.tets.resize(n_tets);
    for (auto& t : mesh.tets) {
        if (!(is >> t[0] >> t[1] >> t[2] >> t[3])) throw data_error("mesh file: truncated tet list");
        for (int v : t)
            if (v < 0 || v >= static_cast<int>(n_nodes))
                throw data_error("mesh file: tet vertex index out of range");
    }
    if (!(is >> n_btris)) throw data_error("mesh file: missing boundary triangle count");
    mesh.boundary.resize(n_btris);
    for (auto& bt : mesh.boundary) {
        std::string tag;
        if (!(is >> bt.v[0] >> bt.v[1] >> bt.v[2] >> tag))
            throw data_error("mesh file: truncated boundary list");
        for (int v : bt.v)
            if (v < 0 || v >= static_cast<int>(n_nodes))
                throw data_error("mesh file: boundary vertex index out of range");
        bt.face = FaceSelector::parse(tag);
    }

    mesh.ventcel_face = domain.ventcel_face;
    mesh.footprint = domain.cross_section;
    mesh.height = domain.height;

    mesh.node_class.assign(mesh.nodes.size(), NodeClass::Interior);
    std::vector<char> on_ventcel(mesh.nodes.size(), 0), on_other(mesh.nodes.size(), 0);
    for (const auto& bt : mesh.boundary) {
        const bool v = (bt.face == mesh.ventcel_face);
        for (int i : bt.v) (v ? on_ventcel : on_other)[i] = 1;
    }
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        if (on_ventcel[i])
            mesh.node_class[i] = on_other[i] ? NodeClass::VentcelBoundary : NodeClass::VentcelInterior;
        else if (on_other[i])
            mesh.node_class[i] = NodeClass::Dirichlet;
    }
    return mesh;
}

namespace {

void write_vtk_grid(std::ofstream& os, const TetMesh& mesh) {
    os << "# vtk DataFile Version 3.0\n";
    os << "ventcel mesh\n";
    os << "ASCII\n";
    os << "DATASET UNSTRUCTURED_GRID\n";
    os << "POINTS " << mesh.nodes.size() << " double\n";
    for (const Vec3& p : mesh.nodes) os << fmt(p.x) << " " << fmt(p.y) << " " << fmt(p.z) << "\n";
    os << "CELLS " << mesh.tets.size() << " " << 5 * mesh.tets.size() << "\n";
    for (const auto& t : mesh.tets)
        os << "4 " << t[0] << " " << t[1] << " " << t[2] << " " << t[3] << "\n";
    os << "CELL_TYPES " << mesh.tets.size() << "\n";
    for (std::size_t i = 0; i < mesh.tets.size(); ++i) os << "10\n";
    os << "POINT_DATA " << mesh.nodes.size() << "\n";
    os << "SCALARS node_class int 1\n";
    os << "LOOKUP_TABLE default\n";
    for (NodeClass c : mesh.node_class) os << static_cast<int>(c) << "\n";
}

}  // namespace

void write_tetmesh_vtk(const TetMesh& mesh, const std::string& path) {
    std::ofstream os = open_out(path);
    write_vtk_grid(os, mesh);
}

void write_solution_vtk(const TetMesh& mesh, std::span<const double> u, const std::string& path) {
    if (u.size() != mesh.nodes.size())
        throw data_error("write_solution_vtk: coefficient count does not match node count");
    std::ofstream os = open_out(path);
    write_vtk_grid(os, mesh);
    os << "SCALARS u float 1\n";
    os << "LOOKUP_TABLE default\n";
    for (double v : u) os << fmt(v) << "\n";
}

void write_vector_text(std::span<const double> v, const std::string& path) {
    std::ofstream os = open_out(path);
    for (double x : v) os << fmt(x) << "\n";
}

}  // namespace ventcel
