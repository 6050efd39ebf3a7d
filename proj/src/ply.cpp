#include <array>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "contourqa/mesh.hpp"

namespace cqa {

namespace {

// Fixed 5-class palette: internal errors cold, external errors hot.
constexpr std::array<std::array<uint8_t, 3>, 5> kPalette = {{
    {0, 0, 139},      // 0: dark blue
    {135, 206, 250},  // 1: light blue
    {0, 170, 0},      // 2: green
    {255, 165, 0},    // 3: orange
    {220, 20, 20},    // 4: red
}};

constexpr std::array<uint8_t, 3> kGray = {180, 180, 180};

}  // namespace

void export_ply(const TriMesh& mesh, const std::vector<uint8_t>& node_classes, const std::string& path) {
    if (!node_classes.empty() && node_classes.size() != mesh.vertices.size())
        throw std::invalid_argument("export_ply: classes length (" + std::to_string(node_classes.size()) +
                                    ") != vertex count (" + std::to_string(mesh.vertices.size()) + ")");

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("export_ply: cannot open " + path);

    out << "ply\nformat binary_little_endian 1.0\n"
        << "element vertex " << mesh.vertex_count() << "\n"
        << "property float x\nproperty float y\nproperty float z\n"
        << "property uchar red\nproperty uchar green\nproperty uchar blue\n"
        << "element face " << mesh.triangle_count() << "\n"
        << "property list uchar int vertex_indices\n"
        << "end_header\n";

    for (int v = 0; v < mesh.vertex_count(); ++v) {
        const float xyz[3] = {static_cast<float>(mesh.vertices[v].x), static_cast<float>(mesh.vertices[v].y),
                              static_cast<float>(mesh.vertices[v].z)};
        out.write(reinterpret_cast<const char*>(xyz), 12);
        const auto& rgb = node_classes.empty() ? kGray : kPalette[node_classes[v] < 5 ? node_classes[v] : 4];
        out.write(reinterpret_cast<const char*>(rgb.data()), 3);
    }
    for (const auto& t : mesh.triangles) {
        const uint8_t n = 3;
        out.write(reinterpret_cast<const char*>(&n), 1);
        const int32_t idx[3] = {t[0], t[1], t[2]};
        out.write(reinterpret_cast<const char*>(idx), 12);
    }
    if (!out) throw std::runtime_error("export_ply: write failed for " + path);
}

TriMesh load_ply(const std::string& path, std::vector<uint8_t>* node_classes) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_ply: cannot open " + path);

    std::string line;
    int nv = -1, nf = -1;
    bool header_done = false;
    while (std::getline(in, line)) {
        if (line == "end_header") {
            header_done = true;
            break;
        }
        std::istringstream ss(line);
        std::string tok;
        ss >> tok;
        if (tok == "element") {
            std::string what;
            int count;
            ss >> what >> count;
            if (what == "vertex") nv = count;
            if (what == "face") nf = count;
        } else if (tok == "format" && line != "format binary_little_endian 1.0") {
            throw std::runtime_error("load_ply: unsupported format in " + path);
        }
    }
    if (!header_done || nv < 0 || nf < 0) throw std::runtime_error("load_ply: malformed header in " + path);

    TriMesh mesh;
    mesh.vertices.resize(nv);
    if (node_classes) node_classes->assign(nv, 0);
    for (int v = 0; v < nv; ++v) {
        float xyz[3];
        uint8_t rgb[3];
        in.read(reinterpret_cast<char*>(xyz), 12);
        in.read(reinterpret_cast<char*>(rgb), 3);
        mesh.vertices[v] = {xyz[0], xyz[1], xyz[2]};
        if (node_classes) {
            uint8_t cls = 0;
            for (uint8_t c = 0; c < 5; ++c)
                if (rgb[0] == kPalette[c][0] && rgb[1] == kPalette[c][1] && rgb[2] == kPalette[c][2]) cls = c;
            (*node_classes)[v] = cls;
        }
    }
    mesh.triangles.resize(nf);
    for (int f = 0; f < nf; ++f) {
        uint8_t n;
        int32_t idx[3];
        in.read(reinterpret_cast<char*>(&n), 1);
        if (n != 3) throw std::runtime_error("load_ply: non-triangle face in " + path);
        in.read(reinterpret_cast<char*>(idx), 12);
        mesh.triangles[f] = {idx[0], idx[1], idx[2]};
    }
    if (!in) throw std::runtime_error("load_ply: truncated payload in " + path);
    return mesh;
}

void save_mesh_json(const TriMesh& mesh, const std::vector<uint8_t>& node_classes, const std::string& path) {
    nlohmann::json j;
    auto& verts = j["vertices"] = nlohmann::json::array();
    for (const auto& v : mesh.vertices) verts.push_back({v.x, v.y, v.z});
    auto& tris = j["triangles"] = nlohmann::json::array();
    for (const auto& t : mesh.triangles) tris.push_back({t[0], t[1], t[2]});
    j["classes"] = node_classes;
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("save_mesh_json: cannot open " + path);
    out << j.dump();
}

}  // namespace cqa
