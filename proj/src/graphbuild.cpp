#include "contourqa/graphbuild.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cqa {

void validate_thresholds(const ClassThresholds& th) {
    for (int i = 0; i + 1 < 4; ++i)
        if (!(th.edges[i] < th.edges[i + 1]))
            throw std::invalid_argument("class thresholds must be strictly increasing");
    if (!(th.edges[0] < 0.0 && th.edges[3] > 0.0))
        throw std::invalid_argument("class thresholds must straddle zero (t1 < 0 < t4)");
}

uint8_t classify_distance(double d, const ClassThresholds& th) {
    if (d < th.edges[0]) return 0;
    if (d < th.edges[1]) return 1;
    if (d <= th.edges[2]) return 2;
    if (d <= th.edges[3]) return 3;
    return 4;
}

void label_nodes(const TriMesh& mesh, const Volume& gt_sdf, const ClassThresholds& th,
                 std::vector<float>& signed_distances, std::vector<uint8_t>& labels) {
    validate_thresholds(th);
    const int n = mesh.vertex_count();
    signed_distances.resize(n);
    labels.resize(n);
    for (int i = 0; i < n; ++i) {
        double d;
        try {
            d = trilinear_sample(gt_sdf, mesh.vertices[i]);
        } catch (const std::out_of_range& e) {
            throw std::out_of_range("label_nodes: node " + std::to_string(i) + ": " + e.what());
        }
        signed_distances[i] = static_cast<float>(d);
        // classify the stored f32 value so labels stay recomputable from the record
        labels[i] = classify_distance(signed_distances[i], th);
    }
}

void build_edges(const TriMesh& mesh, std::vector<std::array<uint32_t, 2>>& edges,
                 std::vector<std::array<float, 3>>& pseudo_coords) {
    const auto undirected = mesh_edges(mesh);

    double max_comp = 0.0;
    for (const auto& e : undirected) {
        const Vec3 d = mesh.vertices[e[1]] - mesh.vertices[e[0]];
        for (int a = 0; a < 3; ++a) max_comp = std::max(max_comp, std::fabs(d[a]));
    }
    const double denom = max_comp > 0.0 ? 2.0 * max_comp : 1.0;

    edges.clear();
    pseudo_coords.clear();
    edges.reserve(undirected.size() * 2);
    pseudo_coords.reserve(undirected.size() * 2);
    for (const auto& e : undirected) {
        const Vec3 d = mesh.vertices[e[1]] - mesh.vertices[e[0]];
        std::array<float, 3> fwd{}, rev{};
        for (int a = 0; a < 3; ++a) {
            const double u = std::clamp(0.5 + d[a] / denom, 0.0, 1.0);
            fwd[a] = static_cast<float>(u);
            rev[a] = static_cast<float>(1.0 - u);
        }
        edges.push_back({static_cast<uint32_t>(e[0]), static_cast<uint32_t>(e[1])});
        pseudo_coords.push_back(fwd);
        edges.push_back({static_cast<uint32_t>(e[1]), static_cast<uint32_t>(e[0])});
        pseudo_coords.push_back(rev);
    }
}

void extract_patch(const Volume& ct, const Vec3& node, float* out125) {
    const Vec3 v = ct.world_to_voxel(node);
    const int cx = static_cast<int>(std::lround(v.x));
    const int cy = static_cast<int>(std::lround(v.y));
    const int cz = static_cast<int>(std::lround(v.z));
    const int r = kPatchSize / 2;
    int i = 0;
    for (int dz = -r; dz <= r; ++dz)
        for (int dy = -r; dy <= r; ++dy)
            for (int dx = -r; dx <= r; ++dx, ++i) {
                const int x = cx + dx, y = cy + dy, z = cz + dz;
                const double hu = ct.in_bounds(x, y, z) ? ct.at(x, y, z) : -1000.0;
                out125[i] = static_cast<float>(std::clamp(hu, -250.0, 250.0) / 250.0);
            }
}

GraphSample assemble_sample(const Volume& ct, const TriMesh& mesh, const Volume& gt_sdf,
                            const ClassThresholds& th, std::string provenance_json) {
    if (!ct.same_grid(gt_sdf)) throw std::invalid_argument("assemble_sample: ct and gt_sdf grids differ");

    GraphSample s;
    const int n = mesh.vertex_count();
    s.node_positions.resize(n);
    for (int i = 0; i < n; ++i) {
        s.node_positions[i] = {static_cast<float>(mesh.vertices[i].x), static_cast<float>(mesh.vertices[i].y),
                               static_cast<float>(mesh.vertices[i].z)};
    }
    label_nodes(mesh, gt_sdf, th, s.signed_distances, s.labels);
    build_edges(mesh, s.edges, s.pseudo_coords);
    for (const auto& e : s.edges)
        if (e[0] == e[1]) throw std::logic_error("assemble_sample: self-loop in edge list");
    s.patches.resize(static_cast<size_t>(n) * kPatchVoxels);
    for (int i = 0; i < n; ++i) extract_patch(ct, mesh.vertices[i], s.patches.data() + static_cast<size_t>(i) * kPatchVoxels);
    s.provenance = std::move(provenance_json);
    return s;
}

}  // namespace cqa
