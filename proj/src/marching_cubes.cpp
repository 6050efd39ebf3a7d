#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "contourqa/mesh.hpp"
#include "mc_tables.hpp"

namespace cqa {

namespace {

// Cell corner offsets, Bourke numbering: 0..3 bottom ring, 4..7 top ring.
constexpr int kCorner[8][3] = {
    {0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
    {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1},
};

// Cell edge -> its two corners.
constexpr int kEdgeCorner[12][2] = {
    {0, 1}, {1, 2}, {2, 3}, {3, 0},
    {4, 5}, {5, 6}, {6, 7}, {7, 4},
    {0, 4}, {1, 5}, {2, 6}, {3, 7},
};

// Cell edge -> (base corner, axis) for the global weld key. Every cell edge is
// axis-aligned; the key is shared exactly by all cells bordering that grid edge.
constexpr int kEdgeBase[12] = {0, 1, 3, 0, 4, 5, 7, 4, 0, 1, 2, 3};
constexpr int kEdgeAxis[12] = {0, 1, 0, 1, 0, 1, 0, 1, 2, 2, 2, 2};

}  // namespace

TriMesh marching_cubes(const Volume& sdf, double level) {
    validate_grid(sdf);
    const int nx = sdf.dims[0], ny = sdf.dims[1], nz = sdf.dims[2];

    bool below = false, above = false;
    for (float v : sdf.data) {
        below |= (v < level);
        above |= !(v < level);
        if (below && above) break;
    }
    if (!(below && above)) throw std::runtime_error("surface not present");

    TriMesh mesh;
    std::unordered_map<uint64_t, int> edge_vertex;  // global edge key -> welded vertex id
    edge_vertex.reserve(4096);

    auto edge_key = [&](int x, int y, int z, int axis) {
        return static_cast<uint64_t>(sdf.index(x, y, z)) * 3u + static_cast<uint64_t>(axis);
    };

    double corner_val[8];
    int corner_idx[8][3];
    int edge_vid[12];

    for (int z = 0; z + 1 < nz; ++z)
        for (int y = 0; y + 1 < ny; ++y)
            for (int x = 0; x + 1 < nx; ++x) {
                int cube = 0;
                for (int c = 0; c < 8; ++c) {
                    corner_idx[c][0] = x + kCorner[c][0];
                    corner_idx[c][1] = y + kCorner[c][1];
                    corner_idx[c][2] = z + kCorner[c][2];
                    corner_val[c] = sdf.at(corner_idx[c][0], corner_idx[c][1], corner_idx[c][2]);
                    if (corner_val[c] < level) cube |= (1 << c);
                }
                const uint16_t edges = mc::kEdgeTable[cube];
                if (edges == 0) continue;

                for (int e = 0; e < 12; ++e) {
                    if (!(edges & (1u << e))) continue;
                    const int b = kEdgeBase[e];
                    const uint64_t key =
                        edge_key(corner_idx[b][0], corner_idx[b][1], corner_idx[b][2], kEdgeAxis[e]);
                    auto it = edge_vertex.find(key);
                    if (it != edge_vertex.end()) {
                        edge_vid[e] = it->second;
                        continue;
                    }
                    const int ca = kEdgeCorner[e][0], cb = kEdgeCorner[e][1];
                    const double va = corner_val[ca], vb = corner_val[cb];
                    double t = (vb != va) ? (level - va) / (vb - va) : 0.5;
                    t = std::clamp(t, 0.0, 1.0);
                    const Vec3 pa = sdf.voxel_to_world(
                        {double(corner_idx[ca][0]), double(corner_idx[ca][1]), double(corner_idx[ca][2])});
                    const Vec3 pb = sdf.voxel_to_world(
                        {double(corner_idx[cb][0]), double(corner_idx[cb][1]), double(corner_idx[cb][2])});
                    const int vid = mesh.vertex_count();
                    mesh.vertices.push_back(pa + (pb - pa) * t);
                    edge_vertex.emplace(key, vid);
                    edge_vid[e] = vid;
                }

                const int8_t* tris = mc::kTriTable[cube];
                for (int i = 0; tris[i] != -1; i += 3) {
                    // Table order gives inward-facing triangles under the negative-inside
                    // convention; swap to make normals point toward positive values.
                    mesh.triangles.push_back({edge_vid[tris[i]], edge_vid[tris[i + 2]], edge_vid[tris[i + 1]]});
                }
            }
    return mesh;
}

}  // namespace cqa
