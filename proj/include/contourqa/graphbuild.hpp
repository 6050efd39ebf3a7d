#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "contourqa/grid.hpp"
#include "contourqa/mesh.hpp"

namespace cqa {

// Five node classes from signed distance d to the hidden ground truth:
//   0: d < t1            (internal error)
//   1: t1 <= d < t2
//   2: t2 <= d <= t3     (on target)
//   3: t3 < d <= t4
//   4: d > t4            (external error)
struct ClassThresholds {
    std::array<double, 4> edges{-2.5, -0.5, 0.5, 2.5};
};

void validate_thresholds(const ClassThresholds& th);
uint8_t classify_distance(double d, const ClassThresholds& th);

constexpr int kPatchSize = 5;
constexpr int kPatchVoxels = kPatchSize * kPatchSize * kPatchSize;  // 125

// One training example: a cleaned mesh turned into a labeled graph.
struct GraphSample {
    std::vector<std::array<float, 3>> node_positions;    // N x 3 world mm
    std::vector<float> patches;                          // N x 125, normalized CT, x-fastest
    std::vector<std::array<uint32_t, 2>> edges;          // E x 2 directed (src, dst)
    std::vector<std::array<float, 3>> pseudo_coords;     // E x 3 in [0,1]
    std::vector<uint8_t> labels;                         // N
    std::vector<float> signed_distances;                 // N mm
    std::string provenance;                              // JSON: source ids + seeds

    int num_nodes() const { return static_cast<int>(node_positions.size()); }
    int num_edges() const { return static_cast<int>(edges.size()); }
};

// d_i = trilinear_sample(gt_sdf, node_i); labels by threshold bucketing. A node outside
// the SDF bounds raises std::out_of_range naming the node index.
void label_nodes(const TriMesh& mesh, const Volume& gt_sdf, const ClassThresholds& th,
                 std::vector<float>& signed_distances, std::vector<uint8_t>& labels);

// Directed edge list (both directions per mesh edge) and Cartesian pseudo-coordinates
// u(i->j) = 0.5 + (pos_j - pos_i) / (2 D), D = max |component| over all edges, clamped
// to [0,1]. Antiparallel edges are symmetric about 0.5.
void build_edges(const TriMesh& mesh, std::vector<std::array<uint32_t, 2>>& edges,
                 std::vector<std::array<float, 3>>& pseudo_coords);

// 5x5x5 patch centered on the voxel nearest the node. Voxels outside the volume are
// filled with -1000 HU; intensities clamped to [-250, 250] HU and mapped to [-1, 1].
void extract_patch(const Volume& ct, const Vec3& node, float* out125);

GraphSample assemble_sample(const Volume& ct, const TriMesh& mesh, const Volume& gt_sdf,
                            const ClassThresholds& th, std::string provenance_json = "{}");

}  // namespace cqa
