#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "contourqa/grid.hpp"
#include "contourqa/vec3.hpp"

namespace cqa {

// Triangulated surface in world mm. Triangles wind counter-clockwise when viewed from
// outside the enclosed region (normals point toward positive signed distance).
struct TriMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int triangle_count() const { return static_cast<int>(triangles.size()); }
};

// Undirected unique edges (a < b), sorted lexicographically.
std::vector<std::array<int, 2>> mesh_edges(const TriMesh& mesh);

// Per-vertex neighbor lists (sorted, unique).
std::vector<std::vector<int>> vertex_neighbors(const TriMesh& mesh);

// Every undirected edge borders exactly two triangles.
bool is_watertight(const TriMesh& mesh);

// Each shared edge is traversed in opposite directions by its two incident triangles.
bool is_consistently_oriented(const TriMesh& mesh);

// V - E + F (2 for a genus-0 closed surface).
int euler_characteristic(const TriMesh& mesh);

// Signed enclosed volume by the divergence theorem; positive for outward normals.
double mesh_volume(const TriMesh& mesh);

// Standard 256-case marching cubes at the given level with linear interpolation along
// cell edges; shared vertices welded by exact edge-key matching. Throws
// std::runtime_error("surface not present") when the field never crosses the level.
TriMesh marching_cubes(const Volume& sdf, double level = 0.0);

// Keeps the connected component with the most triangles (ties: the component containing
// the lowest vertex index) and re-indexes vertices compactly.
TriMesh largest_component(const TriMesh& mesh);

// Two-step lambda/mu umbrella-Laplacian smoothing (Taubin). Connectivity unchanged.
// Warns (stderr) unless 0 < lambda < -mu.
TriMesh taubin_smooth(const TriMesh& mesh, int iterations, double lambda = 0.5, double mu = -0.53);

struct DecimateResult {
    TriMesh mesh;
    bool reached_target = true;
};

// Greedy quadric-error edge collapse until the triangle count first reaches <= target.
// Collapses that would flip an incident triangle normal or create a non-manifold edge
// are rejected; if the target is unreachable, the best achievable mesh is returned with
// reached_target = false.
DecimateResult decimate_qem(const TriMesh& mesh, int target_triangles = 1000);

// The full cleanup chain: marching cubes at level 0, largest component, 100 Taubin
// iterations, decimation to ~1000 triangles, then 10 more Taubin iterations.
TriMesh extract_clean_mesh(const Volume& sdf, int target_triangles = 1000);

// Binary little-endian PLY with per-vertex uchar RGB from the fixed 5-class palette
// (0 dark blue, 1 light blue, 2 green, 3 orange, 4 red). classes may be empty (gray).
// Throws std::invalid_argument when classes is non-empty and its length != vertex count.
void export_ply(const TriMesh& mesh, const std::vector<uint8_t>& node_classes, const std::string& path);

// Reads back PLY files produced by export_ply (strict: only that layout).
TriMesh load_ply(const std::string& path, std::vector<uint8_t>* node_classes = nullptr);

// Debug JSON: {"vertices": [[x,y,z],...], "triangles": [[a,b,c],...], "classes": [...]}.
void save_mesh_json(const TriMesh& mesh, const std::vector<uint8_t>& node_classes, const std::string& path);

}  // namespace cqa
