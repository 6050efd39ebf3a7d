#include <algorithm>
#include <cstdio>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "contourqa/mesh.hpp"

namespace cqa {

namespace {

uint64_t undirected_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<uint64_t>(a) << 32) | static_cast<uint32_t>(b);
}

}  // namespace

std::vector<std::array<int, 2>> mesh_edges(const TriMesh& mesh) {
    std::vector<std::array<int, 2>> edges;
    edges.reserve(mesh.triangles.size() * 3 / 2);
    for (const auto& t : mesh.triangles)
        for (int k = 0; k < 3; ++k) {
            int a = t[k], b = t[(k + 1) % 3];
            if (a < b) edges.push_back({a, b});
        }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

std::vector<std::vector<int>> vertex_neighbors(const TriMesh& mesh) {
    std::vector<std::vector<int>> nbr(mesh.vertex_count());
    for (const auto& t : mesh.triangles)
        for (int k = 0; k < 3; ++k) {
            nbr[t[k]].push_back(t[(k + 1) % 3]);
            nbr[t[k]].push_back(t[(k + 2) % 3]);
        }
    for (auto& v : nbr) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    return nbr;
}

bool is_watertight(const TriMesh& mesh) {
    if (mesh.triangles.empty()) return false;
    std::unordered_map<uint64_t, int> count;
    count.reserve(mesh.triangles.size() * 2);
    for (const auto& t : mesh.triangles) {
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) return false;
        for (int k = 0; k < 3; ++k) ++count[undirected_key(t[k], t[(k + 1) % 3])];
    }
    for (const auto& [key, c] : count)
        if (c != 2) return false;
    return true;
}

bool is_consistently_oriented(const TriMesh& mesh) {
    // Each directed half-edge must appear exactly once.
    std::unordered_map<uint64_t, int> dir;
    dir.reserve(mesh.triangles.size() * 3);
    for (const auto& t : mesh.triangles)
        for (int k = 0; k < 3; ++k) {
            const uint64_t key =
                (static_cast<uint64_t>(t[k]) << 32) | static_cast<uint32_t>(t[(k + 1) % 3]);
            if (++dir[key] > 1) return false;
        }
    return true;
}

int euler_characteristic(const TriMesh& mesh) {
    return mesh.vertex_count() - static_cast<int>(mesh_edges(mesh).size()) + mesh.triangle_count();
}

double mesh_volume(const TriMesh& mesh) {
    double vol6 = 0.0;
    for (const auto& t : mesh.triangles)
        vol6 += dot(mesh.vertices[t[0]], cross(mesh.vertices[t[1]], mesh.vertices[t[2]]));
    return vol6 / 6.0;
}

TriMesh largest_component(const TriMesh& mesh) {
    if (mesh.triangles.empty()) throw std::invalid_argument("largest_component: empty mesh");

    // Union-find over vertices through triangle edges.
    std::vector<int> parent(mesh.vertex_count());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (const auto& t : mesh.triangles) {
        int a = find(t[0]);
        int b = find(t[1]);
        int c = find(t[2]);
        parent[b] = a;
        parent[find(c)] = find(a);
    }

    std::unordered_map<int, int> tri_count;
    for (const auto& t : mesh.triangles) ++tri_count[find(t[0])];

    int best_root = -1, best_count = -1;
    for (int v = 0; v < mesh.vertex_count(); ++v) {  // ascending: ties keep lowest vertex index
        const int r = find(v);
        auto it = tri_count.find(r);
        if (it == tri_count.end()) continue;
        if (it->second > best_count) {
            best_count = it->second;
            best_root = r;
        }
    }

    TriMesh out;
    std::vector<int> remap(mesh.vertex_count(), -1);
    for (const auto& t : mesh.triangles) {
        if (find(t[0]) != best_root) continue;
        std::array<int, 3> nt{};
        for (int k = 0; k < 3; ++k) {
            if (remap[t[k]] == -1) {
                remap[t[k]] = out.vertex_count();
                out.vertices.push_back(mesh.vertices[t[k]]);
            }
            nt[k] = remap[t[k]];
        }
        out.triangles.push_back(nt);
    }
    return out;
}

TriMesh taubin_smooth(const TriMesh& mesh, int iterations, double lambda, double mu) {
    if (iterations < 0) throw std::invalid_argument("taubin_smooth: iterations must be >= 0");
    if (!(lambda > 0.0 && lambda < -mu) && iterations > 0)
        std::fprintf(stderr, "warning: taubin_smooth: (lambda=%g, mu=%g) outside the pass-band regime\n", lambda, mu);

    TriMesh out = mesh;
    const auto nbr = vertex_neighbors(mesh);
    std::vector<Vec3> next(out.vertices.size());

    auto umbrella_step = [&](double w) {
        for (size_t v = 0; v < out.vertices.size(); ++v) {
            if (nbr[v].empty()) {
                next[v] = out.vertices[v];
                continue;
            }
            Vec3 mean{0, 0, 0};
            for (int u : nbr[v]) mean += out.vertices[u];
            mean *= 1.0 / static_cast<double>(nbr[v].size());
            next[v] = out.vertices[v] + (mean - out.vertices[v]) * w;
        }
        out.vertices.swap(next);
    };

    for (int it = 0; it < iterations; ++it) {
        umbrella_step(lambda);
        umbrella_step(mu);
    }
    return out;
}

TriMesh extract_clean_mesh(const Volume& sdf, int target_triangles) {
    TriMesh mesh = marching_cubes(sdf, 0.0);
    mesh = largest_component(mesh);
    mesh = taubin_smooth(mesh, 100);
    mesh = decimate_qem(mesh, target_triangles).mesh;
    mesh = taubin_smooth(mesh, 10);
    return mesh;
}

}  // namespace cqa
