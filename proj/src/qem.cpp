#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

#include "contourqa/mesh.hpp"

namespace cqa {

namespace {

// Symmetric 4x4 plane quadric, upper triangle: rows (a,b,c,d) x (a,b,c,d).
struct Quadric {
    double q[10] = {0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
    // layout: [aa ab ac ad bb bc bd cc cd dd]

    Quadric& operator+=(const Quadric& o) {
        for (int i = 0; i < 10; ++i) q[i] += o.q[i];
        return *this;
    }

    static Quadric from_plane(const Vec3& n, double d) {
        Quadric k;
        k.q[0] = n.x * n.x; k.q[1] = n.x * n.y; k.q[2] = n.x * n.z; k.q[3] = n.x * d;
        k.q[4] = n.y * n.y; k.q[5] = n.y * n.z; k.q[6] = n.y * d;
        k.q[7] = n.z * n.z; k.q[8] = n.z * d;
        k.q[9] = d * d;
        return k;
    }

    double error(const Vec3& v) const {
        return v.x * (q[0] * v.x + 2 * q[1] * v.y + 2 * q[2] * v.z + 2 * q[3]) +
               v.y * (q[4] * v.y + 2 * q[5] * v.z + 2 * q[6]) +
               v.z * (q[7] * v.z + 2 * q[8]) + q[9];
    }
};

struct HeapEntry {
    double cost;
    int v0, v1;
    Vec3 pos;
    uint32_t stamp0, stamp1;
    bool operator>(const HeapEntry& o) const { return cost > o.cost; }
};

}  // namespace

DecimateResult decimate_qem(const TriMesh& input, int target_triangles) {
    if (!is_watertight(input)) throw std::invalid_argument("decimate_qem: input mesh is not watertight");
    if (input.triangle_count() <= target_triangles) return {input, true};  // nothing to do
    if (target_triangles < 16) throw std::invalid_argument("decimate_qem: target must be >= 16");

    const int nv = input.vertex_count();
    std::vector<Vec3> pos = input.vertices;
    std::vector<std::array<int, 3>> tris = input.triangles;
    std::vector<bool> tri_alive(tris.size(), true);
    std::vector<bool> vert_alive(nv, true);
    std::vector<uint32_t> stamp(nv, 0);
    std::vector<Quadric> quadric(nv);
    std::vector<std::vector<int>> vtris(nv);  // incident alive triangles (may hold stale ids)

    auto tri_normal_area = [&](const std::array<int, 3>& t, Vec3& n) {
        const Vec3 e1 = pos[t[1]] - pos[t[0]];
        const Vec3 e2 = pos[t[2]] - pos[t[0]];
        n = cross(e1, e2);
        const double len = norm(n);
        if (len > 0) n *= 1.0 / len;
        return 0.5 * len;
    };

    for (size_t ti = 0; ti < tris.size(); ++ti) {
        const auto& t = tris[ti];
        Vec3 n;
        if (tri_normal_area(t, n) > 0) {
            const Quadric k = Quadric::from_plane(n, -dot(n, pos[t[0]]));
            for (int k3 = 0; k3 < 3; ++k3) quadric[t[k3]] += k;
        }
        for (int k3 = 0; k3 < 3; ++k3) vtris[t[k3]].push_back(static_cast<int>(ti));
    }

    // Minimizer of q0+q1 with endpoint/midpoint fallback.
    auto optimal_point = [&](const Quadric& q, int a, int b, double& cost) {
        const double a00 = q.q[0], a01 = q.q[1], a02 = q.q[2];
        const double a11 = q.q[4], a12 = q.q[5], a22 = q.q[7];
        const double b0 = -q.q[3], b1 = -q.q[6], b2 = -q.q[8];
        const double det = a00 * (a11 * a22 - a12 * a12) - a01 * (a01 * a22 - a12 * a02) +
                           a02 * (a01 * a12 - a11 * a02);
        Vec3 best;
        if (std::fabs(det) >= 1e-12) {
            const double inv = 1.0 / det;
            best.x = inv * ((a11 * a22 - a12 * a12) * b0 + (a02 * a12 - a01 * a22) * b1 + (a01 * a12 - a02 * a11) * b2);
            best.y = inv * ((a12 * a02 - a01 * a22) * b0 + (a00 * a22 - a02 * a02) * b1 + (a02 * a01 - a00 * a12) * b2);
            best.z = inv * ((a01 * a12 - a11 * a02) * b0 + (a01 * a02 - a00 * a12) * b1 + (a00 * a11 - a01 * a01) * b2);
            cost = q.error(best);
            return best;
        }
        const Vec3 mid = (pos[a] + pos[b]) * 0.5;
        const Vec3 cand[3] = {pos[a], pos[b], mid};
        cost = q.error(cand[0]);
        best = cand[0];
        for (int i = 1; i < 3; ++i) {
            const double c = q.error(cand[i]);
            if (c < cost) {
                cost = c;
                best = cand[i];
            }
        }
        return best;
    };

    std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<HeapEntry>> heap;

    auto push_edge = [&](int a, int b) {
        if (a == b || !vert_alive[a] || !vert_alive[b]) return;
        Quadric q = quadric[a];
        q += quadric[b];
        double cost;
        const Vec3 p = optimal_point(q, a, b, cost);
        heap.push({cost, a, b, p, stamp[a], stamp[b]});
    };

    for (const auto& e : mesh_edges(input)) push_edge(e[0], e[1]);

    int alive_tris = static_cast<int>(tris.size());

    auto compact_incident = [&](int v) {
        auto& list = vtris[v];
        list.erase(std::remove_if(list.begin(), list.end(), [&](int ti) { return !tri_alive[ti]; }), list.end());
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    };

    bool reached = alive_tris <= target_triangles;

    while (alive_tris > target_triangles && !heap.empty()) {
        HeapEntry e = heap.top();
        heap.pop();
        if (!vert_alive[e.v0] || !vert_alive[e.v1]) continue;
        if (stamp[e.v0] != e.stamp0 || stamp[e.v1] != e.stamp1) continue;  // stale

        const int v0 = e.v0, v1 = e.v1;
        compact_incident(v0);
        compact_incident(v1);

        // Triangles sharing the edge die; the edge must be an interior manifold edge.
        std::vector<int> dying;
        for (int ti : vtris[v0]) {
            const auto& t = tris[ti];
            const bool has1 = (t[0] == v1 || t[1] == v1 || t[2] == v1);
            if (has1) dying.push_back(ti);
        }
        if (dying.size() != 2) continue;

        // Link condition: v0 and v1 may share exactly the two opposite vertices of the
        // dying triangles, otherwise the collapse pinches the surface.
        {
            std::vector<int> n0, n1;
            for (int ti : vtris[v0])
                for (int k = 0; k < 3; ++k)
                    if (tris[ti][k] != v0 && tris[ti][k] != v1) n0.push_back(tris[ti][k]);
            for (int ti : vtris[v1])
                for (int k = 0; k < 3; ++k)
                    if (tris[ti][k] != v0 && tris[ti][k] != v1) n1.push_back(tris[ti][k]);
            std::sort(n0.begin(), n0.end());
            n0.erase(std::unique(n0.begin(), n0.end()), n0.end());
            std::sort(n1.begin(), n1.end());
            n1.erase(std::unique(n1.begin(), n1.end()), n1.end());
            std::vector<int> common;
            std::set_intersection(n0.begin(), n0.end(), n1.begin(), n1.end(), std::back_inserter(common));
            if (common.size() != 2) continue;
        }

        // Normal-flip guard: surviving triangles incident to either endpoint must keep
        // their orientation (and stay non-degenerate) when the endpoint moves to e.pos.
        bool flips = false;
        for (int pass = 0; pass < 2 && !flips; ++pass) {
            const int v = pass == 0 ? v0 : v1;
            for (int ti : vtris[v]) {
                if (std::find(dying.begin(), dying.end(), ti) != dying.end()) continue;
                const auto& t = tris[ti];
                if (pass == 1 && (t[0] == v0 || t[1] == v0 || t[2] == v0)) continue;  // counted in pass 0
                Vec3 before;
                if (tri_normal_area(t, before) <= 0) continue;
                Vec3 p[3];
                for (int k = 0; k < 3; ++k) p[k] = (t[k] == v0 || t[k] == v1) ? e.pos : pos[t[k]];
                const Vec3 after = cross(p[1] - p[0], p[2] - p[0]);
                const double area2 = norm(after);
                if (area2 < 1e-14 || dot(before, after) < 0.0) {
                    flips = true;
                    break;
                }
            }
        }
        if (flips) continue;

        // Commit: merge v1 into v0 at the optimal position.
        pos[v0] = e.pos;
        quadric[v0] += quadric[v1];
        vert_alive[v1] = false;
        ++stamp[v0];
        ++stamp[v1];

        for (int ti : dying) {
            tri_alive[ti] = false;
            --alive_tris;
        }
        for (int ti : vtris[v1]) {
            if (!tri_alive[ti]) continue;
            auto& t = tris[ti];
            for (int k = 0; k < 3; ++k)
                if (t[k] == v1) t[k] = v0;
            vtris[v0].push_back(ti);
        }
        vtris[v1].clear();
        compact_incident(v0);

        // Refresh costs of all edges around the merged vertex.
        std::vector<int> ring;
        for (int ti : vtris[v0])
            for (int k = 0; k < 3; ++k)
                if (tris[ti][k] != v0) ring.push_back(tris[ti][k]);
        std::sort(ring.begin(), ring.end());
        ring.erase(std::unique(ring.begin(), ring.end()), ring.end());
        for (int u : ring) push_edge(v0, u);

        if (alive_tris <= target_triangles) {
            reached = true;
            break;
        }
    }
    if (alive_tris > target_triangles) reached = false;

    DecimateResult result;
    result.reached_target = reached;
    std::vector<bool> referenced(nv, false);
    for (size_t ti = 0; ti < tris.size(); ++ti)
        if (tri_alive[ti])
            for (int k = 0; k < 3; ++k) referenced[tris[ti][k]] = true;
    std::vector<int> remap(nv, -1);
    for (int v = 0; v < nv; ++v)  // original order: a no-op decimation is the identity
        if (referenced[v]) {
            remap[v] = result.mesh.vertex_count();
            result.mesh.vertices.push_back(pos[v]);
        }
    for (size_t ti = 0; ti < tris.size(); ++ti) {
        if (!tri_alive[ti]) continue;
        result.mesh.triangles.push_back({remap[tris[ti][0]], remap[tris[ti][1]], remap[tris[ti][2]]});
    }
    return result;
}

}  // namespace cqa
