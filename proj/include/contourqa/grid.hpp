#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "contourqa/vec3.hpp"

namespace cqa {

// Axis-aligned voxel grid metadata. Voxel (i,j,k) has its sample position at the voxel
// center: origin + index*spacing (world mm). No rotation/shear is supported anywhere, so
// world_to_voxel is the exact inverse of voxel_to_world.
struct GridInfo {
    std::array<int, 3> dims{0, 0, 0};
    std::array<double, 3> spacing{1.0, 1.0, 1.0};
    std::array<double, 3> origin{0.0, 0.0, 0.0};

    size_t voxel_count() const {
        return static_cast<size_t>(dims[0]) * static_cast<size_t>(dims[1]) * static_cast<size_t>(dims[2]);
    }

    // x-fastest dense layout
    size_t index(int x, int y, int z) const {
        return static_cast<size_t>(x) +
               static_cast<size_t>(dims[0]) * (static_cast<size_t>(y) + static_cast<size_t>(dims[1]) * static_cast<size_t>(z));
    }

    bool in_bounds(int x, int y, int z) const {
        return x >= 0 && y >= 0 && z >= 0 && x < dims[0] && y < dims[1] && z < dims[2];
    }

    Vec3 voxel_to_world(const Vec3& idx) const {
        return {origin[0] + idx.x * spacing[0], origin[1] + idx.y * spacing[1], origin[2] + idx.z * spacing[2]};
    }

    Vec3 world_to_voxel(const Vec3& p) const {
        return {(p.x - origin[0]) / spacing[0], (p.y - origin[1]) / spacing[1], (p.z - origin[2]) / spacing[2]};
    }

    bool same_grid(const GridInfo& o) const {
        return dims == o.dims && spacing == o.spacing && origin == o.origin;
    }
};

// Throws std::invalid_argument if dims/spacing violate the grid invariants
// (dims >= 2 per axis, spacing > 0).
void validate_grid(const GridInfo& g);

// Dense scalar volume, float32 storage. Values are CT intensities (HU) or signed
// distances (mm) depending on context.
struct Volume : GridInfo {
    std::vector<float> data;

    Volume() = default;
    explicit Volume(const GridInfo& g, float fill = 0.0f) : GridInfo(g), data(g.voxel_count(), fill) {}

    float at(int x, int y, int z) const { return data[index(x, y, z)]; }
    float& at(int x, int y, int z) { return data[index(x, y, z)]; }
};

// Binary organ membership on the same grid layout.
struct BinaryMask : GridInfo {
    std::vector<uint8_t> data;

    BinaryMask() = default;
    explicit BinaryMask(const GridInfo& g, uint8_t fill = 0) : GridInfo(g), data(g.voxel_count(), fill) {}

    bool at(int x, int y, int z) const { return data[index(x, y, z)] != 0; }
    void set(int x, int y, int z, bool v) { data[index(x, y, z)] = v ? 1 : 0; }
    size_t foreground_count() const;
};

// Trilinear interpolation of the 8 voxel values surrounding world point p.
// p must lie inside the box spanned by voxel centers; a violated axis is named
// in the thrown std::out_of_range.
double trilinear_sample(const Volume& vol, const Vec3& p);

}  // namespace cqa
