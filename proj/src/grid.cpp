#include "contourqa/grid.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace cqa {

void validate_grid(const GridInfo& g) {
    for (int a = 0; a < 3; ++a) {
        if (g.dims[a] < 2)
            throw std::invalid_argument("grid dims must be >= 2 per axis, got " + std::to_string(g.dims[a]) +
                                        " on axis " + std::to_string(a));
        if (!(g.spacing[a] > 0.0))
            throw std::invalid_argument("grid spacing must be > 0, got " + std::to_string(g.spacing[a]) +
                                        " on axis " + std::to_string(a));
    }
}

size_t BinaryMask::foreground_count() const {
    size_t n = 0;
    for (uint8_t v : data) n += (v != 0);
    return n;
}

double trilinear_sample(const Volume& vol, const Vec3& p) {
    const Vec3 v = vol.world_to_voxel(p);
    static const char* axis_names[3] = {"x", "y", "z"};
    double f[3];
    int i0[3];
    for (int a = 0; a < 3; ++a) {
        const double c = v[a];
        const double hi = static_cast<double>(vol.dims[a] - 1);
        if (c < 0.0 || c > hi)
            throw std::out_of_range(std::string("trilinear_sample: point outside volume on axis ") + axis_names[a]);
        int lo = static_cast<int>(c);
        if (lo >= vol.dims[a] - 1) lo = vol.dims[a] - 2;  // p exactly on the far face
        i0[a] = lo;
        f[a] = c - static_cast<double>(lo);
    }
    const int x = i0[0], y = i0[1], z = i0[2];
    const double fx = f[0], fy = f[1], fz = f[2];
    // 64-bit accumulation over the 8 corners
    double c00 = vol.at(x, y, z) * (1.0 - fx) + vol.at(x + 1, y, z) * fx;
    double c10 = vol.at(x, y + 1, z) * (1.0 - fx) + vol.at(x + 1, y + 1, z) * fx;
    double c01 = vol.at(x, y, z + 1) * (1.0 - fx) + vol.at(x + 1, y, z + 1) * fx;
    double c11 = vol.at(x, y + 1, z + 1) * (1.0 - fx) + vol.at(x + 1, y + 1, z + 1) * fx;
    double c0 = c00 * (1.0 - fy) + c10 * fy;
    double c1 = c01 * (1.0 - fy) + c11 * fy;
    return c0 * (1.0 - fz) + c1 * fz;
}

}  // namespace cqa
