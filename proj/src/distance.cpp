#include "contourqa/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace cqa {

namespace {

constexpr double INF = std::numeric_limits<double>::infinity();

// 1D lower envelope of parabolas: out[p] = min_q ((p-q)^2*w^2 + f[q]).
// Entries with f == INF never contribute. n is the line length, w the sample spacing.
void envelope_1d(const double* f, double* out, int n, double w, int* v, double* z) {
    int k = -1;
    for (int q = 0; q < n; ++q) {
        if (f[q] == INF) continue;
        const double xq = q * w;
        const double fq = f[q] + xq * xq;
        while (k >= 0) {
            const double xv = v[k] * w;
            const double s = (fq - (f[v[k]] + xv * xv)) / (2.0 * (xq - xv));
            if (s <= z[k]) {
                --k;
            } else {
                break;
            }
        }
        if (k < 0) {
            k = 0;
            v[0] = q;
            z[0] = -INF;
            z[1] = INF;
        } else {
            const double xv = v[k] * w;
            const double s = (fq - (f[v[k]] + xv * xv)) / (2.0 * (xq - xv));
            ++k;
            v[k] = q;
            z[k] = s;
            z[k + 1] = INF;
        }
    }
    if (k < 0) {  // whole line unreachable so far
        for (int p = 0; p < n; ++p) out[p] = INF;
        return;
    }
    int j = 0;
    for (int p = 0; p < n; ++p) {
        const double xp = p * w;
        while (z[j + 1] < xp) ++j;
        const double dx = xp - v[j] * w;
        out[p] = dx * dx + f[v[j]];
    }
}

// Squared Euclidean distance (mm^2) from every voxel to the nearest seed voxel center.
std::vector<double> squared_edt(const BinaryMask& mask, bool seed_value) {
    const int nx = mask.dims[0], ny = mask.dims[1], nz = mask.dims[2];
    std::vector<double> d(mask.voxel_count());
    for (size_t i = 0; i < d.size(); ++i) d[i] = (mask.data[i] != 0) == seed_value ? 0.0 : INF;

    const int nmax = std::max({nx, ny, nz});
    std::vector<double> line(nmax), out(nmax), z(nmax + 1);
    std::vector<int> v(nmax);

    // x pass
    for (int zz = 0; zz < nz; ++zz)
        for (int yy = 0; yy < ny; ++yy) {
            double* row = d.data() + mask.index(0, yy, zz);
            envelope_1d(row, out.data(), nx, mask.spacing[0], v.data(), z.data());
            std::copy(out.begin(), out.begin() + nx, row);
        }
    // y pass
    for (int zz = 0; zz < nz; ++zz)
        for (int xx = 0; xx < nx; ++xx) {
            for (int yy = 0; yy < ny; ++yy) line[yy] = d[mask.index(xx, yy, zz)];
            envelope_1d(line.data(), out.data(), ny, mask.spacing[1], v.data(), z.data());
            for (int yy = 0; yy < ny; ++yy) d[mask.index(xx, yy, zz)] = out[yy];
        }
    // z pass
    for (int yy = 0; yy < ny; ++yy)
        for (int xx = 0; xx < nx; ++xx) {
            for (int zz = 0; zz < nz; ++zz) line[zz] = d[mask.index(xx, yy, zz)];
            envelope_1d(line.data(), out.data(), nz, mask.spacing[2], v.data(), z.data());
            for (int zz = 0; zz < nz; ++zz) d[mask.index(xx, yy, zz)] = out[zz];
        }
    return d;
}

void check_nondegenerate(const BinaryMask& mask) {
    validate_grid(mask);
    const size_t fg = mask.foreground_count();
    if (fg == 0 || fg == mask.voxel_count()) throw std::invalid_argument("degenerate mask");
}

}  // namespace

Volume signed_distance_transform(const BinaryMask& mask) {
    check_nondegenerate(mask);
    const std::vector<double> to_fg = squared_edt(mask, true);
    const std::vector<double> to_bg = squared_edt(mask, false);
    Volume sdf(static_cast<const GridInfo&>(mask));
    for (size_t i = 0; i < sdf.data.size(); ++i)
        sdf.data[i] = static_cast<float>(std::sqrt(to_fg[i]) - std::sqrt(to_bg[i]));
    return sdf;
}

Volume brute_force_sdt(const BinaryMask& mask) {
    check_nondegenerate(mask);
    if (mask.voxel_count() > 64ull * 64 * 64)
        throw std::invalid_argument("brute_force_sdt: volume exceeds 64^3 voxel guard");

    const int nx = mask.dims[0], ny = mask.dims[1], nz = mask.dims[2];
    std::vector<std::array<double, 3>> fg, bg;
    for (int zz = 0; zz < nz; ++zz)
        for (int yy = 0; yy < ny; ++yy)
            for (int xx = 0; xx < nx; ++xx) {
                std::array<double, 3> p{xx * mask.spacing[0], yy * mask.spacing[1], zz * mask.spacing[2]};
                (mask.at(xx, yy, zz) ? fg : bg).push_back(p);
            }

    auto nearest = [](const std::array<double, 3>& p, const std::vector<std::array<double, 3>>& pts) {
        double best = INF;
        for (const auto& q : pts) {
            const double dx = p[0] - q[0], dy = p[1] - q[1], dz = p[2] - q[2];
            best = std::min(best, dx * dx + dy * dy + dz * dz);
        }
        return std::sqrt(best);
    };

    Volume sdf(static_cast<const GridInfo&>(mask));
    for (int zz = 0; zz < nz; ++zz)
        for (int yy = 0; yy < ny; ++yy)
            for (int xx = 0; xx < nx; ++xx) {
                std::array<double, 3> p{xx * mask.spacing[0], yy * mask.spacing[1], zz * mask.spacing[2]};
                const double d = mask.at(xx, yy, zz) ? -nearest(p, bg) : nearest(p, fg);
                sdf.data[mask.index(xx, yy, zz)] = static_cast<float>(d);
            }
    return sdf;
}

}  // namespace cqa
