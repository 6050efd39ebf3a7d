#include "contourqa/perturb.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>
#include <vector>

#include "contourqa/rng.hpp"

namespace cqa {

namespace {

// Half-sample symmetric reflection: ..., 1, 0 | 0, 1, ..., n-1 | n-1, n-2, ...
int reflect_index(int i, int n) {
    const int period = 2 * n;
    i %= period;
    if (i < 0) i += period;
    return (i < n) ? i : period - 1 - i;
}

std::vector<double> gaussian_kernel(double sigma_vox) {
    const int radius = std::max(1, static_cast<int>(std::ceil(4.0 * sigma_vox)));
    std::vector<double> k(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double w = std::exp(-0.5 * (i * i) / (sigma_vox * sigma_vox));
        k[i + radius] = w;
        sum += w;
    }
    for (double& w : k) w /= sum;
    return k;
}

void convolve_axis(std::vector<double>& data, const GridInfo& g, int axis, const std::vector<double>& kernel) {
    const int radius = static_cast<int>(kernel.size() / 2);
    const int n = g.dims[axis];
    std::vector<double> line(n), out(n);
    const int nx = g.dims[0], ny = g.dims[1], nz = g.dims[2];

    auto run_line = [&](auto index_of) {
        for (int i = 0; i < n; ++i) line[i] = data[index_of(i)];
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int t = -radius; t <= radius; ++t) acc += kernel[t + radius] * line[reflect_index(i + t, n)];
            out[i] = acc;
        }
        for (int i = 0; i < n; ++i) data[index_of(i)] = out[i];
    };

    if (axis == 0) {
        for (int z = 0; z < nz; ++z)
            for (int y = 0; y < ny; ++y) run_line([&](int i) { return g.index(i, y, z); });
    } else if (axis == 1) {
        for (int z = 0; z < nz; ++z)
            for (int x = 0; x < nx; ++x) run_line([&](int i) { return g.index(x, i, z); });
    } else {
        for (int y = 0; y < ny; ++y)
            for (int x = 0; x < nx; ++x) run_line([&](int i) { return g.index(x, y, i); });
    }
}

}  // namespace

void validate_noise_config(const NoiseConfig& cfg) {
    if (!(cfg.kernel_sigma_mm > 0.0)) throw std::invalid_argument("noise: kernel_sigma_mm must be > 0");
    if (!(cfg.target_std_mm > 0.0)) throw std::invalid_argument("noise: target_std_mm must be > 0");
}

Volume structured_noise(const GridInfo& grid, const NoiseConfig& cfg) {
    validate_noise_config(cfg);
    validate_grid(grid);
    const size_t n = grid.voxel_count();
    if (n == 0) throw std::invalid_argument("noise: zero-volume grid");

    for (int a = 0; a < 3; ++a) {
        const double sigma_vox = cfg.kernel_sigma_mm / grid.spacing[a];
        const int radius = std::max(1, static_cast<int>(std::ceil(4.0 * sigma_vox)));
        if (grid.dims[a] < 2 * radius)
            std::cerr << "warning: noise: grid axis " << a << " (" << grid.dims[a]
                      << " voxels) shorter than twice the kernel radius (" << radius << ")\n";
    }

    std::vector<double> field(n);
    Rng rng(cfg.seed);
    for (size_t i = 0; i < n; ++i) field[i] = rng.next_normal();

    for (int a = 0; a < 3; ++a) convolve_axis(field, grid, a, gaussian_kernel(cfg.kernel_sigma_mm / grid.spacing[a]));

    // Exact rescale of the empirical (population, mean-centered) std to the target.
    double mean = 0.0;
    for (double v : field) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : field) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    const double scale = cfg.target_std_mm / std::sqrt(var);

    Volume out(grid);
    for (size_t i = 0; i < n; ++i) out.data[i] = static_cast<float>(field[i] * scale);
    return out;
}

Volume perturb_sdf(const Volume& sdf, const Volume& noise) {
    if (sdf.dims != noise.dims) throw std::invalid_argument("perturb_sdf: grid mismatch in dims");
    if (sdf.spacing != noise.spacing) throw std::invalid_argument("perturb_sdf: grid mismatch in spacing");
    if (sdf.origin != noise.origin) throw std::invalid_argument("perturb_sdf: grid mismatch in origin");

    Volume out(static_cast<const GridInfo&>(sdf));
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] = sdf.data[i] + noise.data[i];
    return out;
}

}  // namespace cqa
