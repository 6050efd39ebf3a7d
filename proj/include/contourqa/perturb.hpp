#pragma once

#include <cstdint>

#include "contourqa/grid.hpp"

namespace cqa {

// Spatially-correlated noise configuration: i.i.d. standard normals convolved with a
// separable Gaussian (sigma in mm) and rescaled so the empirical standard deviation
// over all voxels equals target_std_mm exactly.
struct NoiseConfig {
    double kernel_sigma_mm = 7.5;
    double target_std_mm = 1.0;
    uint64_t seed = 0;
};

// Throws std::invalid_argument when sigma or target std are not positive.
void validate_noise_config(const NoiseConfig& cfg);

// Deterministic per (grid, cfg.seed). Per-axis sigma is kernel_sigma_mm/spacing voxels,
// kernel truncated at 4 sigma and normalized to unit sum, reflect padding at borders.
// Warns (stderr) when any grid axis is shorter than twice the kernel radius.
Volume structured_noise(const GridInfo& grid, const NoiseConfig& cfg);

// Voxel-wise sum. The output is generally no longer 1-Lipschitz. Grid metadata must
// match exactly; a mismatch names the differing field.
Volume perturb_sdf(const Volume& sdf, const Volume& noise);

}  // namespace cqa
