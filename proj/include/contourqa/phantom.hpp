#pragma once

#include <cstdint>

#include "contourqa/grid.hpp"

namespace cqa {

// Synthetic CT + ground-truth organ generator: a randomly deformed superellipsoid with
// soft-tissue-like HU contrast, standing in for clinical scans so the full pipeline can
// train end to end.
struct PhantomConfig {
    std::array<int, 3> dims{80, 80, 80};
    std::array<double, 3> spacing{1.5, 1.5, 1.5};
    double radius_min_mm = 15.0;
    double radius_max_mm = 30.0;
    double exponent_min = 1.5;
    double exponent_max = 3.5;
    double deform_sigma_mm = 10.0;     // smoothing scale of the radial deformation field
    double deform_amplitude = 0.20;    // max fractional radius change
    double organ_hu_mean = 45.0, organ_hu_jitter = 10.0;
    double background_hu_mean = -30.0, background_hu_jitter = 15.0;
    double voxel_noise_hu = 20.0;
    int margin_voxels = 8;
};

struct Phantom {
    Volume ct;
    BinaryMask gt;
};

// Deterministic per seed. The gt mask is always a single 6-connected component; if the
// organ cannot fit with the configured margin the radii are shrunk (bounded retries)
// before failing with std::runtime_error.
Phantom generate_phantom(const PhantomConfig& cfg, uint64_t seed);

}  // namespace cqa
