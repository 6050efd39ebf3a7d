#pragma once

#include "contourqa/grid.hpp"

namespace cqa {

// Signed Euclidean distance field of a binary mask, measured between voxel centers of
// opposite classes, in world mm (anisotropic spacing honored). Sign convention:
// negative strictly inside the mask, positive outside, so the level-0 surface sits
// between centers. d(v) = dist_to_nearest_fg(v) - dist_to_nearest_bg(v): a foreground
// voxel gets -dist_to_nearest_background and vice versa.
//
// Exact algorithm: per-axis lower-envelope passes on squared distances
// (Felzenszwalb-Huttenlocher), 64-bit accumulation, spacing applied before squaring.
// Throws std::invalid_argument("degenerate mask") when the mask is all-foreground or
// all-background.
Volume signed_distance_transform(const BinaryMask& mask);

// O(n^2) exhaustive oracle with the same contract. Guarded to masks of at most 64^3
// voxels total; throws std::invalid_argument beyond that.
Volume brute_force_sdt(const BinaryMask& mask);

}  // namespace cqa
