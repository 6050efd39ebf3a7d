#pragma once

#include <string>

#include "contourqa/grid.hpp"

namespace cqa {

// NIfTI-1 single-file (.nii), uncompressed, little-endian, axis-aligned affine only
// (diagonal scaling + translation). Supported datatypes: 2 (uint8), 4 (int16),
// 16 (float32). Anything else is rejected with a message naming the header field.

Volume load_nifti_volume(const std::string& path);
BinaryMask load_nifti_mask(const std::string& path);  // nonzero -> foreground

// Volume saves as float32, BinaryMask as uint8. Written files read back bit-identically.
void save_nifti(const Volume& vol, const std::string& path);
void save_nifti(const BinaryMask& mask, const std::string& path);

}  // namespace cqa
