// SPDX-License-Identifier: Apache-2.0
//
// Artifact emission: CSV fields (17 significant digits), ASCII PGM heatmaps
// and masks, and atomic file writes (temp + rename).
//
// CSV field rows follow grid node order (row-major, x fastest):
//   x[,y],re,im            (full grid; boundary rows carry the Dirichlet data)
//   x[,y],re,im,abs        (constraint field; masked nodes only)
// PGM images are P2, maxval 255, one image row per mask row with the top row
// at the maximum y.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "freqcover/completeness.hpp"
#include "freqcover/functional.hpp"
#include "freqcover/grid.hpp"
#include "freqcover/solver.hpp"

namespace freqcover {

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// %.17g formatting; round-trips doubles exactly.
std::string format_double(double v);

std::string field_csv(const Grid& grid, const ComplexField& field);
std::string constraint_csv(const Grid& grid, const ConstraintField& field);

// Heatmap pixel: 255 * clamp(|theta| / scale, 0, 1), rounded half up; a zero
// scale renders black.
std::string heatmap_pgm(const ConstraintField& field);

// Mask image over the same box: 255 for members, 0 elsewhere.
std::string mask_pgm(const InnerMask& mask, const std::vector<std::uint32_t>& nodes);

// Writes to `path` atomically (unique temp file in the same directory, then
// rename).  Creates parent directories.  Throws IoError on failure.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace freqcover
