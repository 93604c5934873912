#pragma once

#include <span>
#include <vector>

#include "sgwls/image.hpp"

namespace sgwls {

enum class Axis { Column, Row };

inline Axis orthogonal(Axis a) { return a == Axis::Column ? Axis::Row : Axis::Column; }

struct PixelCoord {
    int row = 0;
    int col = 0;
    bool operator==(const PixelCoord&) const = default;
};

/// A strip of 2r+1 adjacent columns (or rows) flattened into one sequence by
/// reversing every second cross-vector, so that positions close in the band
/// are also close in the image. `coords` maps each band position back to its
/// source pixel. On images narrower than 2r+1 the window is clipped to the
/// image.
struct Band {
    Axis axis = Axis::Column;
    int center = 0;
    std::vector<double> values;
    std::vector<PixelCoord> coords;

    int size() const { return static_cast<int>(coords.size()); }
};

/// Window centers for one directional sweep: r, r+tau, ... capped at
/// extent-1-r, with the last center forced to extent-1-r so border
/// columns/rows are always covered. Degenerate extents (< 2r+1) get a single
/// center with a fully clipped window.
std::vector<int> band_centers(int extent, int r, int tau);

/// Geometry of the band only; `values` is left empty.
Band band_layout(int height, int width, int center, int r, Axis axis);

/// Serpentine extraction from a single-channel image.
Band extract_band(const Image& img, int center, int r, Axis axis);

/// Adds `solved` into `accum` at the band's source coordinates and, when
/// writing channel 0, increments `counts` once per position.
void scatter_band(const Band& band, std::span<const double> solved, Image& accum, Image& counts,
                  int channel = 0);

}  // namespace sgwls
