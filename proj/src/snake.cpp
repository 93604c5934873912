#include "sgwls/snake.hpp"

#include <algorithm>

namespace sgwls {

std::vector<int> band_centers(int extent, int r, int tau) {
    if (extent < 1) throw Error("band_centers: extent must be positive");
    if (r < 0) throw Error("band_centers: negative radius");
    if (tau < 1) throw Error("band_centers: stride must be >= 1");

    if (extent < 2 * r + 1) return {(extent - 1) / 2};

    std::vector<int> centers;
    const int last = extent - 1 - r;
    for (int c = r; c <= last; c += tau) centers.push_back(c);
    if (centers.back() != last) centers.push_back(last);
    return centers;
}

Band band_layout(int height, int width, int center, int r, Axis axis) {
    if (height < 1 || width < 1) throw Error("band_layout: empty image");
    if (r < 0) throw Error("band_layout: negative radius");
    const int extent = axis == Axis::Column ? width : height;
    if (center < 0 || center >= extent) throw Error("band_layout: center outside image");

    const int lo = std::max(0, center - r);
    const int hi = std::min(extent - 1, center + r);

    Band band;
    band.axis = axis;
    band.center = center;
    const int sweep = axis == Axis::Column ? height : width;
    band.coords.reserve(static_cast<std::size_t>(hi - lo + 1) * sweep);

    // Every second cross-vector runs backwards, so consecutive band positions
    // are always adjacent pixels.
    for (int i = 0; i < sweep; ++i) {
        const bool reversed = (i % 2) != 0;
        for (int j = 0; j <= hi - lo; ++j) {
            const int k = reversed ? hi - j : lo + j;
            if (axis == Axis::Column)
                band.coords.push_back({i, k});
            else
                band.coords.push_back({k, i});
        }
    }
    return band;
}

Band extract_band(const Image& img, int center, int r, Axis axis) {
    if (img.channels != 1) throw Error("extract_band: single-channel image required");
    Band band = band_layout(img.height, img.width, center, r, axis);
    band.values.resize(band.coords.size());
    for (std::size_t i = 0; i < band.coords.size(); ++i)
        band.values[i] = img.at(band.coords[i].row, band.coords[i].col);
    return band;
}

void scatter_band(const Band& band, std::span<const double> solved, Image& accum, Image& counts,
                  int channel) {
    if (static_cast<int>(solved.size()) != band.size())
        throw Error("scatter_band: solved length does not match band length");
    if (channel < 0 || channel >= accum.channels) throw Error("scatter_band: bad channel");
    for (std::size_t i = 0; i < band.coords.size(); ++i) {
        const auto [row, col] = band.coords[i];
        if (row < 0 || row >= accum.height || col < 0 || col >= accum.width)
            throw Error("scatter_band: coordinate outside raster");
        accum.at(row, col, channel) += solved[i];
        if (channel == 0) counts.at(row, col) += 1.0;
    }
}

}  // namespace sgwls
