#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sgwls/error.hpp"

namespace sgwls {

/// Row-major, channel-interleaved raster of double samples.
/// LDR content uses the nominal range [0,1]; HDR content may exceed it.
struct Image {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<double> data;

    Image() = default;
    Image(int w, int h, int c, double fill = 0.0);

    double& at(int y, int x, int c = 0) {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    double at(int y, int x, int c = 0) const {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }

    bool same_size(const Image& o) const { return width == o.width && height == o.height; }
    bool empty() const { return data.empty(); }
    std::size_t sample_count() const { return data.size(); }

    Image plane(int c) const;
    bool all_finite() const;
};

/// Reads PGM (P2/P5), PPM (P3/P6) or PFM (Pf/PF). Integer formats are scaled
/// to [0,1]; PFM samples are kept as raw floats. Decode failures report the
/// byte offset of the problem.
Image read_image(const std::string& path);

/// Writes by extension: .pgm (P5, 1 channel), .ppm (P6, 3 channels),
/// .pfm (Pf/PF). LDR writers clamp to [0,1] and quantize round-half-up to
/// maxval 255.
void write_image(const Image& img, const std::string& path);

// BT.601 full-range; U and V are centered at zero.
Image rgb_to_yuv(const Image& img);
Image yuv_to_rgb(const Image& img);

/// BT.601 luma for 3-channel input, copy for 1-channel.
Image luminance(const Image& img);

Image merge_planes(const Image& a, const Image& b, const Image& c);
Image transpose(const Image& img);
Image clamp01(const Image& img);

}  // namespace sgwls
