#pragma once

#include <array>

#include "sgwls/smoother.hpp"

namespace sgwls {

// Published parameter presets for the four pipelines. Every field can be
// overridden after construction.
SmoothConfig enhance_preset();                 // frac, as=ar=1.2, lambda=900, r=1, tau=1
SmoothConfig tonemap_layer_preset(double lambda);  // frac, as=ar=1.2, r=1, tau=1
SmoothConfig upsample_preset(int factor);      // exp, ss=4, sr=3, r=4, tau=4, lambda 100/200/400
SmoothConfig colorize_preset();                // exp, ss=4, sr=2, r=4, tau=2, lambda=900

/// Base/detail split with the detail layer scaled by `boost`:
/// clamp(base + boost * (img - base)). Guidance is the image itself.
Image detail_enhance(const Image& img, double boost, const SmoothConfig& cfg);

struct ToneMapParams {
    std::array<double, 3> lambdas{5.0, 40.0, 320.0};
    std::array<double, 3> detail_weights{1.0, 1.0, 1.0};
    /// Output base range in log10 decades. The base layer is linearly mapped
    /// in the log domain so the source log-luminance range shrinks to this,
    /// anchored at the brightest base value; equal source and target ranges
    /// reproduce the input exactly.
    double target_log_range = 2.0;
    SmoothConfig smoothing = tonemap_layer_preset(5.0);  // lambda set per stage
};

/// Multi-scale decomposition of log10 luminance into a base and three detail
/// layers, linear base compression, recombination, and chroma reattachment
/// by luminance ratio. Output is not clamped; write through an LDR codec to
/// quantize for display. Luminance must be strictly positive.
Image tone_map(const Image& hdr, const ToneMapParams& params);

/// Projects the low-resolution depth onto the high-resolution grid at
/// (y*factor, x*factor) and runs guided sparse interpolation. Guidance is
/// reduced to its luma plane for the range weights.
Image depth_upsample(const Image& lowres_depth, const Image& guidance, int factor,
                     const SmoothConfig& cfg);

/// Propagates the U and V chroma of the scribbles (where scribble_mask is 1)
/// across the gray image, then recombines with Y = gray.
Image colorize(const Image& gray, const Image& scribbles, const Image& scribble_mask,
               const SmoothConfig& cfg);

}  // namespace sgwls
