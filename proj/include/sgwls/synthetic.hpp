#pragma once

#include <cstdint>

#include "sgwls/image.hpp"

namespace sgwls::synthetic {

/// Piecewise-constant blocks overlaid with a 3x3-tiled ordered dither.
/// Every 3x3 window of the dither holds nine distinct levels 0.05 apart, and
/// block levels are drawn so that no cross-edge difference collides with a
/// dither difference; all guidance differences stay >= 0.02, which keeps
/// fractional weights (and the resulting system norms) bounded.
Image step_scene(int width, int height, std::uint64_t seed);

Image add_gaussian_noise(const Image& img, double sigma, std::uint64_t seed, bool clamp_01);

/// Linear ramp from lo to hi along x (or y when horizontal = false).
Image ramp(int width, int height, double lo, double hi, bool horizontal = true);

/// Piecewise-constant depth with a color guidance image whose regions align
/// with the depth edges; guidance carries a faint texture.
struct DepthScene {
    Image depth;         // ground truth, single channel in [0,1]
    Image guidance_rgb;  // same size, 3 channels
};
DepthScene depth_scene(int width, int height, std::uint64_t seed);

}  // namespace sgwls::synthetic
