#include "sgwls/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

namespace sgwls::synthetic {

namespace {

constexpr double kDitherAmp = 0.4;
constexpr double kDitherStep = kDitherAmp / 8.0;  // 0.05
constexpr std::array<std::array<int, 3>, 3> kDitherTile = {{{0, 6, 3}, {7, 4, 1}, {2, 8, 5}}};

double dither_at(int y, int x) {
    return (kDitherTile[y % 3][x % 3] / 8.0 - 0.5) * kDitherAmp;
}

// Reject level pairs whose difference lands within 0.02 of any multiple of
// the dither step, so cross-edge guidance differences cannot collapse.
bool levels_ok(const std::array<double, 4>& levels) {
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            const double d = levels[i] - levels[j];
            for (int m = -8; m <= 8; ++m)
                if (std::abs(d + m * kDitherStep) < 0.02) return false;
        }
    }
    return true;
}

}  // namespace

Image step_scene(int width, int height, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> level_dist(0.275, 0.725);
    std::uniform_real_distribution<double> split_dist(0.35, 0.65);

    std::array<double, 4> levels{};
    do {
        for (double& l : levels) l = level_dist(rng);
    } while (!levels_ok(levels));

    const int sx = static_cast<int>(split_dist(rng) * width);
    const int sy = static_cast<int>(split_dist(rng) * height);

    Image img(width, height, 1);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const int quad = (y < sy ? 0 : 2) + (x < sx ? 0 : 1);
            img.at(y, x) = levels[quad] + dither_at(y, x);
        }
    }
    return img;
}

Image add_gaussian_noise(const Image& img, double sigma, std::uint64_t seed, bool clamp_01) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    Image out = img;
    for (double& v : out.data) {
        v += noise(rng);
        if (clamp_01) v = std::clamp(v, 0.0, 1.0);
    }
    return out;
}

Image ramp(int width, int height, double lo, double hi, bool horizontal) {
    Image img(width, height, 1);
    const int extent = horizontal ? width : height;
    const double step = extent > 1 ? (hi - lo) / (extent - 1) : 0.0;
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) img.at(y, x) = lo + step * (horizontal ? x : y);
    return img;
}

DepthScene depth_scene(int width, int height, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // Base plane plus a few axis-aligned plateaus.
    struct Rect {
        int x0, y0, x1, y1;
        double depth;
        double gray;
    };
    const int count = 3;
    std::vector<Rect> rects;
    std::array<double, 4> depths{};
    std::array<double, 4> grays{};
    auto separated = [](const std::array<double, 4>& v, int upto, double gap) {
        for (int i = 0; i <= upto; ++i)
            for (int j = i + 1; j <= upto; ++j)
                if (std::abs(v[i] - v[j]) < gap) return false;
        return true;
    };
    do {
        for (double& d : depths) d = 0.15 + 0.7 * unit(rng);
    } while (!separated(depths, count, 0.1));
    do {
        for (double& g : grays) g = 0.15 + 0.7 * unit(rng);
    } while (!separated(grays, count, 0.15));

    for (int i = 0; i < count; ++i) {
        const int w = static_cast<int>((0.2 + 0.3 * unit(rng)) * width);
        const int h = static_cast<int>((0.2 + 0.3 * unit(rng)) * height);
        const int x0 = static_cast<int>(unit(rng) * (width - w));
        const int y0 = static_cast<int>(unit(rng) * (height - h));
        rects.push_back({x0, y0, x0 + w, y0 + h, depths[i + 1], grays[i + 1]});
    }

    DepthScene scene;
    scene.depth = Image(width, height, 1, depths[0]);
    Image gray(width, height, 1, grays[0]);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            for (const Rect& r : rects) {
                if (x >= r.x0 && x < r.x1 && y >= r.y0 && y < r.y1) {
                    scene.depth.at(y, x) = r.depth;
                    gray.at(y, x) = r.gray;
                }
            }
        }
    }

    // Faint tiled texture (about 2 of 255) keeps the guidance non-constant
    // without breaking the within-region range weights.
    scene.guidance_rgb = Image(width, height, 3);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double g = gray.at(y, x) + 0.02 * (dither_at(y, x) / kDitherAmp);
            scene.guidance_rgb.at(y, x, 0) = g;
            scene.guidance_rgb.at(y, x, 1) = g;
            scene.guidance_rgb.at(y, x, 2) = g;
        }
    }
    return scene;
}

}  // namespace sgwls::synthetic
