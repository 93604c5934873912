#include "sgwls/apps.hpp"

#include <algorithm>
#include <cmath>

namespace sgwls {

SmoothConfig enhance_preset() {
    SmoothConfig cfg;
    cfg.lambda = 900.0;
    cfg.r = 1;
    cfg.tau = 1;
    cfg.iterations = 4;
    cfg.weight.kind = WeightKind::Frac;
    cfg.weight.alpha_s = 1.2;
    cfg.weight.alpha_r = 1.2;
    cfg.weight.guidance_scale = 1.0;
    return cfg;
}

SmoothConfig tonemap_layer_preset(double lambda) {
    SmoothConfig cfg = enhance_preset();
    cfg.lambda = lambda;
    return cfg;
}

SmoothConfig upsample_preset(int factor) {
    SmoothConfig cfg;
    cfg.r = 4;
    cfg.tau = 4;
    cfg.iterations = 4;
    cfg.weight.kind = WeightKind::Exp;
    cfg.weight.sigma_s = 4.0;
    cfg.weight.sigma_r = 3.0;
    cfg.weight.guidance_scale = 255.0;
    switch (factor) {
        case 2: cfg.lambda = 100.0; break;
        case 4: cfg.lambda = 200.0; break;
        case 8: cfg.lambda = 400.0; break;
        default: throw Error("upsample_preset: published lambdas cover factors 2, 4 and 8");
    }
    return cfg;
}

SmoothConfig colorize_preset() {
    SmoothConfig cfg;
    cfg.lambda = 900.0;
    cfg.r = 4;
    cfg.tau = 2;
    cfg.iterations = 4;
    cfg.weight.kind = WeightKind::Exp;
    cfg.weight.sigma_s = 4.0;
    cfg.weight.sigma_r = 2.0;
    cfg.weight.guidance_scale = 255.0;
    return cfg;
}

Image detail_enhance(const Image& img, double boost, const SmoothConfig& cfg) {
    const Image base = smooth(img, img, cfg);
    Image out(img.width, img.height, img.channels);
    for (std::size_t i = 0; i < img.data.size(); ++i)
        out.data[i] = std::clamp(base.data[i] + boost * (img.data[i] - base.data[i]), 0.0, 1.0);
    return out;
}

Image tone_map(const Image& hdr, const ToneMapParams& params) {
    const Image lum = luminance(hdr);
    for (double v : lum.data)
        if (!(v > 0.0)) throw Error("tone_map: luminance must be strictly positive");

    Image log_lum(lum.width, lum.height, 1);
    for (std::size_t i = 0; i < lum.data.size(); ++i) log_lum.data[i] = std::log10(lum.data[i]);

    // Progressive coarsening; weights always come from the input log
    // luminance. detail_i = level_{i-1} - level_i, so the layers telescope.
    Image level = log_lum;
    std::array<Image, 3> details;
    for (int i = 0; i < 3; ++i) {
        SmoothConfig cfg = params.smoothing;
        cfg.lambda = params.lambdas[i];
        Image next = smooth(level, log_lum, cfg);
        details[i] = Image(level.width, level.height, 1);
        for (std::size_t k = 0; k < level.data.size(); ++k)
            details[i].data[k] = level.data[k] - next.data[k];
        level = std::move(next);
    }

    const auto [min_it, max_it] = std::minmax_element(log_lum.data.begin(), log_lum.data.end());
    const double source_range = *max_it - *min_it;
    const double gain = source_range > 0.0 ? params.target_log_range / source_range : 1.0;
    const double anchor = *std::max_element(level.data.begin(), level.data.end());

    Image out_log(level.width, level.height, 1);
    for (std::size_t k = 0; k < level.data.size(); ++k) {
        double v = anchor + (level.data[k] - anchor) * gain;
        for (int i = 0; i < 3; ++i) v += params.detail_weights[i] * details[i].data[k];
        out_log.data[k] = v;
    }

    Image out(hdr.width, hdr.height, hdr.channels);
    for (int y = 0; y < hdr.height; ++y) {
        for (int x = 0; x < hdr.width; ++x) {
            const double lout = std::pow(10.0, out_log.at(y, x));
            const double ratio = lout / lum.at(y, x);
            for (int c = 0; c < hdr.channels; ++c) out.at(y, x, c) = hdr.at(y, x, c) * ratio;
        }
    }
    return out;
}

Image depth_upsample(const Image& lowres_depth, const Image& guidance, int factor,
                     const SmoothConfig& cfg) {
    if (lowres_depth.channels != 1) throw Error("depth_upsample: depth must be single-channel");
    if (factor < 1) throw Error("depth_upsample: factor must be >= 1");
    if (guidance.width != lowres_depth.width * factor || guidance.height != lowres_depth.height * factor)
        throw Error("depth_upsample: guidance must be exactly factor times the depth size");

    SparseField field;
    field.values = Image(guidance.width, guidance.height, 1, 0.0);
    field.mask = Image(guidance.width, guidance.height, 1, 0.0);
    for (int y = 0; y < lowres_depth.height; ++y) {
        for (int x = 0; x < lowres_depth.width; ++x) {
            field.values.at(y * factor, x * factor) = lowres_depth.at(y, x);
            field.mask.at(y * factor, x * factor) = 1.0;
        }
    }
    return interpolate_sparse(field, luminance(guidance), cfg);
}

Image colorize(const Image& gray, const Image& scribbles, const Image& scribble_mask,
               const SmoothConfig& cfg) {
    if (gray.channels != 1) throw Error("colorize: gray image must be single-channel");
    if (scribbles.channels != 3) throw Error("colorize: scribbles must be 3-channel");
    if (!gray.same_size(scribbles) || !gray.same_size(scribble_mask))
        throw Error("colorize: image sizes differ");

    const Image yuv = rgb_to_yuv(scribbles);
    SparseField u_field, v_field;
    u_field.mask = scribble_mask;
    v_field.mask = scribble_mask;
    u_field.values = Image(gray.width, gray.height, 1, 0.0);
    v_field.values = Image(gray.width, gray.height, 1, 0.0);
    for (int y = 0; y < gray.height; ++y) {
        for (int x = 0; x < gray.width; ++x) {
            if (scribble_mask.at(y, x) == 1.0) {
                u_field.values.at(y, x) = yuv.at(y, x, 1);
                v_field.values.at(y, x) = yuv.at(y, x, 2);
            }
        }
    }

    const Image u = interpolate_sparse(u_field, gray, cfg);
    const Image v = interpolate_sparse(v_field, gray, cfg);
    return clamp01(yuv_to_rgb(merge_planes(gray, u, v)));
}

}  // namespace sgwls
