#pragma once

#include <vector>

#include "sgwls/image.hpp"
#include "sgwls/snake.hpp"

namespace sgwls {

enum class WeightKind { Frac, Exp };

/// Knobs of the two guidance-weight kernels. Spatial distances are Euclidean
/// distances between original 2D pixel coordinates.
struct WeightParams {
    WeightKind kind = WeightKind::Frac;
    double alpha_s = 1.2;
    double alpha_r = 1.2;
    double sigma_s = 4.0;
    double sigma_r = 3.0;
    double epsilon = 1e-4;
    /// Guidance sample differences are multiplied by this before the range
    /// kernel. 255 makes sigma_r/alpha_r values stated for 8-bit data apply
    /// to [0,1] guidance; fractional weights conventionally use 1.
    double guidance_scale = 1.0;

    void validate() const;
};

/// 1/(|i-j|^as + eps) * 1/(|Gi-Gj|^ar + eps); always finite and positive.
double frac_weight(double spatial_dist, double range_diff, const WeightParams& p);

/// exp(-|i-j|^2 / 2ss^2) * exp(-|Gi-Gj|^2 / 2sr^2); in (0, 1].
double exp_weight(double spatial_dist, double range_diff, const WeightParams& p);

double guidance_weight(double spatial_dist, double range_diff, const WeightParams& p);

/// Pairwise weights between band positions k and k+t for t = 1..r.
struct WeightTable {
    int n = 0;
    int r = 0;
    std::vector<double> w;  // w[k*r + t - 1]; zero where k+t >= n

    double between(int k, int t) const {
        return (k >= 0 && t >= 1 && t <= r && k + t < n) ? w[static_cast<std::size_t>(k) * r + t - 1]
                                                         : 0.0;
    }
};

/// Weights along a band. Range differences are the L2 norm of the guidance
/// channel difference (times guidance_scale); spatial distances come from
/// the band's original 2D coordinates.
WeightTable edge_weights_along_band(const Image& guidance, const Band& band, int r,
                                    const WeightParams& p);

}  // namespace sgwls
