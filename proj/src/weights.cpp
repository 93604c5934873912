#include "sgwls/weights.hpp"

#include <cmath>

namespace sgwls {

void WeightParams::validate() const {
    if (!(epsilon > 0.0)) throw Error("weights: epsilon must be > 0");
    if (kind == WeightKind::Exp && (!(sigma_s > 0.0) || !(sigma_r > 0.0)))
        throw Error("weights: sigma_s and sigma_r must be > 0 for exponential weights");
    if (!(guidance_scale > 0.0)) throw Error("weights: guidance_scale must be > 0");
}

double frac_weight(double spatial_dist, double range_diff, const WeightParams& p) {
    return 1.0 / (std::pow(spatial_dist, p.alpha_s) + p.epsilon) *
           1.0 / (std::pow(range_diff, p.alpha_r) + p.epsilon);
}

double exp_weight(double spatial_dist, double range_diff, const WeightParams& p) {
    return std::exp(-(spatial_dist * spatial_dist) / (2.0 * p.sigma_s * p.sigma_s)) *
           std::exp(-(range_diff * range_diff) / (2.0 * p.sigma_r * p.sigma_r));
}

double guidance_weight(double spatial_dist, double range_diff, const WeightParams& p) {
    return p.kind == WeightKind::Frac ? frac_weight(spatial_dist, range_diff, p)
                                      : exp_weight(spatial_dist, range_diff, p);
}

WeightTable edge_weights_along_band(const Image& guidance, const Band& band, int r,
                                    const WeightParams& p) {
    p.validate();
    if (band.coords.empty()) throw Error("edge_weights_along_band: empty band");
    if (r < 0) throw Error("edge_weights_along_band: negative radius");

    const int n = band.size();
    WeightTable table;
    table.n = n;
    table.r = r;
    table.w.assign(static_cast<std::size_t>(n) * r, 0.0);

    // Band positions at distance <= 2r+1 are within the original window, so
    // spatial offsets take few distinct values; memoize the spatial kernel on
    // the squared distance.
    std::vector<double> spatial_lut(static_cast<std::size_t>(2 * (2 * r + 1) * (2 * r + 1)) + 1, -1.0);
    const int ch = guidance.channels;

    for (int k = 0; k < n; ++k) {
        const auto [row_k, col_k] = band.coords[k];
        const int tmax = std::min(r, n - 1 - k);
        for (int t = 1; t <= tmax; ++t) {
            const auto [row_j, col_j] = band.coords[k + t];
            const int dr = row_k - row_j, dc = col_k - col_j;
            const int d2 = dr * dr + dc * dc;

            double range2 = 0.0;
            for (int c = 0; c < ch; ++c) {
                const double dg = guidance.at(row_k, col_k, c) - guidance.at(row_j, col_j, c);
                range2 += dg * dg;
            }
            const double range_diff = std::sqrt(range2) * p.guidance_scale;

            double weight;
            if (p.kind == WeightKind::Exp) {
                double& s = spatial_lut[d2];
                if (s < 0.0) s = std::exp(-d2 / (2.0 * p.sigma_s * p.sigma_s));
                weight = s * std::exp(-(range_diff * range_diff) / (2.0 * p.sigma_r * p.sigma_r));
            } else {
                double& s = spatial_lut[d2];
                if (s < 0.0) s = 1.0 / (std::pow(std::sqrt(static_cast<double>(d2)), p.alpha_s) + p.epsilon);
                weight = s / (std::pow(range_diff, p.alpha_r) + p.epsilon);
            }
            table.w[static_cast<std::size_t>(k) * r + t - 1] = weight;
        }
    }
    return table;
}

}  // namespace sgwls
