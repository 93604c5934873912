#include "sgwls/smoother.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace sgwls {

namespace {

constexpr double kMaskFloor = 1e-8;

void run_workers(int jobs, int threads, const std::function<void(int)>& fn) {
    if (threads <= 1 || jobs <= 1) {
        for (int i = 0; i < jobs; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto work = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= jobs) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int count = std::min(threads, jobs);
    pool.reserve(count);
    for (int i = 0; i < count; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

struct BandSolution {
    Band band;
    std::vector<double> solved;  // channel-major: solved[c*s + p]
};

Image run_pass(const Image& src, const Image& guidance, const SmoothConfig& cfg, Axis axis) {
    const int extent = axis == Axis::Column ? src.width : src.height;
    const auto centers = band_centers(extent, cfg.r, cfg.tau);
    const int ch = src.channels;

    std::vector<BandSolution> slots(centers.size());
    run_workers(static_cast<int>(centers.size()), cfg.threads, [&](int ci) {
        Band band = band_layout(src.height, src.width, centers[ci], cfg.r, axis);
        const int s = band.size();
        const WeightTable weights = edge_weights_along_band(guidance, band, cfg.r, cfg.weight);

        std::vector<double> rhs(s);
        for (int p = 0; p < s; ++p) rhs[p] = src.at(band.coords[p].row, band.coords[p].col, 0);
        const BandedSystem sys = assemble_subsystem(rhs, weights, cfg.lambda, cfg.r);
        const BandedFactors factors = rband_lu_factorize(sys);

        BandSolution& slot = slots[ci];
        slot.solved.resize(static_cast<std::size_t>(ch) * s);
        for (int c = 0; c < ch; ++c) {
            if (c > 0)
                for (int p = 0; p < s; ++p) rhs[p] = src.at(band.coords[p].row, band.coords[p].col, c);
            const auto u = backward_substitute(factors, forward_substitute(factors, rhs));
            std::copy(u.begin(), u.end(), slot.solved.begin() + static_cast<std::size_t>(c) * s);
        }
        slot.band = std::move(band);
    });

    // Merge in center order regardless of which worker solved what, so the
    // accumulation sequence (and hence the rounding) is fixed.
    Image accum(src.width, src.height, ch, 0.0);
    Image counts(src.width, src.height, 1, 0.0);
    for (const BandSolution& slot : slots) {
        const int s = slot.band.size();
        for (int c = 0; c < ch; ++c)
            scatter_band(slot.band, std::span<const double>(slot.solved).subspan(
                                        static_cast<std::size_t>(c) * s, s),
                         accum, counts, c);
    }

    Image out(src.width, src.height, ch);
    for (int y = 0; y < src.height; ++y) {
        for (int x = 0; x < src.width; ++x) {
            const double count = counts.at(y, x);
            if (count <= 0.0) throw Error("smooth: pixel missed by every band (internal)");
            for (int c = 0; c < ch; ++c) out.at(y, x, c) = accum.at(y, x, c) / count;
        }
    }
    return out;
}

}  // namespace

void SmoothConfig::validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw Error("smooth: lambda must be finite and >= 0");
    if (r < 1) throw Error("smooth: r must be >= 1");
    if (tau < 1 || tau > 2 * r + 1)
        throw Error("smooth: tau must be in [1, 2r+1], got " + std::to_string(tau));
    if (iterations < 1) throw Error("smooth: iterations must be >= 1");
    if (threads < 1) throw Error("smooth: threads must be >= 1");
    weight.validate();
}

Image smooth(const Image& target, const Image& guidance, const SmoothConfig& cfg) {
    cfg.validate();
    if (target.empty()) throw Error("smooth: empty target");
    if (!target.same_size(guidance)) throw Error("smooth: target and guidance dimensions differ");

    Image cur = target;
    Axis axis = cfg.first_axis;
    for (int pass = 0; pass < cfg.iterations; ++pass) {
        cur = run_pass(cur, guidance, cfg, axis);
        axis = orthogonal(axis);
    }
    return cur;
}

Image interpolate_sparse(const SparseField& field, const Image& guidance, const SmoothConfig& cfg,
                         Image* undefined_mask) {
    if (field.mask.channels != 1) throw Error("interpolate_sparse: mask must be single-channel");
    if (!field.values.same_size(field.mask)) throw Error("interpolate_sparse: values/mask size mismatch");

    bool any = false;
    for (int y = 0; y < field.mask.height; ++y) {
        for (int x = 0; x < field.mask.width; ++x) {
            const double m = field.mask.at(y, x);
            if (m != 0.0 && m != 1.0) throw Error("interpolate_sparse: mask must be 0/1");
            if (m == 1.0) any = true;
            if (m == 0.0)
                for (int c = 0; c < field.values.channels; ++c)
                    if (field.values.at(y, x, c) != 0.0)
                        throw Error("interpolate_sparse: values nonzero outside mask");
        }
    }
    if (!any) throw Error("interpolate_sparse: empty mask");

    const Image num = smooth(field.values, guidance, cfg);
    const Image den = smooth(field.mask, guidance, cfg);

    Image out(num.width, num.height, num.channels);
    if (undefined_mask) *undefined_mask = Image(num.width, num.height, 1, 0.0);
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            const double d = den.at(y, x);
            if (d < kMaskFloor) {
                for (int c = 0; c < out.channels; ++c) out.at(y, x, c) = 0.0;
                if (undefined_mask) undefined_mask->at(y, x) = 1.0;
            } else {
                for (int c = 0; c < out.channels; ++c) out.at(y, x, c) = num.at(y, x, c) / d;
            }
        }
    }
    return out;
}

}  // namespace sgwls
