#pragma once

#include "sgwls/banded.hpp"
#include "sgwls/snake.hpp"
#include "sgwls/weights.hpp"

namespace sgwls {

/// Parameters of one smoothing run. `iterations` counts total directional
/// passes; axes alternate starting from `first_axis`, so iterations = 4 runs
/// column, row, column, row.
struct SmoothConfig {
    double lambda = 900.0;
    int r = 1;
    int tau = 1;
    int iterations = 4;
    WeightParams weight{};
    Axis first_axis = Axis::Column;
    /// Worker count for the per-pass band solves. Output is bit-identical
    /// for any value: solved bands are merged sequentially in center order.
    int threads = 1;

    void validate() const;
};

/// Edge-preserving smoothing of `target` under guidance weights from
/// `guidance` (held fixed across passes). Multichannel targets share one
/// factorization per band. Images must have equal dimensions; channel
/// counts may differ.
Image smooth(const Image& target, const Image& guidance, const SmoothConfig& cfg);

/// Sparse samples with a 0/1 index map marking where values are defined.
struct SparseField {
    Image values;
    Image mask;
};

/// Guided interpolation: smooth(values) / smooth(mask) elementwise. Where
/// the smoothed mask falls below an internal floor the output is 0; if
/// `undefined_mask` is given it is filled with 1 at such pixels.
Image interpolate_sparse(const SparseField& field, const Image& guidance, const SmoothConfig& cfg,
                         Image* undefined_mask = nullptr);

}  // namespace sgwls
