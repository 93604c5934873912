#pragma once

#include <vector>

#include "sgwls/image.hpp"
#include "sgwls/weights.hpp"

namespace sgwls {

/// Coordinate-list form of the full S x S smoothing matrix (S = M*N),
/// assembled over the complete (2r+1)^2 window. Desk-scale oracle only.
struct SparseSystem {
    int n = 0;       // S
    int rows = 0;    // M
    int cols = 0;    // N
    struct Entry {
        int row;
        int col;
        double value;
    };
    std::vector<Entry> entries;  // row-major order, one diagonal entry per pixel
};

/// Full 2D system: diagonal 1 + lambda * (window weight sum), off-diagonals
/// -lambda * w for every window neighbor, windows clipped at the border.
/// Rejects images larger than 65536 pixels.
SparseSystem assemble_full(const Image& guidance, double lambda, int r, const WeightParams& p);

/// Conjugate-gradient solve to relative residual 1e-10 (iteration cap 10*S),
/// one solve per channel of f. Throws on non-convergence, reporting the
/// final residual.
Image solve_full(const SparseSystem& sys, const Image& f);

/// Quadratic energy the full system minimizes: ||u - f||^2 plus
/// lambda * sum over unordered window pairs of w * (u_i - u_j)^2,
/// summed over channels.
double wls_energy(const Image& u, const Image& f, const Image& guidance, double lambda, int r,
                  const WeightParams& p);

}  // namespace sgwls
