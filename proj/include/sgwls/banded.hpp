#pragma once

#include <span>
#include <vector>

#include "sgwls/weights.hpp"

namespace sgwls {

/// Symmetric banded system A·u = f stored as compressed diagonals:
/// diag[k] = A(k,k), upper[k*r + t-1] = A(k, k+t), lower[k*r + t-1] = A(k+t, k)
/// for t = 1..r. Slots past the matrix edge stay zero.
struct BandedSystem {
    int n = 0;
    int r = 0;
    std::vector<double> diag;
    std::vector<double> upper;
    std::vector<double> lower;
    std::vector<double> rhs;

    double upper_at(int k, int t) const {
        return (t >= 1 && t <= r && k >= 0 && k + t < n) ? upper[static_cast<std::size_t>(k) * r + t - 1]
                                                         : 0.0;
    }
    double lower_at(int k, int t) const {
        return (t >= 1 && t <= r && k >= 0 && k + t < n) ? lower[static_cast<std::size_t>(k) * r + t - 1]
                                                         : 0.0;
    }
};

/// Factors of A = P·Q with P lower triangular (alpha on the diagonal, gamma
/// bands below) and Q unit upper triangular (beta bands above), stored in the
/// same compressed layout: gamma[k*r + t-1] = P(k+t, k), beta[k*r + t-1] = Q(k, k+t).
struct BandedFactors {
    int n = 0;
    int r = 0;
    std::vector<double> alpha;
    std::vector<double> gamma;
    std::vector<double> beta;

    double gamma_at(int k, int t) const {
        return (t >= 1 && t <= r && k >= 0 && k + t < n) ? gamma[static_cast<std::size_t>(k) * r + t - 1]
                                                         : 0.0;
    }
    double beta_at(int k, int t) const {
        return (t >= 1 && t <= r && k >= 0 && k + t < n) ? beta[static_cast<std::size_t>(k) * r + t - 1]
                                                         : 0.0;
    }
};

/// 1D WLS subsystem over a band: diagonal 1 + lambda * (sum of incident
/// weights), off-diagonals -lambda * w, right-hand side = band values.
/// The bandwidth is clipped to n-1 on short bands.
BandedSystem assemble_subsystem(std::span<const double> band_values, const WeightTable& weights,
                                double lambda, int r);

/// In-place-free band LU factorization; throws on a non-positive pivot,
/// naming the offending row.
BandedFactors rband_lu_factorize(const BandedSystem& sys);

/// Solves P·y = f.
std::vector<double> forward_substitute(const BandedFactors& f, std::span<const double> rhs);

/// Solves Q·u = y.
std::vector<double> backward_substitute(const BandedFactors& f, std::span<const double> y);

std::vector<double> solve_banded(const BandedSystem& sys);

/// Dense Gaussian elimination with partial pivoting; test/acceptance oracle,
/// capped at n <= 2000.
std::vector<double> dense_solve_oracle(const BandedSystem& sys);

}  // namespace sgwls
