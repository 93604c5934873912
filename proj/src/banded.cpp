#include "sgwls/banded.hpp"

#include <algorithm>
#include <cmath>

namespace sgwls {

namespace {
// SPD inputs keep pivots well away from this; only misuse reaches it.
constexpr double kPivotFloor = 1e-300;
}

BandedSystem assemble_subsystem(std::span<const double> band_values, const WeightTable& weights,
                                double lambda, int r) {
    if (!(lambda >= 0.0)) throw Error("assemble_subsystem: lambda must be >= 0");
    const int n = static_cast<int>(band_values.size());
    if (n < 1) throw Error("assemble_subsystem: empty band");
    if (weights.n != n) throw Error("assemble_subsystem: weight table size mismatch");
    const int rb = std::min(r, n - 1);
    if (weights.r < rb) throw Error("assemble_subsystem: weight table narrower than bandwidth");

    BandedSystem sys;
    sys.n = n;
    sys.r = rb;
    sys.diag.assign(n, 0.0);
    sys.upper.assign(static_cast<std::size_t>(n) * rb, 0.0);
    sys.lower.assign(static_cast<std::size_t>(n) * rb, 0.0);
    sys.rhs.assign(band_values.begin(), band_values.end());

    for (int k = 0; k < n; ++k) {
        double incident = 0.0;
        for (int t = 1; t <= rb && k + t < n; ++t) {
            const double w = weights.between(k, t);
            incident += w;
            sys.upper[static_cast<std::size_t>(k) * rb + t - 1] = -lambda * w;
            sys.lower[static_cast<std::size_t>(k) * rb + t - 1] = -lambda * w;
        }
        for (int t = 1; t <= rb && k - t >= 0; ++t) incident += weights.between(k - t, t);
        sys.diag[k] = 1.0 + lambda * incident;
    }
    return sys;
}

BandedFactors rband_lu_factorize(const BandedSystem& sys) {
    const int n = sys.n;
    const int r = sys.r;
    if (n < 1) throw Error("rband_lu_factorize: empty system");

    BandedFactors f;
    f.n = n;
    f.r = r;
    f.alpha.assign(n, 0.0);
    f.gamma.assign(static_cast<std::size_t>(n) * r, 0.0);
    f.beta.assign(static_cast<std::size_t>(n) * r, 0.0);

    auto G = [&](int k, int t) -> double& { return f.gamma[static_cast<std::size_t>(k) * r + t - 1]; };
    auto B = [&](int k, int t) -> double& { return f.beta[static_cast<std::size_t>(k) * r + t - 1]; };

    // One sweep covers the leading block, the steady state and the tail: the
    // update sums truncate at min(k, r - t_offset) and offsets truncate at
    // the matrix edge. The outermost diagonal copies straight through.
    for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int t = 1; t <= std::min(k, r); ++t) acc += G(k - t, t) * B(k - t, t);
        const double pivot = sys.diag[k] - acc;
        if (!(pivot > kPivotFloor))
            throw Error("rband_lu_factorize: non-positive pivot at row " + std::to_string(k) +
                        " (input not SPD)");
        f.alpha[k] = pivot;

        const int imax = std::min(r - 1, n - 1 - k);
        for (int i = 1; i <= imax; ++i) {
            double gacc = 0.0, bacc = 0.0;
            for (int t = 1; t <= std::min(k, r - i); ++t) {
                gacc += G(k - t, i + t) * B(k - t, t);
                bacc += G(k - t, t) * B(k - t, i + t);
            }
            G(k, i) = sys.lower_at(k, i) - gacc;
            B(k, i) = (sys.upper_at(k, i) - bacc) / pivot;
        }
        if (r >= 1 && k + r < n) {
            G(k, r) = sys.lower_at(k, r);
            B(k, r) = sys.upper_at(k, r) / pivot;
        }
    }
    return f;
}

std::vector<double> forward_substitute(const BandedFactors& f, std::span<const double> rhs) {
    const int n = f.n;
    const int r = f.r;
    if (static_cast<int>(rhs.size()) != n) throw Error("forward_substitute: length mismatch");

    std::vector<double> y(n);
    for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int t = 1; t <= std::min(k, r); ++t)
            acc += f.gamma[static_cast<std::size_t>(k - t) * r + t - 1] * y[k - t];
        y[k] = (rhs[k] - acc) / f.alpha[k];
    }
    return y;
}

std::vector<double> backward_substitute(const BandedFactors& f, std::span<const double> y) {
    const int n = f.n;
    const int r = f.r;
    if (static_cast<int>(y.size()) != n) throw Error("backward_substitute: length mismatch");

    std::vector<double> u(n);
    for (int k = n - 1; k >= 0; --k) {
        double acc = 0.0;
        const int tmax = std::min(r, n - 1 - k);
        for (int t = 1; t <= tmax; ++t)
            acc += f.beta[static_cast<std::size_t>(k) * r + t - 1] * u[k + t];
        u[k] = y[k] - acc;
    }
    return u;
}

std::vector<double> solve_banded(const BandedSystem& sys) {
    const BandedFactors f = rband_lu_factorize(sys);
    return backward_substitute(f, forward_substitute(f, sys.rhs));
}

std::vector<double> dense_solve_oracle(const BandedSystem& sys) {
    const int n = sys.n;
    if (n > 2000) throw Error("dense_solve_oracle: n > 2000");

    std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<double> x(sys.rhs.begin(), sys.rhs.end());
    for (int k = 0; k < n; ++k) {
        a[static_cast<std::size_t>(k) * n + k] = sys.diag[k];
        for (int t = 1; t <= sys.r && k + t < n; ++t) {
            a[static_cast<std::size_t>(k) * n + k + t] = sys.upper_at(k, t);
            a[static_cast<std::size_t>(k + t) * n + k] = sys.lower_at(k, t);
        }
    }

    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int row = col + 1; row < n; ++row)
            if (std::abs(a[static_cast<std::size_t>(row) * n + col]) >
                std::abs(a[static_cast<std::size_t>(piv) * n + col]))
                piv = row;
        if (std::abs(a[static_cast<std::size_t>(piv) * n + col]) < kPivotFloor)
            throw Error("dense_solve_oracle: singular matrix");
        if (piv != col) {
            for (int j = 0; j < n; ++j)
                std::swap(a[static_cast<std::size_t>(piv) * n + j], a[static_cast<std::size_t>(col) * n + j]);
            std::swap(x[piv], x[col]);
        }
        const double d = a[static_cast<std::size_t>(col) * n + col];
        for (int row = col + 1; row < n; ++row) {
            const double m = a[static_cast<std::size_t>(row) * n + col] / d;
            if (m == 0.0) continue;
            for (int j = col; j < n; ++j)
                a[static_cast<std::size_t>(row) * n + j] -= m * a[static_cast<std::size_t>(col) * n + j];
            x[row] -= m * x[col];
        }
    }
    for (int row = n - 1; row >= 0; --row) {
        double acc = x[row];
        for (int j = row + 1; j < n; ++j) acc -= a[static_cast<std::size_t>(row) * n + j] * x[j];
        x[row] = acc / a[static_cast<std::size_t>(row) * n + row];
    }
    return x;
}

}  // namespace sgwls
