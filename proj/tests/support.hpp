// Shared helpers for the test suites: independent reference algorithms
// (Thomas factorization, dense elimination), random system generators and
// small utilities. Everything here is deliberately written from scratch so
// the library is checked against a second implementation path.
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "sgwls/banded.hpp"
#include "sgwls/image.hpp"
#include "sgwls/wls_reference.hpp"

namespace testsupport {

// --------------------------------------------------------------- numerics

inline double rel_linf(const std::vector<double>& got, const std::vector<double>& want) {
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i) {
        diff = std::max(diff, std::abs(got[i] - want[i]));
        scale = std::max(scale, std::abs(want[i]));
    }
    return diff / std::max(scale, 1e-300);
}

inline double max_abs_diff(const sgwls::Image& a, const sgwls::Image& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i)
        worst = std::max(worst, std::abs(a.data[i] - b.data[i]));
    return worst;
}

// Classic Thomas algorithm on a tridiagonal system, kept separate from the
// banded module on purpose.
struct ThomasFactors {
    std::vector<double> alpha, beta, gamma;
};

inline ThomasFactors thomas_factorize(const sgwls::BandedSystem& sys) {
    const int n = sys.n;
    ThomasFactors f;
    f.alpha.resize(n);
    f.beta.assign(std::max(0, n - 1), 0.0);
    f.gamma.assign(std::max(0, n - 1), 0.0);
    f.alpha[0] = sys.diag[0];
    for (int k = 0; k + 1 < n; ++k) {
        f.gamma[k] = sys.lower_at(k, 1);
        f.beta[k] = sys.upper_at(k, 1) / f.alpha[k];
        f.alpha[k + 1] = sys.diag[k + 1] - f.gamma[k] * f.beta[k];
    }
    return f;
}

inline std::vector<double> thomas_solve(const sgwls::BandedSystem& sys) {
    const ThomasFactors f = thomas_factorize(sys);
    const int n = sys.n;
    std::vector<double> y(n), u(n);
    y[0] = sys.rhs[0] / f.alpha[0];
    for (int k = 1; k < n; ++k) y[k] = (sys.rhs[k] - f.gamma[k - 1] * y[k - 1]) / f.alpha[k];
    u[n - 1] = y[n - 1];
    for (int k = n - 2; k >= 0; --k) u[k] = y[k] - f.beta[k] * u[k + 1];
    return u;
}

// Dense partial-pivoting elimination on a row-major matrix.
inline std::vector<double> dense_solve(std::vector<double> a, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int row = col + 1; row < n; ++row)
            if (std::abs(a[row * static_cast<std::size_t>(n) + col]) >
                std::abs(a[piv * static_cast<std::size_t>(n) + col]))
                piv = row;
        if (piv != col) {
            for (int j = 0; j < n; ++j)
                std::swap(a[piv * static_cast<std::size_t>(n) + j], a[col * static_cast<std::size_t>(n) + j]);
            std::swap(b[piv], b[col]);
        }
        const double d = a[col * static_cast<std::size_t>(n) + col];
        for (int row = col + 1; row < n; ++row) {
            const double m = a[row * static_cast<std::size_t>(n) + col] / d;
            if (m == 0.0) continue;
            for (int j = col; j < n; ++j)
                a[row * static_cast<std::size_t>(n) + j] -= m * a[col * static_cast<std::size_t>(n) + j];
            b[row] -= m * b[col];
        }
    }
    for (int row = n - 1; row >= 0; --row) {
        double acc = b[row];
        for (int j = row + 1; j < n; ++j) acc -= a[row * static_cast<std::size_t>(n) + j] * b[j];
        b[row] = acc / a[row * static_cast<std::size_t>(n) + row];
    }
    return b;
}

inline std::vector<double> sparse_to_dense(const sgwls::SparseSystem& sys) {
    std::vector<double> a(static_cast<std::size_t>(sys.n) * sys.n, 0.0);
    for (const auto& e : sys.entries) a[static_cast<std::size_t>(e.row) * sys.n + e.col] += e.value;
    return a;
}

// Dense solve of the full 2D system; independent oracle for solve_full and
// for the 1D-exactness checks.
inline sgwls::Image dense_solve_full(const sgwls::SparseSystem& sys, const sgwls::Image& f) {
    sgwls::Image out(f.width, f.height, f.channels);
    const std::vector<double> dense = sparse_to_dense(sys);
    std::vector<double> b(sys.n);
    for (int c = 0; c < f.channels; ++c) {
        for (int y = 0; y < f.height; ++y)
            for (int x = 0; x < f.width; ++x) b[y * f.width + x] = f.at(y, x, c);
        const std::vector<double> sol = dense_solve(dense, b);
        for (int y = 0; y < f.height; ++y)
            for (int x = 0; x < f.width; ++x) out.at(y, x, c) = sol[y * f.width + x];
    }
    return out;
}

// ------------------------------------------------------------- generators

inline sgwls::BandedSystem random_spd_banded(std::mt19937_64& rng, int n, int r) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    sgwls::BandedSystem sys;
    sys.n = n;
    sys.r = std::min(r, n - 1);
    sys.diag.assign(n, 0.0);
    sys.upper.assign(static_cast<std::size_t>(n) * sys.r, 0.0);
    sys.lower.assign(static_cast<std::size_t>(n) * sys.r, 0.0);
    sys.rhs.resize(n);
    for (int k = 0; k < n; ++k) {
        for (int t = 1; t <= sys.r && k + t < n; ++t) {
            const double w = -unit(rng);
            sys.upper[static_cast<std::size_t>(k) * sys.r + t - 1] = w;
            sys.lower[static_cast<std::size_t>(k) * sys.r + t - 1] = w;
        }
        sys.rhs[k] = 2.0 * unit(rng) - 1.0;
    }
    for (int k = 0; k < n; ++k) {
        double row = 0.0;
        for (int t = 1; t <= sys.r; ++t)
            row += std::abs(sys.upper_at(k, t)) + std::abs(sys.lower_at(k - t, t));
        sys.diag[k] = row + 0.1 + unit(rng);
    }
    return sys;
}

inline sgwls::Image random_image(std::mt19937_64& rng, int w, int h, int c = 1, double lo = 0.0,
                                 double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    sgwls::Image img(w, h, c);
    for (double& v : img.data) v = dist(rng);
    return img;
}

// P * Q reconstruction error, band by band (P*Q shares the bandwidth).
inline double reconstruction_error(const sgwls::BandedSystem& sys, const sgwls::BandedFactors& f) {
    double num = 0.0, den = 0.0;
    auto p_at = [&](int row, int col) {
        return row == col ? f.alpha[row] : f.gamma_at(col, row - col);
    };
    auto q_at = [&](int row, int col) { return row == col ? 1.0 : f.beta_at(row, col - row); };
    for (int i = 0; i < sys.n; ++i) {
        for (int j = std::max(0, i - sys.r); j <= std::min(sys.n - 1, i + sys.r); ++j) {
            double pq = 0.0;
            for (int k = std::max(0, std::max(i, j) - sys.r); k <= std::min(i, j); ++k)
                pq += p_at(i, k) * q_at(k, j);
            const double a = i == j ? sys.diag[i]
                                    : (j > i ? sys.upper_at(i, j - i) : sys.lower_at(j, i - j));
            num += (pq - a) * (pq - a);
            den += a * a;
        }
    }
    return std::sqrt(num / den);
}

// ------------------------------------------------------------------ files

struct TempDir {
    std::filesystem::path path;

    TempDir() {
        static std::atomic<unsigned> counter{0};
        path = std::filesystem::temp_directory_path() /
               ("sgwls_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void spit(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace testsupport
