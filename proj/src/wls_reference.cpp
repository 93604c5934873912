#include "sgwls/wls_reference.hpp"

#include <cmath>
#include <sstream>

namespace sgwls {

namespace {

constexpr double kCgTolerance = 1e-10;

double window_weight(const Image& g, int y0, int x0, int y1, int x1, const WeightParams& p) {
    const double dy = y0 - y1, dx = x0 - x1;
    double range2 = 0.0;
    for (int c = 0; c < g.channels; ++c) {
        const double d = g.at(y0, x0, c) - g.at(y1, x1, c);
        range2 += d * d;
    }
    return guidance_weight(std::sqrt(dy * dy + dx * dx), std::sqrt(range2) * p.guidance_scale, p);
}

struct Csr {
    std::vector<int> start;
    std::vector<int> col;
    std::vector<double> val;

    explicit Csr(const SparseSystem& sys) {
        start.assign(sys.n + 1, 0);
        for (const auto& e : sys.entries) ++start[e.row + 1];
        for (int i = 0; i < sys.n; ++i) start[i + 1] += start[i];
        col.resize(sys.entries.size());
        val.resize(sys.entries.size());
        std::vector<int> fill(start.begin(), start.end() - 1);
        for (const auto& e : sys.entries) {
            const int at = fill[e.row]++;
            col[at] = e.col;
            val[at] = e.value;
        }
    }

    void apply(const std::vector<double>& x, std::vector<double>& out) const {
        const int n = static_cast<int>(start.size()) - 1;
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int k = start[i]; k < start[i + 1]; ++k) acc += val[k] * x[col[k]];
            out[i] = acc;
        }
    }
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

// Plain CG with periodic true-residual refresh so the convergence check
// reflects ||b - Ax|| rather than the drifting recurrence.
std::vector<double> cg_solve(const Csr& a, const std::vector<double>& b, int cap) {
    const int n = static_cast<int>(b.size());
    std::vector<double> x(n, 0.0);
    const double bnorm = std::sqrt(dot(b, b));
    if (bnorm == 0.0) return x;

    std::vector<double> res = b;
    std::vector<double> dir = res;
    std::vector<double> tmp(n);
    double rr = dot(res, res);
    const double target = kCgTolerance * bnorm;

    auto refresh_residual = [&] {
        a.apply(x, tmp);
        for (int i = 0; i < n; ++i) res[i] = b[i] - tmp[i];
        rr = dot(res, res);
    };

    for (int it = 1; it <= cap; ++it) {
        a.apply(dir, tmp);
        const double dq = dot(dir, tmp);
        if (dq <= 0.0) throw Error("solve_full: direction curvature <= 0 (matrix not SPD)");
        const double step = rr / dq;
        for (int i = 0; i < n; ++i) x[i] += step * dir[i];

        const double rr_prev = rr;
        if (it % 32 == 0) {
            refresh_residual();
        } else {
            for (int i = 0; i < n; ++i) res[i] -= step * tmp[i];
            rr = dot(res, res);
        }
        if (std::sqrt(rr) <= target) {
            refresh_residual();
            if (std::sqrt(rr) <= target) return x;
        }
        const double beta = rr / rr_prev;
        for (int i = 0; i < n; ++i) dir[i] = res[i] + beta * dir[i];
    }
    return x;  // caller measures the residual and reports failure
}

}  // namespace

SparseSystem assemble_full(const Image& guidance, double lambda, int r, const WeightParams& p) {
    p.validate();
    if (!(lambda >= 0.0)) throw Error("assemble_full: lambda must be >= 0");
    if (r < 1) throw Error("assemble_full: r must be >= 1");
    const long long pixels = static_cast<long long>(guidance.width) * guidance.height;
    if (pixels > 65536) throw Error("assemble_full: image larger than 65536 pixels");

    SparseSystem sys;
    sys.rows = guidance.height;
    sys.cols = guidance.width;
    sys.n = static_cast<int>(pixels);
    sys.entries.reserve(static_cast<std::size_t>(sys.n) * ((2 * r + 1) * (2 * r + 1)));

    for (int y = 0; y < guidance.height; ++y) {
        for (int x = 0; x < guidance.width; ++x) {
            const int i = y * guidance.width + x;
            double incident = 0.0;
            std::size_t diag_slot = sys.entries.size();
            sys.entries.push_back({i, i, 0.0});
            for (int dy = -r; dy <= r; ++dy) {
                for (int dx = -r; dx <= r; ++dx) {
                    if (dy == 0 && dx == 0) continue;
                    const int ny = y + dy, nx = x + dx;
                    if (ny < 0 || ny >= guidance.height || nx < 0 || nx >= guidance.width) continue;
                    const double w = window_weight(guidance, y, x, ny, nx, p);
                    incident += w;
                    sys.entries.push_back({i, ny * guidance.width + nx, -lambda * w});
                }
            }
            sys.entries[diag_slot].value = 1.0 + lambda * incident;
        }
    }
    return sys;
}

Image solve_full(const SparseSystem& sys, const Image& f) {
    if (f.width != sys.cols || f.height != sys.rows)
        throw Error("solve_full: right-hand side dimensions do not match the system");
    const Csr a(sys);
    const int cap = 10 * sys.n;

    Image out(f.width, f.height, f.channels);
    std::vector<double> b(sys.n), tmp(sys.n);
    for (int c = 0; c < f.channels; ++c) {
        for (int y = 0; y < f.height; ++y)
            for (int x = 0; x < f.width; ++x) b[y * f.width + x] = f.at(y, x, c);

        const std::vector<double> sol = cg_solve(a, b, cap);

        a.apply(sol, tmp);
        double num = 0.0, den = 0.0;
        for (int i = 0; i < sys.n; ++i) {
            const double d = b[i] - tmp[i];
            num += d * d;
            den += b[i] * b[i];
        }
        const double rel = den > 0.0 ? std::sqrt(num / den) : 0.0;
        if (rel > kCgTolerance) {
            std::ostringstream msg;
            msg << "solve_full: CG did not reach relative residual " << kCgTolerance << " within "
                << cap << " iterations (final " << rel << ")";
            throw Error(msg.str());
        }
        for (int y = 0; y < f.height; ++y)
            for (int x = 0; x < f.width; ++x) out.at(y, x, c) = sol[y * f.width + x];
    }
    return out;
}

double wls_energy(const Image& u, const Image& f, const Image& guidance, double lambda, int r,
                  const WeightParams& p) {
    if (!u.same_size(f) || !u.same_size(guidance) || u.channels != f.channels)
        throw Error("wls_energy: shape mismatch");

    double data = 0.0;
    for (std::size_t i = 0; i < u.data.size(); ++i) {
        const double d = u.data[i] - f.data[i];
        data += d * d;
    }

    // Each unordered window pair enters once, matching the assembled system.
    double smoothness = 0.0;
    for (int y = 0; y < u.height; ++y) {
        for (int x = 0; x < u.width; ++x) {
            for (int dy = 0; dy <= r; ++dy) {
                for (int dx = (dy == 0 ? 1 : -r); dx <= r; ++dx) {
                    const int ny = y + dy, nx = x + dx;
                    if (ny >= u.height || nx < 0 || nx >= u.width) continue;
                    const double w = window_weight(guidance, y, x, ny, nx, p);
                    for (int c = 0; c < u.channels; ++c) {
                        const double d = u.at(y, x, c) - u.at(ny, nx, c);
                        smoothness += w * d * d;
                    }
                }
            }
        }
    }
    return data + lambda * smoothness;
}

}  // namespace sgwls
