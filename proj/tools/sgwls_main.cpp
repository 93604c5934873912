#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sgwls/apps.hpp"
#include "sgwls/banded.hpp"
#include "sgwls/smoother.hpp"
#include "sgwls/synthetic.hpp"
#include "sgwls/wls_reference.hpp"

namespace {

using namespace sgwls;

// ---------------------------------------------------------------- options

struct SmoothFlags {
    double lambda = 900.0;
    double alpha_s = 1.2, alpha_r = 1.2;
    double sigma_s = 4.0, sigma_r = 3.0;
    double eps = 1e-4;
    double gscale = 0.0;  // 0 = pick by kind (1 for frac, 255 for exp)
    int r = 1, tau = 1, iters = 4, threads = 0;
    std::string weights = "frac";
    std::string first_axis = "col";
    std::string preset;

    CLI::Option *o_lambda = nullptr, *o_as = nullptr, *o_ar = nullptr, *o_ss = nullptr,
                *o_sr = nullptr, *o_eps = nullptr, *o_gscale = nullptr, *o_r = nullptr,
                *o_tau = nullptr, *o_iters = nullptr, *o_weights = nullptr, *o_axis = nullptr;
};

void attach_smooth_flags(CLI::App* cmd, SmoothFlags& f, bool with_preset = true,
                         bool with_shape = true) {
    f.o_lambda = cmd->add_option("--lambda", f.lambda, "Smoothing strength");
    if (with_shape) {
        f.o_r = cmd->add_option("--r", f.r, "Neighborhood radius");
        f.o_tau = cmd->add_option("--tau", f.tau, "Band center stride");
    }
    f.o_iters = cmd->add_option("--iters", f.iters, "Directional passes (axes alternate)");
    f.o_weights = cmd->add_option("--weights", f.weights, "Weight kind: frac or exp");
    f.o_as = cmd->add_option("--as", f.alpha_s, "Spatial exponent (frac)");
    f.o_ar = cmd->add_option("--ar", f.alpha_r, "Range exponent (frac)");
    f.o_ss = cmd->add_option("--ss", f.sigma_s, "Spatial sigma (exp)");
    f.o_sr = cmd->add_option("--sr", f.sigma_r, "Range sigma (exp)");
    f.o_eps = cmd->add_option("--eps", f.eps, "Fractional weight epsilon");
    f.o_gscale = cmd->add_option("--gscale", f.gscale,
                                 "Guidance scale for range differences (default 1 frac / 255 exp)");
    f.o_axis = cmd->add_option("--first-axis", f.first_axis, "First pass direction: col or row");
    cmd->add_option("--threads", f.threads, "Worker threads (default SGWLS_THREADS or 1)");
    if (with_preset)
        cmd->add_option("--preset", f.preset,
                        "Start from a published preset: enhance, tonemap, upsample2x, upsample4x, "
                        "upsample8x, colorize");
}

int resolve_threads(int flag) {
    if (flag > 0) return flag;
    if (const char* env = std::getenv("SGWLS_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

SmoothConfig preset_by_name(const std::string& name) {
    if (name == "enhance") return enhance_preset();
    if (name == "tonemap") return tonemap_layer_preset(5.0);
    if (name == "upsample2x") return upsample_preset(2);
    if (name == "upsample4x") return upsample_preset(4);
    if (name == "upsample8x") return upsample_preset(8);
    if (name == "colorize") return colorize_preset();
    throw Error("unknown preset '" + name + "'");
}

SmoothConfig make_config(const SmoothFlags& f) {
    SmoothConfig cfg;
    if (!f.preset.empty()) cfg = preset_by_name(f.preset);

    if (f.o_weights->count() || f.preset.empty()) {
        if (f.weights == "frac")
            cfg.weight.kind = WeightKind::Frac;
        else if (f.weights == "exp")
            cfg.weight.kind = WeightKind::Exp;
        else
            throw Error("--weights must be 'frac' or 'exp'");
        if (!f.o_gscale->count())
            cfg.weight.guidance_scale = cfg.weight.kind == WeightKind::Frac ? 1.0 : 255.0;
    }
    if (f.o_lambda->count()) cfg.lambda = f.lambda;
    if (f.o_r && f.o_r->count()) cfg.r = f.r;
    if (f.o_tau && f.o_tau->count()) cfg.tau = f.tau;
    if (f.o_iters->count()) cfg.iterations = f.iters;
    if (f.o_as->count()) cfg.weight.alpha_s = f.alpha_s;
    if (f.o_ar->count()) cfg.weight.alpha_r = f.alpha_r;
    if (f.o_ss->count()) cfg.weight.sigma_s = f.sigma_s;
    if (f.o_sr->count()) cfg.weight.sigma_r = f.sigma_r;
    if (f.o_eps->count()) cfg.weight.epsilon = f.eps;
    if (f.o_gscale->count()) cfg.weight.guidance_scale = f.gscale;
    if (f.o_axis->count() || f.preset.empty()) {
        if (f.first_axis == "col")
            cfg.first_axis = Axis::Column;
        else if (f.first_axis == "row")
            cfg.first_axis = Axis::Row;
        else
            throw Error("--first-axis must be 'col' or 'row'");
    }
    cfg.threads = resolve_threads(f.threads);
    return cfg;
}

void echo_config(const char* op, const SmoothConfig& cfg) {
    std::fprintf(stderr,
                 "sgwls: %s lambda=%g r=%d tau=%d iters=%d weights=%s alpha_s=%g alpha_r=%g "
                 "sigma_s=%g sigma_r=%g eps=%g gscale=%g first_axis=%s threads=%d\n",
                 op, cfg.lambda, cfg.r, cfg.tau, cfg.iterations,
                 cfg.weight.kind == WeightKind::Frac ? "frac" : "exp", cfg.weight.alpha_s,
                 cfg.weight.alpha_r, cfg.weight.sigma_s, cfg.weight.sigma_r, cfg.weight.epsilon,
                 cfg.weight.guidance_scale, cfg.first_axis == Axis::Column ? "col" : "row",
                 cfg.threads);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- bench

struct BenchFlags {
    std::string op = "smooth";
    std::vector<int> sizes{256};
    std::vector<int> rs{1};
    std::vector<int> taus{1};
    int reps = 3;
    SmoothFlags smooth;
};

int run_bench(const BenchFlags& bf) {
    std::printf("op,M,N,r,tau,T,seconds\n");
    for (int size : bf.sizes) {
        const Image guidance = synthetic::step_scene(size, size, 42);
        const Image target = synthetic::add_gaussian_noise(guidance, 0.05, 43, true);

        if (bf.op == "wlsref") {
            for (int r : bf.rs) {
                SmoothFlags f = bf.smooth;
                SmoothConfig cfg = make_config(f);
                cfg.r = r;
                const auto t0 = std::chrono::steady_clock::now();
                const SparseSystem sys = assemble_full(guidance, cfg.lambda, cfg.r, cfg.weight);
                const Image out = solve_full(sys, target);
                const double dt = seconds_since(t0);
                static_cast<void>(out);
                std::printf("wlsref,%d,%d,%d,1,1,%.6f\n", size, size, r, dt);
                std::fflush(stdout);
            }
            continue;
        }

        for (int r : bf.rs) {
            for (int tau : bf.taus) {
                SmoothConfig cfg = make_config(bf.smooth);
                cfg.r = r;
                cfg.tau = tau;
                if (tau > 2 * r + 1) {
                    std::fprintf(stderr, "sgwls: bench: skipping r=%d tau=%d (stride too large)\n", r, tau);
                    continue;
                }
                cfg.validate();
                std::vector<double> times;
                for (int rep = 0; rep < bf.reps; ++rep) {
                    const auto t0 = std::chrono::steady_clock::now();
                    const Image out = smooth(target, guidance, cfg);
                    times.push_back(seconds_since(t0));
                    static_cast<void>(out);
                }
                std::sort(times.begin(), times.end());
                std::printf("smooth,%d,%d,%d,%d,%d,%.6f\n", size, size, r, tau, cfg.iterations,
                            times[times.size() / 2]);
                std::fflush(stdout);
            }
        }
    }
    return 0;
}

// ---------------------------------------------------------------- selftest

struct SelfTest {
    int failures = 0;

    void check(bool ok, const std::string& name, const std::string& detail = "") {
        if (ok) {
            std::printf("ok %s\n", name.c_str());
        } else {
            ++failures;
            std::printf("FAIL %s%s\n", name.c_str(), detail.empty() ? "" : (": " + detail).c_str());
        }
    }
};

BandedSystem random_spd_banded(std::mt19937_64& rng, int n, int r) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    BandedSystem sys;
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
        for (int t = 1; t <= sys.r; ++t) row += std::abs(sys.upper_at(k, t)) + std::abs(sys.lower_at(k - t, t));
        sys.diag[k] = row + 0.1 + unit(rng);
    }
    return sys;
}

double reconstruction_error(const BandedSystem& sys, const BandedFactors& f) {
    // P*Q is banded with the same bandwidth; compare band by band.
    double num = 0.0, den = 0.0;
    auto p_at = [&](int row, int col) -> double {  // P(row, col), row >= col
        if (row == col) return f.alpha[row];
        return f.gamma_at(col, row - col);
    };
    auto q_at = [&](int row, int col) -> double {  // Q(row, col), col >= row
        if (row == col) return 1.0;
        return f.beta_at(row, col - row);
    };
    for (int i = 0; i < sys.n; ++i) {
        for (int j = std::max(0, i - sys.r); j <= std::min(sys.n - 1, i + sys.r); ++j) {
            double pq = 0.0;
            for (int k = std::max(0, std::max(i - sys.r, j - sys.r)); k <= std::min(i, j); ++k)
                pq += p_at(i, k) * q_at(k, j);
            double a;
            if (i == j)
                a = sys.diag[i];
            else if (j > i)
                a = sys.upper_at(i, j - i);
            else
                a = sys.lower_at(j, i - j);
            num += (pq - a) * (pq - a);
            den += a * a;
        }
    }
    return std::sqrt(num / den);
}

int run_selftest() {
    SelfTest t;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    {  // banded solver vs dense elimination, plus factor reconstruction
        double worst_solve = 0.0, worst_recon = 0.0;
        for (int trial = 0; trial < 40; ++trial) {
            const int n = 5 + static_cast<int>(unit(rng) * 295);
            const int r = 1 + static_cast<int>(unit(rng) * 8);
            const BandedSystem sys = random_spd_banded(rng, n, r);
            const auto mine = solve_banded(sys);
            const auto ref = dense_solve_oracle(sys);
            double scale = 0.0, diff = 0.0;
            for (int i = 0; i < n; ++i) {
                scale = std::max(scale, std::abs(ref[i]));
                diff = std::max(diff, std::abs(mine[i] - ref[i]));
            }
            worst_solve = std::max(worst_solve, diff / std::max(scale, 1e-30));
            worst_recon = std::max(worst_recon, reconstruction_error(sys, rband_lu_factorize(sys)));
        }
        t.check(worst_solve <= 1e-8 && worst_recon <= 1e-10, "banded-oracle",
                "solve " + std::to_string(worst_solve) + " recon " + std::to_string(worst_recon));
    }

    {  // r=1 factorization equals an independently coded Thomas algorithm
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const int n = 3 + static_cast<int>(unit(rng) * 60);
            const BandedSystem sys = random_spd_banded(rng, n, 1);
            const BandedFactors f = rband_lu_factorize(sys);
            std::vector<double> alpha(n), beta(n - 1), gamma(n - 1);
            alpha[0] = sys.diag[0];
            for (int k = 0; k + 1 < n; ++k) {
                gamma[k] = sys.lower_at(k, 1);
                beta[k] = sys.upper_at(k, 1) / alpha[k];
                alpha[k + 1] = sys.diag[k + 1] - gamma[k] * beta[k];
            }
            for (int k = 0; k < n; ++k) worst = std::max(worst, std::abs(alpha[k] - f.alpha[k]));
            for (int k = 0; k + 1 < n; ++k) {
                worst = std::max(worst, std::abs(beta[k] - f.beta_at(k, 1)));
                worst = std::max(worst, std::abs(gamma[k] - f.gamma_at(k, 1)));
            }
        }
        t.check(worst <= 1e-12, "thomas-reduction", std::to_string(worst));
    }

    {  // constant invariance of the full pipeline
        double worst = 0.0;
        for (int trial = 0; trial < 3; ++trial) {
            const double value = unit(rng);
            SmoothConfig cfg = trial == 0 ? enhance_preset() : colorize_preset();
            cfg.iterations = 2;
            const Image constant(23, 17, 1, value);
            const Image guide = synthetic::step_scene(23, 17, 11 + trial);
            const Image out = smooth(constant, guide, cfg);
            for (double v : out.data) worst = std::max(worst, std::abs(v - value));
        }
        t.check(worst <= 1e-12, "constant-invariance", std::to_string(worst));
    }

    {  // band extraction round-trip and adjacency
        const Image img = synthetic::add_gaussian_noise(Image(12, 9, 1, 0.5), 0.2, 5, false);
        bool ok = true;
        for (int r = 0; r <= 2 && ok; ++r) {
            for (int center : band_centers(12, r, 1)) {
                const Band band = extract_band(img, center, r, Axis::Column);
                for (int i = 0; i < band.size() && ok; ++i) {
                    for (int j = i + 1; j < std::min(band.size(), i + 2 * r + 2); ++j) {
                        const int cheb = std::max(std::abs(band.coords[i].row - band.coords[j].row),
                                                  std::abs(band.coords[i].col - band.coords[j].col));
                        if (cheb > j - i) ok = false;
                    }
                }
                Image accum(12, 9, 1, 0.0), counts(12, 9, 1, 0.0);
                scatter_band(band, band.values, accum, counts);
                for (int i = 0; i < band.size(); ++i) {
                    const auto [row, col] = band.coords[i];
                    if (accum.at(row, col) / counts.at(row, col) != img.at(row, col)) ok = false;
                }
            }
        }
        t.check(ok, "snake-roundtrip");
    }

    {  // single-row smoothing equals the dense full solve
        const Image row = synthetic::add_gaussian_noise(Image(64, 1, 1, 0.5), 0.15, 9, true);
        SmoothConfig cfg;
        cfg.lambda = 50.0;
        cfg.r = 2;
        cfg.tau = 1;
        cfg.iterations = 1;
        cfg.first_axis = Axis::Row;
        const Image mine = smooth(row, row, cfg);
        const Image ref = solve_full(assemble_full(row, cfg.lambda, cfg.r, cfg.weight), row);
        double worst = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < mine.data.size(); ++i) {
            worst = std::max(worst, std::abs(mine.data[i] - ref.data[i]));
            scale = std::max(scale, std::abs(ref.data[i]));
        }
        t.check(worst / scale <= 1e-8, "single-row-exactness", std::to_string(worst / scale));
    }

    std::printf(t.failures == 0 ? "selftest passed\n" : "selftest FAILED (%d)\n", t.failures);
    return t.failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semi-global weighted least squares image filtering"};
    app.require_subcommand(1);

    // smooth
    auto* c_smooth = app.add_subcommand("smooth", "Edge-preserving smoothing");
    std::string in_path, out_path, guide_path;
    SmoothFlags f_smooth;
    c_smooth->add_option("input", in_path, "Input image (pgm/ppm/pfm)")->required();
    c_smooth->add_option("output", out_path, "Output image")->required();
    c_smooth->add_option("--guidance", guide_path, "Guidance image (default: the input)");
    attach_smooth_flags(c_smooth, f_smooth);

    // enhance
    auto* c_enh = app.add_subcommand("enhance", "Detail enhancement");
    std::string enh_in, enh_out;
    double boost = 3.0;
    SmoothFlags f_enh;
    c_enh->add_option("input", enh_in)->required();
    c_enh->add_option("output", enh_out)->required();
    c_enh->add_option("--boost", boost, "Detail layer gain");
    attach_smooth_flags(c_enh, f_enh);

    // tonemap
    auto* c_tm = app.add_subcommand("tonemap", "HDR tone mapping");
    std::string tm_in, tm_out;
    ToneMapParams tm_params;
    SmoothFlags f_tm;
    c_tm->add_option("input", tm_in, "HDR input (pfm)")->required();
    c_tm->add_option("output", tm_out)->required();
    c_tm->add_option("--range", tm_params.target_log_range, "Target base range in log10 decades");
    c_tm->add_option("--l1", tm_params.lambdas[0], "Lambda of the first detail layer");
    c_tm->add_option("--l2", tm_params.lambdas[1], "Lambda of the second detail layer");
    c_tm->add_option("--l3", tm_params.lambdas[2], "Lambda of the third detail layer");
    c_tm->add_option("--dw1", tm_params.detail_weights[0], "Weight of detail layer 1");
    c_tm->add_option("--dw2", tm_params.detail_weights[1], "Weight of detail layer 2");
    c_tm->add_option("--dw3", tm_params.detail_weights[2], "Weight of detail layer 3");
    attach_smooth_flags(c_tm, f_tm, false);

    // upsample
    auto* c_up = app.add_subcommand("upsample", "Guided depth upsampling");
    std::string up_depth, up_guide, up_out;
    int up_factor = 4;
    SmoothFlags f_up;
    c_up->add_option("depth", up_depth, "Low-resolution depth (pgm/pfm)")->required();
    c_up->add_option("guidance", up_guide, "High-resolution guidance image")->required();
    c_up->add_option("output", up_out)->required();
    c_up->add_option("--factor", up_factor, "Upsampling factor");
    attach_smooth_flags(c_up, f_up);

    // colorize
    auto* c_col = app.add_subcommand("colorize", "Scribble colorization");
    std::string col_gray, col_scrib, col_out, col_mask;
    double scribble_threshold = 2.0 / 255.0;
    SmoothFlags f_col;
    c_col->add_option("gray", col_gray, "Grayscale input (pgm)")->required();
    c_col->add_option("scribbles", col_scrib, "Scribble image (ppm)")->required();
    c_col->add_option("output", col_out)->required();
    c_col->add_option("--mask", col_mask, "Explicit 0/1 scribble mask (pgm)");
    c_col->add_option("--scribble-threshold", scribble_threshold,
                      "Chroma magnitude above which a pixel counts as a scribble");
    attach_smooth_flags(c_col, f_col);

    // bench
    auto* c_bench = app.add_subcommand("bench", "Timing table as CSV on stdout");
    BenchFlags bench;
    c_bench->add_option("--op", bench.op, "What to time: smooth or wlsref");
    c_bench->add_option("--sizes", bench.sizes, "Square image sizes")->delimiter(',');
    c_bench->add_option("--size", bench.sizes, "Alias for --sizes")->delimiter(',');
    c_bench->add_option("--r", bench.rs, "Radii")->delimiter(',');
    c_bench->add_option("--tau", bench.taus, "Strides")->delimiter(',');
    c_bench->add_option("--reps", bench.reps, "Repetitions per cell (median reported)");
    attach_smooth_flags(c_bench, bench.smooth, true, false);

    // selftest
    auto* c_self = app.add_subcommand("selftest", "Run the built-in oracle suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (c_smooth->parsed()) {
            const SmoothConfig cfg = make_config(f_smooth);
            echo_config("smooth", cfg);
            const Image input = read_image(in_path);
            const Image guide = guide_path.empty() ? input : read_image(guide_path);
            write_image(smooth(input, guide, cfg), out_path);
        } else if (c_enh->parsed()) {
            SmoothFlags f = f_enh;
            if (f.preset.empty()) f.preset = "enhance";
            const SmoothConfig cfg = make_config(f);
            echo_config("enhance", cfg);
            write_image(detail_enhance(read_image(enh_in), boost, cfg), enh_out);
        } else if (c_tm->parsed()) {
            SmoothFlags f = f_tm;
            f.preset = "tonemap";
            tm_params.smoothing = make_config(f);
            echo_config("tonemap", tm_params.smoothing);
            write_image(tone_map(read_image(tm_in), tm_params), tm_out);
        } else if (c_up->parsed()) {
            SmoothFlags f = f_up;
            if (f.preset.empty() && (up_factor == 2 || up_factor == 4 || up_factor == 8))
                f.preset = "upsample" + std::to_string(up_factor) + "x";
            const SmoothConfig cfg = make_config(f);
            echo_config("upsample", cfg);
            const Image depth = read_image(up_depth);
            const Image guide = read_image(up_guide);
            write_image(depth_upsample(depth, guide, up_factor, cfg), up_out);
        } else if (c_col->parsed()) {
            SmoothFlags f = f_col;
            if (f.preset.empty()) f.preset = "colorize";
            const SmoothConfig cfg = make_config(f);
            echo_config("colorize", cfg);
            const Image gray = read_image(col_gray);
            const Image scribbles = read_image(col_scrib);
            Image mask;
            if (!col_mask.empty()) {
                mask = read_image(col_mask);
                for (double& v : mask.data) v = v >= 0.5 ? 1.0 : 0.0;
            } else {
                // Scribbles are strokes painted over the gray image; anything
                // with visible chroma counts.
                const Image yuv = rgb_to_yuv(scribbles);
                mask = Image(gray.width, gray.height, 1, 0.0);
                for (int y = 0; y < gray.height; ++y)
                    for (int x = 0; x < gray.width; ++x)
                        if (std::abs(yuv.at(y, x, 1)) > scribble_threshold ||
                            std::abs(yuv.at(y, x, 2)) > scribble_threshold)
                            mask.at(y, x) = 1.0;
            }
            write_image(colorize(gray, scribbles, mask, cfg), col_out);
        } else if (c_bench->parsed()) {
            echo_config("bench", make_config(bench.smooth));
            return run_bench(bench);
        } else if (c_self->parsed()) {
            return run_selftest();
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "sgwls: error: %s\n", e.what());
        return 1;
    }
    return 0;
}
