#include "core/squeeze.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/threading.hpp"

namespace conceft::squeeze {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_congruent(const TFMatrix& w, const TFMatrix& dw) {
    require(w.values.rows() == dw.values.rows() && w.values.cols() == dw.values.cols(),
            "squeeze: W and dW have mismatched shapes");
    require(w.axis_kind == dw.axis_kind, "squeeze: W and dW have mismatched axis kinds");
}

// Integration measure per row: a^{-3/2} da for the geometric scale axis
// (da = a ln(ratio), so the weight is ln(ratio)/sqrt(a)), unit measure
// d eta for the frequency axis.
VectorXd row_measure(const TFMatrix& w) {
    const Eigen::Index rows = w.axis_grid.size();
    VectorXd m(rows);
    if (w.axis_kind == AxisKind::Scale) {
        const double log_ratio = std::log(w.axis_grid[1] / w.axis_grid[0]);
        for (Eigen::Index r = 0; r < rows; ++r) m[r] = log_ratio / std::sqrt(w.axis_grid[r]);
    } else {
        const double deta = w.axis_grid[1] - w.axis_grid[0];
        m.setConstant(deta);
    }
    return m;
}

// Boundary mask for the squeezed output: twice the taper's effective
// half-width (two envelope stds) at the reference pseudo-frequency, from
// either signal edge.
std::vector<std::uint8_t> boundary_mask_of(const TFMatrix& w, const SqueezeConfig& cfg) {
    const Eigen::Index ntimes = w.time_grid.size();
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(ntimes), 0);
    if (cfg.boundary_ref_freq_hz <= 0.0) return mask;
    double sigma_t;
    if (w.axis_kind == AxisKind::Scale) {
        // row_halfwidth = sigma_t(pseudo-freq 1) * a, so divide out the scale.
        sigma_t = (w.row_halfwidth_sec[0] / w.axis_grid[0]) / cfg.boundary_ref_freq_hz;
    } else {
        sigma_t = w.row_halfwidth_sec[0];
    }
    const double skip = 4.0 * sigma_t;
    const double t_begin = w.time_grid[0];
    const double t_end = w.time_grid[ntimes - 1];
    for (Eigen::Index i = 0; i < ntimes; ++i)
        if (w.time_grid[i] - t_begin < skip || t_end - w.time_grid[i] < skip) mask[static_cast<std::size_t>(i)] = 1;
    return mask;
}

struct AccumulateOptions {
    double gamma_abs = 0.0;
    bool flip_negative_real = false;  // ConceFT per-point half-sphere rule
};

// Shared SST accumulation kernel. Masked columns are not processed; the
// diagnostics cover processed columns only, so deposited + dropped mass is
// exactly the passing mass.
SqueezedTF accumulate(const TFMatrix& w, const TFMatrix& dw, const SqueezeConfig& cfg, const VectorXd& measure,
                      const AccumulateOptions& acc, double amp_constant, int threads) {
    const Eigen::Index rows = w.values.rows();
    const Eigen::Index ntimes = w.values.cols();
    const Eigen::Index bins = cfg.freq_bins;
    const double f_lo = cfg.freq_min_hz;
    const double width = cfg.bin_width();

    SqueezedTF out;
    out.freq_grid = cfg.bin_grid();
    out.time_grid = w.time_grid;
    out.values = MatrixXcd::Zero(bins, ntimes);
    out.boundary_mask = boundary_mask_of(w, cfg);
    out.amp_constant = amp_constant;
    out.diag.threshold_used = acc.gamma_abs;

    const bool gaussian = cfg.kernel == SqueezeConfig::KernelKind::GaussianKernel;
    const double alpha = cfg.kernel_alpha;
    const double inv_sqrt2pi = 0.39894228040143267794;

    std::vector<SqueezeDiagnostics> partial(static_cast<std::size_t>(worker_count(ntimes, threads)));
    parallel_for_workers(ntimes, threads, [&](int worker, long long begin, long long end) {
        SqueezeDiagnostics& diag = partial[static_cast<std::size_t>(worker)];
        for (long long t = begin; t < end; ++t) {
            if (out.boundary_mask[static_cast<std::size_t>(t)]) continue;
            for (Eigen::Index r = 0; r < rows; ++r) {
                ++diag.points_total;
                const cplx wv = w.values(r, t);
                const double mag = std::abs(wv);
                if (!(mag > acc.gamma_abs)) continue;
                ++diag.points_passing;
                const cplx dv = dw.values(r, t);
                // Re[-i dW/(2 pi W)] = Im(dW conj(W)) / (2 pi |W|^2)
                const double omega =
                    (dv.imag() * wv.real() - dv.real() * wv.imag()) / (kTwoPi * mag * mag);
                cplx contrib = wv * measure[r];
                if (acc.flip_negative_real && wv.real() < 0.0) contrib = -contrib;
                const double cmag = std::abs(contrib);
                if (!gaussian) {
                    const auto bin = static_cast<Eigen::Index>(std::floor((omega - f_lo) / width));
                    if (bin >= 0 && bin < bins) {
                        out.values(bin, t) += contrib;
                        ++diag.points_deposited;
                        diag.mass_deposited += cmag;
                    } else {
                        ++diag.points_dropped;
                        diag.mass_dropped += cmag;
                    }
                } else {
                    // Spread over bins with the approximate-delta kernel
                    // (1/alpha) g((xi - Omega)/alpha) d xi, g standard normal.
                    const auto lo = std::max<Eigen::Index>(
                        0, static_cast<Eigen::Index>(std::floor((omega - 5.0 * alpha - f_lo) / width)));
                    const auto hi = std::min<Eigen::Index>(
                        bins - 1, static_cast<Eigen::Index>(std::floor((omega + 5.0 * alpha - f_lo) / width)));
                    double in_band = 0.0;
                    for (Eigen::Index b = lo; b <= hi; ++b) {
                        const double xi = f_lo + (static_cast<double>(b) + 0.5) * width;
                        const double z = (xi - omega) / alpha;
                        const double g = inv_sqrt2pi * std::exp(-0.5 * z * z) / alpha * width;
                        out.values(b, t) += contrib * g;
                        in_band += g;
                    }
                    if (in_band > 0.0) ++diag.points_deposited;
                    if (in_band < 1.0 - 1e-12) {
                        ++diag.points_dropped;
                        diag.mass_dropped += cmag * std::max(0.0, 1.0 - in_band);
                    }
                    diag.mass_deposited += cmag * in_band;
                }
            }
        }
    });
    for (const auto& d : partial) out.diag.accumulate(d);
    return out;
}

}  // namespace

double resolve_threshold(const SqueezeConfig& cfg, const TFMatrix& w) {
    switch (cfg.threshold_kind) {
        case SqueezeConfig::ThresholdKind::Absolute:
            return cfg.threshold_value;
        case SqueezeConfig::ThresholdKind::RelativeToMax:
            return cfg.threshold_value * w.values.cwiseAbs().maxCoeff();
        case SqueezeConfig::ThresholdKind::Quantile: {
            std::vector<double> mags(static_cast<std::size_t>(w.values.size()));
            Eigen::Index idx = 0;
            for (Eigen::Index t = 0; t < w.values.cols(); ++t)
                for (Eigen::Index r = 0; r < w.values.rows(); ++r)
                    mags[static_cast<std::size_t>(idx++)] = std::abs(w.values(r, t));
            const auto rank = static_cast<std::size_t>(cfg.threshold_value * (mags.size() - 1));
            std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(rank), mags.end());
            return mags[rank];
        }
    }
    return cfg.threshold_value;
}

MatrixXd reassignment_rule(const TFMatrix& w, const TFMatrix& dw, double gamma_abs) {
    require_congruent(w, dw);
    MatrixXd omega(w.values.rows(), w.values.cols());
    for (Eigen::Index t = 0; t < w.values.cols(); ++t) {
        for (Eigen::Index r = 0; r < w.values.rows(); ++r) {
            const cplx wv = w.values(r, t);
            const double mag = std::abs(wv);
            if (mag > gamma_abs) {
                const cplx dv = dw.values(r, t);
                omega(r, t) = (dv.imag() * wv.real() - dv.real() * wv.imag()) / (kTwoPi * mag * mag);
            } else {
                omega(r, t) = kNegInf;
            }
        }
    }
    return omega;
}

SqueezedTF sst_cwt(const TFMatrix& w, const TFMatrix& dw, const SqueezeConfig& cfg, const ScaleGrid& grid,
                   double amp_constant, int threads) {
    require_congruent(w, dw);
    require(w.axis_kind == AxisKind::Scale, "sst_cwt: expected a scale-axis transform");
    require(w.axis_grid.size() == grid.scales.size(), "sst_cwt: scale grid mismatch");
    cfg.validate();
    AccumulateOptions acc;
    acc.gamma_abs = resolve_threshold(cfg, w);
    return accumulate(w, dw, cfg, row_measure(w), acc, amp_constant, threads);
}

SqueezedTF sst_stft(const TFMatrix& v, const TFMatrix& dv, const SqueezeConfig& cfg, double amp_constant,
                    int threads) {
    require_congruent(v, dv);
    require(v.axis_kind == AxisKind::Frequency, "sst_stft: expected a frequency-axis transform");
    cfg.validate();
    AccumulateOptions acc;
    acc.gamma_abs = resolve_threshold(cfg, v);
    return accumulate(v, dv, cfg, row_measure(v), acc, amp_constant, threads);
}

SqueezedTF mtsst(const std::vector<SqueezedTF>& ssts) {
    require(!ssts.empty(), "mtsst: empty input list");
    const auto& first = ssts.front();
    SqueezedTF out = first;
    double amp = first.amp_constant;
    for (std::size_t j = 1; j < ssts.size(); ++j) {
        const auto& s = ssts[j];
        require(s.values.rows() == first.values.rows() && s.values.cols() == first.values.cols(),
                "mtsst: incongruent grids");
        require((s.freq_grid - first.freq_grid).cwiseAbs().maxCoeff() == 0.0, "mtsst: incongruent frequency grids");
        out.values += s.values;
        out.diag.accumulate(s.diag);
        amp += s.amp_constant;
    }
    const double inv = 1.0 / static_cast<double>(ssts.size());
    out.values *= inv;
    out.amp_constant = amp * inv;
    return out;
}

TvPS tvps_of(const SqueezedTF& s) {
    TvPS p;
    p.values = s.values.cwiseAbs2();
    p.freq_grid = s.freq_grid;
    p.time_grid = s.time_grid;
    p.boundary_mask = s.boundary_mask;
    return p;
}

double admissibility_constant(const tapers::ReferenceFamily& fam, const VectorXd& weights) {
    require(fam.kind == tapers::FamilyKind::MorseWavelets, "admissibility_constant: Morse families only");
    require(weights.size() == fam.count, "admissibility_constant: weight length mismatch");
    const double dw = fam.grid[1] - fam.grid[0];
    double c = 0.0;
    for (Eigen::Index i = 0; i < fam.grid.size(); ++i) {
        double taper = 0.0;
        for (int j = 0; j < fam.count; ++j) taper += weights[j] * fam.tapers(i, j);
        c += taper / fam.grid[i] * dw;
    }
    return c;
}

double window_zero_value(const tapers::ReferenceFamily& fam, const VectorXd& weights) {
    require(fam.kind == tapers::FamilyKind::HermiteWindows, "window_zero_value: Hermite families only");
    require(weights.size() == fam.count, "window_zero_value: weight length mismatch");
    const Eigen::Index mid = (fam.grid.size() - 1) / 2;
    double h0 = 0.0;
    for (int j = 0; j < fam.count; ++j) h0 += weights[j] * fam.tapers(mid, j);
    return h0;
}

void conceft_stream(const tf::TransformSet& set, const tapers::ReferenceFamily& fam,
                    const tapers::ProjectionSet& proj, const ConceftOptions& opt, const ScaleGrid* grid,
                    const std::vector<int>& snapshot_ns,
                    const std::function<void(int, const ConceftOutput&)>& on_snapshot) {
    require(!set.w.empty() && set.w.size() == set.dw.size(), "conceft: malformed transform set");
    require(static_cast<int>(set.w.size()) == proj.dim(), "conceft: projection dimension must equal J");
    require(proj.size() >= 1, "conceft: need at least one projection");
    require(!snapshot_ns.empty(), "conceft: no snapshot sizes requested");
    for (std::size_t i = 0; i < snapshot_ns.size(); ++i) {
        require(snapshot_ns[i] >= 1 && snapshot_ns[i] <= proj.size(), "conceft: snapshot size out of range");
        if (i) require(snapshot_ns[i] > snapshot_ns[i - 1], "conceft: snapshot sizes must be ascending");
    }
    opt.squeeze.validate();

    const bool is_cwt = set.w.front().axis_kind == AxisKind::Scale;
    if (is_cwt) require(grid != nullptr, "conceft: scale grid required for CWT sets");

    // Per-taper reconstruction constants for the combined-taper calibration.
    VectorXd taper_consts(fam.count);
    for (int j = 0; j < fam.count; ++j) {
        VectorXd e = VectorXd::Zero(fam.count);
        e[j] = 1.0;
        taper_consts[j] = is_cwt ? 0.5 * admissibility_constant(fam, e) : 0.5 * window_zero_value(fam, e);
    }

    TFMatrix w_comb = set.w.front();
    TFMatrix dw_comb = set.dw.front();
    SqueezedTF running;  // sum of the first n SSTs
    double amp_sum = 0.0;
    std::size_t next_snapshot = 0;
    const int n_max = snapshot_ns.back();

    for (int n = 0; n < n_max; ++n) {
        const VectorXd r = proj.vectors.col(n);
        w_comb.values = r[0] * set.w[0].values;
        dw_comb.values = r[0] * set.dw[0].values;
        for (int j = 1; j < proj.dim(); ++j) {
            w_comb.values += r[j] * set.w[static_cast<std::size_t>(j)].values;
            dw_comb.values += r[j] * set.dw[static_cast<std::size_t>(j)].values;
        }

        AccumulateOptions acc;
        acc.gamma_abs = resolve_threshold(opt.squeeze, w_comb);
        acc.flip_negative_real = opt.squeeze.sign_flip == SqueezeConfig::SignFlip::PerPoint;

        double vector_sign = 1.0;
        if (opt.squeeze.sign_flip == SqueezeConfig::SignFlip::PerVector) {
            // Global half-sphere choice: orient r_n so the passing region has
            // nonnegative total real part.
            double total_re = 0.0;
            for (Eigen::Index t = 0; t < w_comb.values.cols(); ++t)
                for (Eigen::Index rr = 0; rr < w_comb.values.rows(); ++rr) {
                    const cplx v = w_comb.values(rr, t);
                    if (std::abs(v) > acc.gamma_abs) total_re += v.real();
                }
            if (total_re < 0.0) vector_sign = -1.0;
        }
        if (vector_sign < 0.0) {
            w_comb.values = -w_comb.values;
            dw_comb.values = -dw_comb.values;
        }

        const double amp_n = std::abs(taper_consts.dot(vector_sign * r));
        amp_sum += amp_n;

        SqueezedTF s = accumulate(w_comb, dw_comb, opt.squeeze, row_measure(w_comb), acc, amp_n, opt.threads);
        if (n == 0) {
            running = std::move(s);
        } else {
            running.values += s.values;
            running.diag.accumulate(s.diag);
        }

        if (next_snapshot < snapshot_ns.size() && n + 1 == snapshot_ns[next_snapshot]) {
            const double inv = 1.0 / static_cast<double>(n + 1);
            ConceftOutput out;
            out.c = running;
            out.c.values *= inv;
            out.c.amp_constant = amp_sum * inv;
            out.tvps = tvps_of(out.c);
            on_snapshot(n + 1, out);
            ++next_snapshot;
        }
    }
}

ConceftOutput conceft(const tf::TransformSet& set, const tapers::ReferenceFamily& fam,
                      const tapers::ProjectionSet& proj, const ConceftOptions& opt, const ScaleGrid* grid) {
    ConceftOutput result;
    conceft_stream(set, fam, proj, opt, grid, {proj.size()},
                   [&](int, const ConceftOutput& out) { result = out; });
    return result;
}

VectorXd reconstruct_amplitude(const SqueezedTF& s, const VectorXd& if_track_hz, double band_halfwidth_hz) {
    require(if_track_hz.size() == s.time_grid.size(), "reconstruct_amplitude: track length mismatch");
    require(band_halfwidth_hz > 0.0, "reconstruct_amplitude: band halfwidth must be positive");
    require(s.amp_constant > 0.0, "reconstruct_amplitude: squeezed transform has no reconstruction constant");

    const Eigen::Index bins = s.freq_grid.size();
    const double width = bins > 1 ? s.freq_grid[1] - s.freq_grid[0] : 1.0;
    const double f_lo = s.freq_grid[0] - 0.5 * width;
    const double f_hi = s.freq_grid[bins - 1] + 0.5 * width;

    VectorXd out(s.time_grid.size());
    for (Eigen::Index t = 0; t < s.time_grid.size(); ++t) {
        const double f = if_track_hz[t];
        if (f < f_lo || f > f_hi)
            throw InvalidArgumentError("reconstruct_amplitude: IF track leaves the frequency range at t=" +
                                       std::to_string(s.time_grid[t]));
        if (s.boundary_mask[static_cast<std::size_t>(t)]) {
            out[t] = 0.0;
            continue;
        }
        const auto lo = std::max<Eigen::Index>(0, static_cast<Eigen::Index>(std::floor((f - band_halfwidth_hz - f_lo) / width)));
        const auto hi = std::min<Eigen::Index>(bins - 1, static_cast<Eigen::Index>(std::floor((f + band_halfwidth_hz - f_lo) / width)));
        cplx band = 0.0;
        for (Eigen::Index b = lo; b <= hi; ++b) band += s.values(b, t);
        out[t] = std::abs(band) / s.amp_constant;
    }
    return out;
}

namespace {

// Upper envelope of parabolas: g(k) = max_kp [f(kp) - lambda (k - kp)^2],
// with the winning kp recorded per cell (Felzenszwalb-Huttenlocher distance
// transform). O(bins) per call, so the ridge DP allows arbitrary jumps under
// the quadratic penalty.
void quadratic_envelope(const VectorXd& f, double lambda, VectorXd& g, std::vector<int>& arg) {
    const auto n = static_cast<int>(f.size());
    std::vector<int> v(static_cast<std::size_t>(n));
    std::vector<double> z(static_cast<std::size_t>(n) + 1);
    int k = 0;
    v[0] = 0;
    z[0] = -std::numeric_limits<double>::infinity();
    z[1] = std::numeric_limits<double>::infinity();
    auto neg = [&](int i) { return -f[i]; };  // minimize the negated scores
    for (int q = 1; q < n; ++q) {
        double s;
        while (true) {
            const int p = v[static_cast<std::size_t>(k)];
            s = ((neg(q) + lambda * q * q) - (neg(p) + lambda * p * p)) / (2.0 * lambda * (q - p));
            if (s <= z[static_cast<std::size_t>(k)]) {
                --k;
            } else {
                break;
            }
        }
        ++k;
        v[static_cast<std::size_t>(k)] = q;
        z[static_cast<std::size_t>(k)] = s;
        z[static_cast<std::size_t>(k) + 1] = std::numeric_limits<double>::infinity();
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[static_cast<std::size_t>(k) + 1] < q) ++k;
        const int p = v[static_cast<std::size_t>(k)];
        arg[static_cast<std::size_t>(q)] = p;
        g[q] = f[p] - lambda * static_cast<double>(q - p) * static_cast<double>(q - p);
    }
}

}  // namespace

RidgeExtraction extract_ridges(const TvPS& p, int count) {
    require(count >= 1, "extract_ridges: count must be >= 1");
    const Eigen::Index bins = p.values.rows();
    const Eigen::Index ntimes = p.values.cols();
    require(bins >= 2 && ntimes >= 2, "extract_ridges: degenerate tvPS");

    const double width = p.freq_grid[1] - p.freq_grid[0];
    MatrixXd work = p.values;
    const double global_max = work.maxCoeff();

    RidgeExtraction out;
    out.requested = count;
    if (global_max <= 0.0) {
        out.truncated = true;
        return out;
    }

    const double lambda = 2e-3 * global_max;
    const auto clear_bins = std::max<Eigen::Index>(5, static_cast<Eigen::Index>(std::llround(0.25 / width)));

    VectorXd envelope(bins);
    std::vector<int> arg(static_cast<std::size_t>(bins));
    for (int ridge = 0; ridge < count; ++ridge) {
        if (work.maxCoeff() <= 1e-12 * global_max) {
            out.truncated = true;
            break;
        }
        MatrixXd score(bins, ntimes);
        Eigen::MatrixXi back(bins, ntimes);
        score.col(0) = work.col(0);
        back.col(0).setZero();
        VectorXd prev(bins);
        for (Eigen::Index t = 1; t < ntimes; ++t) {
            prev = score.col(t - 1);
            quadratic_envelope(prev, lambda, envelope, arg);
            for (Eigen::Index k = 0; k < bins; ++k) {
                score(k, t) = envelope[k] + work(k, t);
                back(k, t) = arg[static_cast<std::size_t>(k)];
            }
        }
        Eigen::Index k_end;
        score.col(ntimes - 1).maxCoeff(&k_end);
        VectorXd track(ntimes);
        Eigen::Index k = k_end;
        for (Eigen::Index t = ntimes - 1;; --t) {
            track[t] = p.freq_grid[k];
            // Clear a band around the extracted ridge for the next pass.
            const Eigen::Index clo = std::max<Eigen::Index>(0, k - clear_bins);
            const Eigen::Index chi = std::min<Eigen::Index>(bins - 1, k + clear_bins);
            for (Eigen::Index b = clo; b <= chi; ++b) work(b, t) = 0.0;
            if (t == 0) break;
            k = back(k, t);
        }
        out.tracks_hz.push_back(std::move(track));
    }

    std::sort(out.tracks_hz.begin(), out.tracks_hz.end(),
              [](const VectorXd& a, const VectorXd& b) { return a.mean() < b.mean(); });
    return out;
}

}  // namespace conceft::squeeze
