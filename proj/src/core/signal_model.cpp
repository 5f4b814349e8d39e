#include "core/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "core/rng.hpp"

namespace conceft::signal {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;

// Seed streams for derived substreams.
enum Stream : std::uint64_t {
    kStreamAttempt = 0,
    kStreamAmp1 = 1,
    kStreamAmp2 = 2,
    kStreamPhase1 = 3,
    kStreamPhase2 = 4,
    kStreamProfileNoise = 5,
    kStreamProfileIntegrand = 6,
};

Eigen::Index reflect_index(Eigen::Index i, Eigen::Index n) {
    // Reflect at 0 and n-1 until in range.
    while (i < 0 || i >= n) {
        if (i < 0) i = -i;
        if (i >= n) i = 2 * (n - 1) - i;
    }
    return i;
}

VectorXd cumtrapz(const VectorXd& g, double dt) {
    VectorXd out(g.size());
    out[0] = 0.0;
    for (Eigen::Index k = 1; k < g.size(); ++k) out[k] = out[k - 1] + 0.5 * (g[k - 1] + g[k]) * dt;
    return out;
}

}  // namespace

double sample_mean(const VectorXd& x) { return x.mean(); }

double sample_std(const VectorXd& x) {
    require(x.size() >= 2, "sample_std: need at least 2 samples");
    const double m = x.mean();
    const double ss = (x.array() - m).square().sum();
    return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

VectorXd smoothened_brownian(double bandwidth_samples, Eigen::Index n, double rate_hz, std::uint64_t seed) {
    require(bandwidth_samples > 0.0, "smoothened_brownian: bandwidth must be positive");
    require(n >= 2, "smoothened_brownian: need at least 2 samples");
    require(rate_hz > 0.0, "smoothened_brownian: rate must be positive");

    const double dt = 1.0 / rate_hz;
    rng::Engine eng(seed);

    VectorXd path(n);
    path[0] = 0.0;
    const double step = std::sqrt(dt);
    for (Eigen::Index k = 1; k < n; ++k) path[k] = path[k - 1] + step * eng.normal();

    // Normalized Gaussian kernel, radius 5 std.
    const Eigen::Index radius = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::ceil(5.0 * bandwidth_samples)));
    VectorXd kernel(2 * radius + 1);
    for (Eigen::Index i = -radius; i <= radius; ++i)
        kernel[i + radius] = std::exp(-0.5 * static_cast<double>(i) * static_cast<double>(i) /
                                      (bandwidth_samples * bandwidth_samples));
    kernel /= kernel.sum();

    VectorXd out(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        double acc = 0.0;
        for (Eigen::Index i = -radius; i <= radius; ++i) acc += kernel[i + radius] * path[reflect_index(k - i, n)];
        out[k] = acc;
    }
    return out;
}

VectorXd random_profile(const ProfileParams& p, double rate_hz, std::uint64_t seed) {
    require(p.zeta1 >= 0 && p.zeta2 >= 0 && p.zeta3 >= 0 && p.zeta5 >= 0, "random_profile: zeta values must be >= 0");
    require(p.duration_sec > 0, "random_profile: duration must be positive");
    const Eigen::Index n = static_cast<Eigen::Index>(std::llround(p.duration_sec * rate_hz));
    require(n >= 2, "random_profile: grid too short");
    const double dt = 1.0 / rate_hz;

    VectorXd out(n);
    for (Eigen::Index k = 0; k < n; ++k) out[k] = p.zeta1 + p.zeta2 * (static_cast<double>(k) * dt);

    if (p.zeta3 != 0.0) {
        require(p.zeta4 > 0, "random_profile: zeta4 bandwidth must be positive when zeta3 > 0");
        VectorXd phi = smoothened_brownian(p.zeta4, n, rate_hz, rng::derive_seed(seed, kStreamProfileNoise));
        const double norm = phi.cwiseAbs().maxCoeff();
        if (norm > 0.0) out += (p.zeta3 / norm) * phi;
    }
    if (p.zeta5 != 0.0) {
        require(p.zeta6 > 0, "random_profile: zeta6 bandwidth must be positive when zeta5 > 0");
        VectorXd phi = smoothened_brownian(p.zeta6, n, rate_hz, rng::derive_seed(seed, kStreamProfileIntegrand));
        const double norm = phi.cwiseAbs().maxCoeff();
        if (norm > 0.0) out += p.zeta5 * cumtrapz(phi / norm, dt);
    }
    return out;
}

PhaseTrack random_phase_profile(double zeta2, double zeta5, double zeta6, double duration_sec, double rate_hz,
                                std::uint64_t seed) {
    require(zeta2 > 0, "random_phase_profile: zeta2 must be positive");
    const Eigen::Index n = static_cast<Eigen::Index>(std::llround(duration_sec * rate_hz));
    const double dt = 1.0 / rate_hz;

    PhaseTrack track;
    track.if_hz = VectorXd::Constant(n, zeta2);
    if (zeta5 != 0.0) {
        VectorXd phi = smoothened_brownian(zeta6, n, rate_hz, rng::derive_seed(seed, kStreamProfileIntegrand));
        const double norm = phi.cwiseAbs().maxCoeff();
        if (norm > 0.0) track.if_hz += (zeta5 / norm) * phi;
    }
    track.phase_cycles = cumtrapz(track.if_hz, dt);
    return track;
}

namespace {

SampledSignal assemble_signal(const GroundTruth& gt, Eigen::Index n, double rate_hz) {
    SampledSignal s;
    s.rate_hz = rate_hz;
    s.t0 = gt.t0;
    s.samples = VectorXd::Zero(n);
    for (const auto& comp : gt.components) {
        for (Eigen::Index k = 0; k < n; ++k) {
            const double t = gt.t0 + static_cast<double>(k) / rate_hz;
            if (comp.alive(t)) s.samples[k] += comp.amplitude[k] * std::cos(kTwoPi * comp.phase_cycles[k]);
        }
    }
    return s;
}

// Minimum of the ordered gap ratio (f_hi - f_lo) / (f_hi + f_lo) over the
// components' overlap, with the ordering fixed by the mean IF; a value <= 0
// means the tracks touch or cross somewhere on the overlap.
double overlap_separation(const ImtComponent& a, const ImtComponent& b, double t0, double rate_hz) {
    const double lo = std::max(a.support_begin, b.support_begin);
    const double hi = std::min(a.support_end, b.support_end);
    if (lo > hi) return 1.0;  // disjoint supports: unconstrained

    const Eigen::Index n = a.if_hz.size();
    double mean_a = 0.0, mean_b = 0.0;
    int count = 0;
    for (Eigen::Index k = 0; k < n; ++k) {
        const double t = t0 + static_cast<double>(k) / rate_hz;
        if (t < lo || t > hi) continue;
        mean_a += a.if_hz[k];
        mean_b += b.if_hz[k];
        ++count;
    }
    if (count == 0) return 1.0;

    const bool a_is_low = mean_a <= mean_b;
    double dmin = 1.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        const double t = t0 + static_cast<double>(k) / rate_hz;
        if (t < lo || t > hi) continue;
        const double f_low = a_is_low ? a.if_hz[k] : b.if_hz[k];
        const double f_high = a_is_low ? b.if_hz[k] : a.if_hz[k];
        dmin = std::min(dmin, (f_high - f_low) / (f_high + f_low));
    }
    return dmin;
}

}  // namespace

GeneratedSignal make_class_c_signal(std::uint64_t seed, double rate_hz, double duration_sec) {
    require(rate_hz > 0 && duration_sec > 0, "make_class_c_signal: bad grid");
    const Eigen::Index n = static_cast<Eigen::Index>(std::llround(duration_sec * rate_hz));

    constexpr int kMaxAttempts = 1000;
    int rejected = 0;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        const std::uint64_t sub = rng::derive_seed(seed, kStreamAttempt, static_cast<std::uint64_t>(attempt));

        ProfileParams amp_params;
        amp_params.zeta1 = 2.0;
        amp_params.zeta3 = 1.0;
        amp_params.zeta4 = 200.0;
        amp_params.duration_sec = duration_sec;

        ImtComponent c1;
        c1.amplitude = random_profile(amp_params, rate_hz, rng::derive_seed(sub, kStreamAmp1));
        PhaseTrack p1 = random_phase_profile(10.0, 6.0, 400.0, duration_sec, rate_hz, rng::derive_seed(sub, kStreamPhase1));
        c1.phase_cycles = std::move(p1.phase_cycles);
        c1.if_hz = std::move(p1.if_hz);
        c1.support_begin = 18.0;
        c1.support_end = 60.0;

        ImtComponent c2;
        c2.amplitude = random_profile(amp_params, rate_hz, rng::derive_seed(sub, kStreamAmp2));
        PhaseTrack p2 = random_phase_profile(kTwoPi, 2.0, 300.0, duration_sec, rate_hz, rng::derive_seed(sub, kStreamPhase2));
        c2.phase_cycles = std::move(p2.phase_cycles);
        c2.if_hz = std::move(p2.if_hz);
        c2.support_begin = 0.0;
        c2.support_end = 36.0;

        const double d = overlap_separation(c2, c1, 0.0, rate_hz);
        if (d <= 0.0) {
            ++rejected;
            continue;
        }

        GeneratedSignal out;
        out.truth.components = {std::move(c1), std::move(c2)};
        out.truth.rate_hz = rate_hz;
        out.truth.t0 = 0.0;
        out.truth.separation_d = d;
        out.signal = assemble_signal(out.truth, n, rate_hz);
        out.rejected_seeds = rejected;
        return out;
    }
    throw NumericError("make_class_c_signal: could not find a non-crossing realization after 1000 attempts");
}

GeneratedSignal deterministic_signal(double rate_hz, double duration_sec) {
    require(rate_hz > 0 && duration_sec > 0, "deterministic_signal: bad grid");
    const Eigen::Index n = static_cast<Eigen::Index>(std::llround(duration_sec * rate_hz));

    ImtComponent c1, c2, c3;
    c1.amplitude.resize(n);
    c1.phase_cycles.resize(n);
    c1.if_hz.resize(n);
    c1.support_begin = 10.0;
    c1.support_end = 48.0;
    c2 = c1;
    c2.support_begin = 0.0;
    c2.support_end = duration_sec;
    c3 = c1;
    c3.support_begin = 15.0;
    c3.support_end = 60.0;

    for (Eigen::Index k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) / rate_hz;
        const double ca = std::cos(kPi * (t - 10.0) / 20.0);
        c1.amplitude[k] = 1.0 + 0.3 * ca * ca;
        c1.phase_cycles[k] = (kPi / 3.0 + 5.0 * t + t * t / 50.0) / kTwoPi;
        c1.if_hz[k] = (5.0 + t / 25.0) / kTwoPi;

        const double sa = std::sin(kPi * t / 60.0);
        c2.amplitude[k] = 0.4 + 0.9 * sa * sa;
        c2.phase_cycles[k] = (12.0 * t + std::sin(kPi * t / 6.0)) / kTwoPi;
        c2.if_hz[k] = (12.0 + (kPi / 6.0) * std::cos(kPi * t / 6.0)) / kTwoPi;

        const double u = t - 35.0;
        c3.amplitude[k] = 1.2;
        c3.phase_cycles[k] = (17.0 * t + u * u * u / 800.0) / kTwoPi;
        c3.if_hz[k] = (17.0 + 3.0 * u * u / 800.0) / kTwoPi;
    }

    GeneratedSignal out;
    out.truth.components = {std::move(c1), std::move(c2), std::move(c3)};
    out.truth.rate_hz = rate_hz;
    out.truth.t0 = 0.0;
    double d = 1.0;
    for (std::size_t i = 0; i + 1 < out.truth.components.size(); ++i)
        d = std::min(d, overlap_separation(out.truth.components[i], out.truth.components[i + 1], 0.0, rate_hz));
    out.truth.separation_d = d;
    out.signal = assemble_signal(out.truth, n, rate_hz);
    return out;
}

VectorXd raw_noise(NoiseKind kind, Eigen::Index n, std::uint64_t seed) {
    rng::Engine eng(seed);
    VectorXd xi(n);
    switch (kind) {
        case NoiseKind::GaussianWhite:
            for (Eigen::Index k = 0; k < n; ++k) xi[k] = eng.normal();
            break;
        case NoiseKind::Arma11: {
            // a(z) = 0.5z + 1, b(z) = -0.5z + 1, Student-t4 innovations:
            // x_t = -0.5 x_{t-1} + w_t - 0.5 w_{t-1}
            constexpr Eigen::Index burn = 1024;
            double x_prev = 0.0, w_prev = 0.0;
            for (Eigen::Index k = -burn; k < n; ++k) {
                const double w = eng.student_t4();
                const double x = -0.5 * x_prev + w - 0.5 * w_prev;
                x_prev = x;
                w_prev = w;
                if (k >= 0) xi[k] = x;
            }
            break;
        }
        case NoiseKind::Poisson:
            // lambda = 1, not mean-centered: the DC offset survives into Y.
            for (Eigen::Index k = 0; k < n; ++k) xi[k] = static_cast<double>(eng.poisson(1.0));
            break;
        case NoiseKind::StudentT4Iid:
            for (Eigen::Index k = 0; k < n; ++k) xi[k] = eng.student_t4();
            break;
    }
    return xi;
}

NoisyResult add_noise(const SampledSignal& s, const NoiseSpec& spec) {
    s.validate();
    const double std_s = sample_std(s.samples);
    if (std_s <= 0.0) throw NumericError("add_noise: zero-variance signal, cannot target an SNR");

    VectorXd xi = raw_noise(spec.kind, s.size(), spec.seed);
    const double std_xi = sample_std(xi);
    if (std_xi <= 0.0) throw NumericError("add_noise: degenerate noise realization (zero variance)");

    // 20 log10(std(s)/(sigma std(xi))) = target  =>  sigma in closed form.
    const double sigma = std_s / (std_xi * std::pow(10.0, spec.target_snr_db / 20.0));

    NoisyResult out;
    out.noisy = s;
    out.noisy.samples += sigma * xi;
    out.sigma = sigma;
    out.realized_snr_db = 20.0 * std::log10(std_s / (sigma * std_xi));
    return out;
}

TvPS ideal_tvps(const GroundTruth& gt, const VectorXd& freq_bin_centers, const VectorXd& time_grid) {
    require(freq_bin_centers.size() >= 1, "ideal_tvps: empty frequency grid");
    const Eigen::Index bins = freq_bin_centers.size();
    const double width = bins > 1 ? freq_bin_centers[1] - freq_bin_centers[0] : 1.0;
    const double f_lo = freq_bin_centers[0] - 0.5 * width;

    TvPS out;
    out.freq_grid = freq_bin_centers;
    out.time_grid = time_grid;
    out.values = MatrixXd::Zero(bins, time_grid.size());

    for (Eigen::Index k = 0; k < time_grid.size(); ++k) {
        const double t = time_grid[k];
        const auto i = static_cast<Eigen::Index>(std::llround((t - gt.t0) * gt.rate_hz));
        require(i >= 0 && !gt.components.empty() && i < gt.components.front().if_hz.size(),
                "ideal_tvps: time grid outside ground truth");
        for (std::size_t c = 0; c < gt.components.size(); ++c) {
            const auto& comp = gt.components[c];
            if (!comp.alive(t)) continue;
            const double f = comp.if_hz[i];
            const auto bin = static_cast<Eigen::Index>(std::floor((f - f_lo) / width));
            if (bin < 0 || bin >= bins) {
                std::ostringstream msg;
                msg << "ideal_tvps: component " << (c + 1) << " IF " << f << " Hz outside frequency grid at t=" << t;
                throw InvalidArgumentError(msg.str());
            }
            const double a = comp.amplitude[i];
            out.values(bin, k) += a * a;
        }
    }
    return out;
}

double compute_separation(const GroundTruth& gt) {
    if (gt.components.size() < 2) return 1.0;
    std::vector<const ImtComponent*> sorted;
    for (const auto& c : gt.components) sorted.push_back(&c);
    std::sort(sorted.begin(), sorted.end(), [](const ImtComponent* a, const ImtComponent* b) {
        return a->if_hz.mean() < b->if_hz.mean();
    });
    double d = 1.0;
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
        d = std::min(d, overlap_separation(*sorted[i], *sorted[i + 1], gt.t0, gt.rate_hz));
    return d;
}

double min_ground_truth_if(const GroundTruth& gt) {
    double fmin = std::numeric_limits<double>::infinity();
    for (const auto& comp : gt.components) {
        const Eigen::Index n = comp.if_hz.size();
        for (Eigen::Index k = 0; k < n; ++k) {
            const double t = gt.t0 + static_cast<double>(k) / gt.rate_hz;
            if (comp.alive(t)) fmin = std::min(fmin, comp.if_hz[k]);
        }
    }
    return fmin;
}

}  // namespace conceft::signal
