#include "core/transforms.hpp"

#include <cmath>

#include "core/fft.hpp"
#include "core/threading.hpp"

namespace conceft {

ScaleGrid ScaleGrid::geometric(double freq_min_hz, double freq_max_hz, double voices_per_octave) {
    require(freq_min_hz > 0.0 && freq_max_hz > freq_min_hz, "ScaleGrid: need 0 < freq_min < freq_max");
    require(voices_per_octave >= 1.0, "ScaleGrid: voices_per_octave must be >= 1");

    ScaleGrid g;
    g.ratio = std::pow(2.0, 1.0 / voices_per_octave);
    const double a_min = 1.0 / freq_max_hz;
    const double a_max = 1.0 / freq_min_hz;
    const auto count =
        static_cast<Eigen::Index>(std::ceil(voices_per_octave * std::log2(a_max / a_min) - 1e-9)) + 1;
    g.scales.resize(count);
    const double log_ratio = std::log(g.ratio);
    for (Eigen::Index k = 0; k < count; ++k) g.scales[k] = a_min * std::exp(static_cast<double>(k) * log_ratio);
    g.validate();
    return g;
}

void ScaleGrid::validate() const {
    require(scales.size() >= 2, "ScaleGrid: need at least 2 scales");
    require(scales[0] > 0.0, "ScaleGrid: scales must be positive");
    for (Eigen::Index k = 0; k + 1 < scales.size(); ++k) {
        require(scales[k + 1] > scales[k], "ScaleGrid: scales must be strictly increasing");
        const double r = scales[k + 1] / scales[k];
        require(std::abs(r - ratio) <= 1e-12 * ratio, "ScaleGrid: spacing is not geometric");
    }
}

}  // namespace conceft

namespace conceft::tf {

namespace {

VectorXd time_grid_of(const SampledSignal& s, int hop) {
    const auto nout = (s.size() + hop - 1) / hop;
    VectorXd t(nout);
    for (Eigen::Index i = 0; i < nout; ++i) t[i] = s.time(i * hop);
    return t;
}

TFMatrix stft_impl(const SampledSignal& s, const tapers::ReferenceFamily& fam, int taper_index, const StftParams& p,
                   bool derivative) {
    s.validate();
    require(fam.kind == tapers::FamilyKind::HermiteWindows, "stft: family must be Hermite windows");
    require(taper_index >= 0 && taper_index < fam.count, "stft: taper index out of range");
    require(std::abs(fam.rate_hz - s.rate_hz) < 1e-9 * s.rate_hz, "stft: family discretized at a different rate");
    require(p.hop >= 1, "stft: hop must be >= 1");

    const Eigen::Index n = s.size();
    const Eigen::Index wlen = fam.grid.size();
    const auto m_half = (wlen - 1) / 2;
    if (wlen > n) throw InvalidArgumentError("stft: taper is longer than the signal");
    const auto fft_size = static_cast<Eigen::Index>(p.fft_size);
    require(fft_size >= wlen, "stft: fft_size must hold the taper");

    const double dt = s.dt();
    const double dfreq = s.rate_hz / static_cast<double>(fft_size);
    Eigen::Index nbins = fft_size / 2 + 1;
    if (p.freq_max_hz > 0.0) {
        require(p.freq_max_hz <= s.rate_hz / 2.0 + 1e-12, "stft: frequency grid beyond Nyquist");
        nbins = std::min<Eigen::Index>(nbins, static_cast<Eigen::Index>(std::floor(p.freq_max_hz / dfreq)) + 1);
    }

    TFMatrix out;
    out.axis_kind = AxisKind::Frequency;
    out.rate_hz = s.rate_hz;
    out.time_grid = time_grid_of(s, p.hop);
    out.axis_grid.resize(nbins);
    for (Eigen::Index mb = 0; mb < nbins; ++mb) out.axis_grid[mb] = static_cast<double>(mb) * dfreq;
    out.row_halfwidth_sec = VectorXd::Constant(nbins, fam.time_halfwidth_sec);
    const Eigen::Index ntimes = out.time_grid.size();
    out.values.resize(nbins, ntimes);

    const VectorXd& win = fam.tapers.col(taper_index);
    const VectorXd& dwin = fam.d_tapers.col(taper_index);

    fft::Fft plan(static_cast<std::size_t>(fft_size));
    parallel_for(ntimes, p.threads, [&](long long begin, long long end) {
        fft::Buffer buf(static_cast<std::size_t>(fft_size));
        fft::Buffer spec(static_cast<std::size_t>(fft_size));
        for (long long col = begin; col < end; ++col) {
            const Eigen::Index center = static_cast<Eigen::Index>(col) * p.hop;
            for (Eigen::Index i = 0; i < fft_size; ++i) buf[static_cast<std::size_t>(i)] = 0.0;
            for (Eigen::Index k = -m_half; k <= m_half; ++k) {
                const Eigen::Index src = center + k;
                if (src < 0 || src >= n) continue;  // zero padding beyond the edges
                const double w = derivative ? dwin[k + m_half] : win[k + m_half];
                const auto slot = static_cast<std::size_t>((k % fft_size + fft_size) % fft_size);
                buf[slot] = s.samples[src] * w;
            }
            plan.forward(buf.data(), spec.data());
            for (Eigen::Index mb = 0; mb < nbins; ++mb)
                out.values(mb, static_cast<Eigen::Index>(col)) = spec[static_cast<std::size_t>(mb)] * dt;
        }
    });
    return out;
}

}  // namespace

TFMatrix stft(const SampledSignal& s, const tapers::ReferenceFamily& fam, int taper_index, const StftParams& p) {
    return stft_impl(s, fam, taper_index, p, /*derivative=*/false);
}

TFMatrix d_stft(const SampledSignal& s, const tapers::ReferenceFamily& fam, int taper_index, const StftParams& p) {
    // With V(t, eta) = Int f(t+u) h(u) e^{-i 2 pi eta u} du, integration by
    // parts gives d/dt V = -V^{(h')} + i 2 pi eta V.
    TFMatrix v = stft_impl(s, fam, taper_index, p, /*derivative=*/false);
    TFMatrix dv = stft_impl(s, fam, taper_index, p, /*derivative=*/true);
    for (Eigen::Index mb = 0; mb < dv.axis_grid.size(); ++mb)
        dv.values.row(mb) = cplx(0.0, kTwoPi * dv.axis_grid[mb]) * v.values.row(mb) - dv.values.row(mb);
    return dv;
}

namespace {

struct PaddedSpectrum {
    std::vector<cplx> f_hat;  // length nfft, forward DFT of the padded signal
    Eigen::Index pad = 0;
    Eigen::Index nfft = 0;
};

PaddedSpectrum padded_spectrum(const SampledSignal& s, const tapers::ReferenceFamily& fam, const ScaleGrid& grid) {
    const Eigen::Index n = s.size();
    const double a_max = grid.scales[grid.scales.size() - 1];
    // Zero padding that holds 4 envelope stds of the widest scaled wavelet.
    const auto pad = static_cast<Eigen::Index>(std::ceil(4.0 * fam.time_halfwidth_sec * a_max * s.rate_hz));
    const auto nfft = static_cast<Eigen::Index>(fft::next_pow2(static_cast<std::size_t>(n + 2 * pad)));

    PaddedSpectrum out;
    out.pad = (nfft - n) / 2;
    out.nfft = nfft;
    std::vector<cplx> buf(static_cast<std::size_t>(nfft), cplx(0.0, 0.0));
    for (Eigen::Index i = 0; i < n; ++i) buf[static_cast<std::size_t>(out.pad + i)] = s.samples[i];
    out.f_hat.resize(static_cast<std::size_t>(nfft));
    fft::Fft plan(static_cast<std::size_t>(nfft));
    plan.forward(buf.data(), out.f_hat.data());
    return out;
}

void cwt_rows(const PaddedSpectrum& ps, const SampledSignal& s, const tapers::ReferenceFamily& fam,
              const VectorXd& weights, const ScaleGrid& grid, bool derivative, int threads, TFMatrix& out) {
    const Eigen::Index n = s.size();
    const Eigen::Index nfft = ps.nfft;
    const Eigen::Index nscales = grid.scales.size();
    const double dfreq = s.rate_hz / static_cast<double>(nfft);
    const double nyquist = s.rate_hz / 2.0;
    const Eigen::Index npos = nfft / 2;  // positive-frequency bins 1..npos

    out.axis_kind = AxisKind::Scale;
    out.rate_hz = s.rate_hz;
    out.axis_grid = grid.scales;
    out.time_grid = time_grid_of(s, 1);
    out.values.resize(nscales, n);
    out.row_halfwidth_sec.resize(nscales);
    for (Eigen::Index r = 0; r < nscales; ++r)
        out.row_halfwidth_sec[r] = fam.time_halfwidth_sec * grid.scales[r];

    std::vector<int> invalid(static_cast<std::size_t>(nscales), 0);
    fft::Fft plan(static_cast<std::size_t>(nfft));
    const double inv_n = 1.0 / static_cast<double>(nfft);

    parallel_for(nscales, threads, [&](long long begin, long long end) {
        fft::Buffer spec(static_cast<std::size_t>(nfft));
        fft::Buffer row(static_cast<std::size_t>(nfft));
        for (long long r = begin; r < end; ++r) {
            const double a = grid.scales[r];
            // The scaled wavelet must fit under Nyquist.
            if (fam.freq_support_hi / a > nyquist) {
                out.values.row(r).setZero();
                invalid[static_cast<std::size_t>(r)] = 1;
                continue;
            }
            const double sqrt_a = std::sqrt(a);
            spec[0] = 0.0;
            for (Eigen::Index m = 1; m <= npos; ++m) {
                const double xi = static_cast<double>(m) * dfreq;
                double taper = 0.0;
                for (int j = 0; j < fam.count; ++j)
                    if (weights[j] != 0.0) taper += weights[j] * fam.morse_eval(j, a * xi);
                cplx factor = sqrt_a * taper;
                if (derivative) factor *= cplx(0.0, kTwoPi * xi);
                spec[static_cast<std::size_t>(m)] = ps.f_hat[static_cast<std::size_t>(m)] * factor;
            }
            for (Eigen::Index m = npos + 1; m < nfft; ++m) spec[static_cast<std::size_t>(m)] = 0.0;
            plan.backward(spec.data(), row.data());
            for (Eigen::Index i = 0; i < n; ++i)
                out.values(r, i) = row[static_cast<std::size_t>(ps.pad + i)] * inv_n;
        }
    });
    for (Eigen::Index r = 0; r < nscales; ++r)
        if (invalid[static_cast<std::size_t>(r)]) out.invalid_rows.push_back(static_cast<int>(r));
}

}  // namespace

TFMatrix cwt_combined(const SampledSignal& s, const tapers::ReferenceFamily& fam, const VectorXd& weights,
                      const ScaleGrid& grid, bool derivative, int threads) {
    s.validate();
    grid.validate();
    require(fam.kind == tapers::FamilyKind::MorseWavelets, "cwt: family must be Morse wavelets");
    require(weights.size() == fam.count, "cwt: weight vector length must equal J");

    const PaddedSpectrum ps = padded_spectrum(s, fam, grid);
    TFMatrix out;
    cwt_rows(ps, s, fam, weights, grid, derivative, threads, out);
    return out;
}

TFMatrix cwt(const SampledSignal& s, const tapers::ReferenceFamily& fam, int order, const ScaleGrid& grid,
             int threads) {
    require(order >= 0 && order < fam.count, "cwt: wavelet order out of range");
    VectorXd w = VectorXd::Zero(fam.count);
    w[order] = 1.0;
    return cwt_combined(s, fam, w, grid, /*derivative=*/false, threads);
}

TFMatrix d_cwt(const SampledSignal& s, const tapers::ReferenceFamily& fam, int order, const ScaleGrid& grid,
               int threads) {
    require(order >= 0 && order < fam.count, "d_cwt: wavelet order out of range");
    VectorXd w = VectorXd::Zero(fam.count);
    w[order] = 1.0;
    return cwt_combined(s, fam, w, grid, /*derivative=*/true, threads);
}

TransformSet stft_set(const SampledSignal& s, const tapers::ReferenceFamily& fam, const StftParams& p) {
    TransformSet set;
    set.w.resize(static_cast<std::size_t>(fam.count));
    set.dw.resize(static_cast<std::size_t>(fam.count));
    // One window FFT and one derivative-window FFT per taper per column;
    // d/dt V = -V^{(h')} + i 2 pi eta V completes the derivative transform.
    for (int j = 0; j < fam.count; ++j) {
        set.w[static_cast<std::size_t>(j)] = stft(s, fam, j, p);
        TFMatrix dv = stft_impl(s, fam, j, p, /*derivative=*/true);
        for (Eigen::Index mb = 0; mb < dv.axis_grid.size(); ++mb)
            dv.values.row(mb) =
                cplx(0.0, kTwoPi * dv.axis_grid[mb]) * set.w[static_cast<std::size_t>(j)].values.row(mb) -
                dv.values.row(mb);
        set.dw[static_cast<std::size_t>(j)] = std::move(dv);
    }
    return set;
}

TransformSet cwt_set(const SampledSignal& s, const tapers::ReferenceFamily& fam, const ScaleGrid& grid, int threads) {
    s.validate();
    grid.validate();
    require(fam.kind == tapers::FamilyKind::MorseWavelets, "cwt_set: family must be Morse wavelets");

    const PaddedSpectrum ps = padded_spectrum(s, fam, grid);
    TransformSet set;
    set.w.resize(static_cast<std::size_t>(fam.count));
    set.dw.resize(static_cast<std::size_t>(fam.count));
    for (int j = 0; j < fam.count; ++j) {
        VectorXd w = VectorXd::Zero(fam.count);
        w[j] = 1.0;
        cwt_rows(ps, s, fam, w, grid, /*derivative=*/false, threads, set.w[static_cast<std::size_t>(j)]);
        cwt_rows(ps, s, fam, w, grid, /*derivative=*/true, threads, set.dw[static_cast<std::size_t>(j)]);
    }
    return set;
}

}  // namespace conceft::tf
