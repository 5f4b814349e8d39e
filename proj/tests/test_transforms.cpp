#include <doctest.h>

#include <cmath>

#include "core/transforms.hpp"
#include "support/oracles.hpp"

using namespace conceft;
using namespace conceft::tf;

namespace {

SampledSignal tone(double freq_hz, double rate_hz, Eigen::Index n, double amp = 1.0) {
    SampledSignal s;
    s.rate_hz = rate_hz;
    s.samples.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) s.samples[i] = amp * std::cos(kTwoPi * freq_hz * static_cast<double>(i) / rate_hz);
    return s;
}

}  // namespace

TEST_CASE("scale grid is geometric and covers the band") {
    const auto g = ScaleGrid::geometric(0.5, 40.0, 32.0);
    g.validate();
    CHECK(g.scales[0] == doctest::Approx(1.0 / 40.0).epsilon(1e-12));
    CHECK(g.scales[g.scales.size() - 1] >= 1.0 / 0.5 - 1e-9);
    CHECK(g.scales.size() == 204);
}

TEST_CASE("stft magnitude peaks at the tone frequency and matches the quadrature oracle") {
    const double rate = 64.0;
    const double f0 = 8.0;
    const auto s = tone(f0, rate, 256);
    const auto fam = tapers::hermite_windows(1, 0.15, rate);
    StftParams p;
    p.fft_size = 256;
    const auto v = stft(s, fam, 0, p);

    // interior column
    const Eigen::Index t = 128;
    Eigen::Index best = 0;
    VectorXd mags(v.axis_grid.size());
    for (Eigen::Index m = 0; m < v.axis_grid.size(); ++m) mags[m] = std::abs(v.values(m, t));
    mags.maxCoeff(&best);
    CHECK(v.axis_grid[best] == doctest::Approx(f0).epsilon(1e-9));

    // direct quadrature of the windowed integral, several (t, eta) points
    for (Eigen::Index tc : {static_cast<Eigen::Index>(96), static_cast<Eigen::Index>(128), static_cast<Eigen::Index>(160)}) {
        for (Eigen::Index m : {static_cast<Eigen::Index>(20), static_cast<Eigen::Index>(32), best}) {
            const cplx direct = oracles::stft_point(s, fam.grid, fam.tapers.col(0), tc, v.axis_grid[m]);
            CHECK(std::abs(direct - v.values(m, tc)) < 1e-10);
        }
    }
}

TEST_CASE("stft of the zero signal is zero") {
    SampledSignal s;
    s.rate_hz = 64.0;
    s.samples = VectorXd::Zero(256);
    const auto fam = tapers::hermite_windows(2, 0.15, 64.0);
    const auto v = stft(s, fam, 1, StftParams{.fft_size = 256});
    CHECK(v.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("stft is additive") {
    const double rate = 64.0;
    const auto f = tone(8.0, rate, 256);
    const auto g = tone(3.0, rate, 256, 0.7);
    SampledSignal sum = f;
    sum.samples += g.samples;
    const auto fam = tapers::hermite_windows(1, 0.15, rate);
    StftParams p;
    p.fft_size = 256;
    const auto vf = stft(f, fam, 0, p);
    const auto vg = stft(g, fam, 0, p);
    const auto vs = stft(sum, fam, 0, p);
    CHECK((vs.values - vf.values - vg.values).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("stft rejects a taper longer than the signal") {
    const auto s = tone(8.0, 64.0, 40);
    const auto fam = tapers::hermite_windows(1, 0.25, 64.0);
    CHECK_THROWS_AS(stft(s, fam, 0, StftParams{.fft_size = 256}), InvalidArgumentError);
}

TEST_CASE("cwt matches the pure-tone formula and the inner-product oracle") {
    const double rate = 64.0;
    const double f0 = 8.0;
    const auto s = tone(f0, rate, 512);
    const auto fam = tapers::morse_wavelets(30.0, 9.0, 2);
    const auto grid = ScaleGrid::geometric(2.0, 24.0, 16.0);
    const auto w = cwt(s, fam, 0, grid, 1);

    // W(a,b) ~ (1/2) sqrt(a) psi_hat(a f0) e^{i 2 pi f0 b} at interior b
    double worst_rel = 0.0;
    for (Eigen::Index r = 0; r < grid.scales.size(); ++r) {
        const double a = grid.scales[r];
        const double envelope = 0.5 * std::sqrt(a) * fam.morse_eval(0, a * f0);
        if (envelope < 1e-3) continue;  // compare on the ridge only
        for (Eigen::Index i = 200; i <= 312; i += 16) {
            const double b = s.time(i);
            const cplx expect = envelope * std::polar(1.0, kTwoPi * f0 * b);
            worst_rel = std::max(worst_rel, std::abs(w.values(r, i) - expect) / std::abs(expect));
        }
    }
    CHECK(worst_rel < 1e-6);

    // independent time-domain inner product at a few points
    for (Eigen::Index r : {static_cast<Eigen::Index>(10), static_cast<Eigen::Index>(20)}) {
        const cplx direct = oracles::cwt_point(s, fam, 0, grid.scales[r], s.time(256));
        CHECK(std::abs(direct - w.values(r, 256)) < 1e-6);
    }
}

TEST_CASE("cwt energy away from the wavelet support is negligible") {
    // Gaussian-enveloped tone: its spectrum is concentrated, so any mass at
    // scales far from the wavelet support would be the transform's fault.
    const double rate = 64.0;
    const double f0 = 8.0;
    const Eigen::Index n = 512;
    SampledSignal s;
    s.rate_hz = rate;
    s.samples.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / rate;
        const double env = std::exp(-0.5 * (t - 4.0) * (t - 4.0));
        s.samples[i] = env * std::cos(kTwoPi * f0 * t);
    }
    const auto fam = tapers::morse_wavelets(30.0, 9.0, 1);
    const auto grid = ScaleGrid::geometric(1.0, 30.0, 16.0);
    const auto w = cwt(s, fam, 0, grid, 1);

    double on_support = 0.0, off_support = 0.0;
    for (Eigen::Index r = 0; r < grid.scales.size(); ++r) {
        const double arg = grid.scales[r] * f0;  // rescaled axis, support around 1
        double row_max = 0.0;
        for (Eigen::Index i = 128; i < 384; ++i) row_max = std::max(row_max, std::abs(w.values(r, i)));
        if (arg > 0.6 && arg < 1.6)
            on_support = std::max(on_support, row_max);
        else if (arg < 0.4 || arg > 2.2)
            off_support = std::max(off_support, row_max);
    }
    CHECK(off_support < 1e-3 * on_support);
}

TEST_CASE("cwt scales linearly, exactly for power-of-two factors") {
    const auto s = tone(8.0, 64.0, 256);
    SampledSignal s2 = s;
    s2.samples *= 2.0;
    const auto fam = tapers::morse_wavelets(30.0, 9.0, 1);
    const auto grid = ScaleGrid::geometric(4.0, 16.0, 8.0);
    const auto w1 = cwt(s, fam, 0, grid, 1);
    const auto w2 = cwt(s2, fam, 0, grid, 1);
    CHECK((w2.values - 2.0 * w1.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("taper combination identity: W of a combined wavelet is the weighted sum") {
    const auto s = tone(6.0, 64.0, 256);
    const auto fam = tapers::morse_wavelets(30.0, 9.0, 3);
    const auto grid = ScaleGrid::geometric(2.0, 20.0, 8.0);
    VectorXd r(3);
    r << 0.48, -0.6, 0.64;
    const auto combined = cwt_combined(s, fam, r, grid, false, 1);
    MatrixXcd expect = r[0] * cwt(s, fam, 0, grid, 1).values;
    expect += r[1] * cwt(s, fam, 1, grid, 1).values;
    expect += r[2] * cwt(s, fam, 2, grid, 1).values;
    CHECK((combined.values - expect).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("derivative transform recovers the tone frequency from the phase ratio") {
    const double rate = 64.0;
    const double f0 = 8.0;
    const auto s = tone(f0, rate, 512);
    const auto fam = tapers::morse_wavelets(30.0, 9.0, 1);
    const auto grid = ScaleGrid::geometric(4.0, 16.0, 16.0);
    const auto w = cwt(s, fam, 0, grid, 1);
    const auto dw = d_cwt(s, fam, 0, grid, 1);

    // dominant scale at an interior time
    const Eigen::Index t = 256;
    Eigen::Index r = 0;
    VectorXd mags(grid.scales.size());
    for (Eigen::Index k = 0; k < grid.scales.size(); ++k) mags[k] = std::abs(w.values(k, t));
    mags.maxCoeff(&r);
    const cplx ratio = dw.values(r, t) / w.values(r, t);
    const double omega = (-cplx(0, 1) * ratio).real() / kTwoPi;
    CHECK(omega == doctest::Approx(f0).epsilon(0.01));
}

TEST_CASE("derivative transform agrees with central differences in b") {
    // smooth low-frequency two-tone signal, oversampled so the second-order
    // finite-difference truncation sits below the 1e-3 relative target
    const double rate = 320.0;
    SampledSignal s = tone(2.0, rate, 1280);
    s.samples += tone(3.0, rate, 1280, 0.5).samples;
    const auto fam = tapers::morse_wavelets(30.0, 9.0, 1);
    const auto grid = ScaleGrid::geometric(1.5, 5.0, 8.0);
    const auto w = cwt(s, fam, 0, grid, 1);
    const auto dw = d_cwt(s, fam, 0, grid, 1);
    const double dt = 1.0 / rate;

    double worst_rel = 0.0;
    const double scale_ref = dw.values.cwiseAbs().maxCoeff();
    for (Eigen::Index r = 0; r < grid.scales.size(); ++r)
        for (Eigen::Index i = 1; i + 1 < s.size(); ++i) {
            const cplx fd = (w.values(r, i + 1) - w.values(r, i - 1)) / (2.0 * dt);
            worst_rel = std::max(worst_rel, std::abs(fd - dw.values(r, i)) / scale_ref);
        }
    CHECK(worst_rel < 1e-3);
}

TEST_CASE("cwt derivative of a constant vanishes away from the edges") {
    SampledSignal s;
    s.rate_hz = 64.0;
    s.samples = VectorXd::Constant(512, 3.25);
    const auto fam = tapers::morse_wavelets(30.0, 9.0, 1);
    // keep the scaled wavelets short so the interior is many envelope stds
    // from the zero-padding edges
    const auto grid = ScaleGrid::geometric(8.0, 16.0, 8.0);
    const auto dw = d_cwt(s, fam, 0, grid, 1);
    double interior = 0.0;
    for (Eigen::Index r = 0; r < grid.scales.size(); ++r)
        for (Eigen::Index i = 200; i < 312; ++i) interior = std::max(interior, std::abs(dw.values(r, i)));
    CHECK(interior < 1e-10);
}

TEST_CASE("cwt flags scales beyond the resolvable band") {
    const auto s = tone(8.0, 64.0, 256);
    const auto fam = tapers::morse_wavelets(30.0, 9.0, 1);
    // pseudo-frequencies up to 30 Hz on a 64 Hz signal: upper rows exceed
    // Nyquist once the wavelet support (~1.5x) is included
    const auto grid = ScaleGrid::geometric(1.0, 30.0, 8.0);
    const auto w = cwt(s, fam, 0, grid, 1);
    CHECK(!w.invalid_rows.empty());
    for (int r : w.invalid_rows) CHECK(w.values.row(r).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("doubling the scale grid density leaves shared scales unchanged") {
    const auto s = tone(6.0, 64.0, 512);
    const auto fam = tapers::morse_wavelets(30.0, 9.0, 1);
    const auto coarse = ScaleGrid::geometric(2.0, 16.0, 8.0);
    const auto fine = ScaleGrid::geometric(2.0, 16.0, 16.0);
    const auto wc = cwt(s, fam, 0, coarse, 1);
    const auto wf = cwt(s, fam, 0, fine, 1);
    const double ref = wc.values.cwiseAbs().maxCoeff();
    // every coarse scale appears as every other fine scale (up to rounding
    // of the geometric spacing)
    for (Eigen::Index r = 0; r < coarse.scales.size(); ++r) {
        REQUIRE(std::abs(fine.scales[2 * r] - coarse.scales[r]) < 1e-12 * coarse.scales[r]);
        const double dev = (wf.values.row(2 * r) - wc.values.row(r)).cwiseAbs().maxCoeff();
        CHECK(dev < 1e-9 * ref);
    }
}

TEST_CASE("stft_set matches stft and d_stft composition") {
    const auto s = tone(8.0, 64.0, 200);
    const auto fam = tapers::hermite_windows(2, 0.1, 64.0);
    StftParams p;
    p.fft_size = 256;
    const auto set = stft_set(s, fam, p);
    const auto v1 = stft(s, fam, 1, p);
    const auto dv1 = d_stft(s, fam, 1, p);
    CHECK((set.w[1].values - v1.values).cwiseAbs().maxCoeff() == 0.0);
    CHECK((set.dw[1].values - dv1.values).cwiseAbs().maxCoeff() < 1e-12);
}
