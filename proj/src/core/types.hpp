#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "core/errors.hpp"

namespace conceft {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using cplx = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Uniformly sampled real-valued time series.
struct SampledSignal {
    VectorXd samples;
    double rate_hz = 0.0;
    double t0 = 0.0;

    Eigen::Index size() const { return samples.size(); }
    double dt() const { return 1.0 / rate_hz; }
    double time(Eigen::Index i) const { return t0 + static_cast<double>(i) / rate_hz; }
    double duration() const { return static_cast<double>(size() - 1) / rate_hz; }

    void validate() const {
        require(rate_hz > 0.0, "SampledSignal: rate_hz must be positive");
        require(samples.size() >= 2, "SampledSignal: need at least 2 samples");
        require(samples.allFinite(), "SampledSignal: samples must be finite");
    }
};

// One intrinsic-mode component: amplitude and phase tracks on the signal
// grid, alive on [support_begin, support_end]. Phases are stored in cycles so
// the instantaneous frequency track is directly in Hz.
struct ImtComponent {
    VectorXd amplitude;
    VectorXd phase_cycles;
    VectorXd if_hz;
    double support_begin = 0.0;
    double support_end = 0.0;

    bool alive(double t) const { return t >= support_begin && t <= support_end; }
};

struct GroundTruth {
    std::vector<ImtComponent> components;
    double rate_hz = 0.0;
    double t0 = 0.0;
    // Declared separation constant d in (0,1): on every overlap the sorted IF
    // tracks satisfy f_hi - f_lo > d (f_hi + f_lo).
    double separation_d = 0.0;
};

enum class NoiseKind { GaussianWhite, Arma11, Poisson, StudentT4Iid };

struct NoiseSpec {
    NoiseKind kind = NoiseKind::GaussianWhite;
    double target_snr_db = 0.0;
    std::uint64_t seed = 0;
};

// Parameters of the random smooth profile
//   zeta1 + zeta2 t + zeta3 Phi_z4(t)/||Phi_z4||_inf
//          + zeta5 Int_0^t Phi_z6(s)/||Phi_z6||_inf ds.
// Bandwidths zeta4/zeta6 are the smoothing kernel std in samples.
struct ProfileParams {
    double zeta1 = 0, zeta2 = 0, zeta3 = 0, zeta4 = 0, zeta5 = 0, zeta6 = 0;
    double duration_sec = 60.0;
};

enum class AxisKind { Frequency, Scale };

// Complex time-frequency (or time-scale) matrix. Rows are axis bins, columns
// are time samples, so one time slice is contiguous in memory.
struct TFMatrix {
    MatrixXcd values;
    VectorXd time_grid;
    VectorXd axis_grid;
    AxisKind axis_kind = AxisKind::Frequency;
    double rate_hz = 0.0;
    // Envelope std of the effective taper per row, in seconds (boundary
    // bookkeeping; constant for STFT, scale-proportional for CWT).
    VectorXd row_halfwidth_sec;
    // Rows zeroed because the scaled wavelet exceeded the resolvable band.
    std::vector<int> invalid_rows;
};

// Geometric scale grid.
struct ScaleGrid {
    VectorXd scales;  // ascending
    double ratio = 0.0;

    static ScaleGrid geometric(double freq_min_hz, double freq_max_hz, double voices_per_octave);
    void validate() const;
};

struct SqueezeConfig {
    enum class ThresholdKind { Absolute, RelativeToMax, Quantile };
    enum class KernelKind { NearestBin, GaussianKernel };
    enum class SignFlip { PerPoint, PerVector };

    ThresholdKind threshold_kind = ThresholdKind::RelativeToMax;
    double threshold_value = 1e-6;
    int freq_bins = 1024;
    double freq_min_hz = 0.0;
    double freq_max_hz = 20.0;
    KernelKind kernel = KernelKind::NearestBin;
    double kernel_alpha = 0.0;
    SignFlip sign_flip = SignFlip::PerPoint;
    // Boundary mask half-width is 2 * sigma_t of the taper envelope at this
    // pseudo-frequency; <= 0 disables masking.
    double boundary_ref_freq_hz = 2.0;

    void validate() const {
        require(freq_bins >= 1, "SqueezeConfig: freq_bins must be >= 1");
        require(freq_max_hz > freq_min_hz, "SqueezeConfig: empty frequency range");
        if (threshold_kind == ThresholdKind::Quantile)
            require(threshold_value > 0.0 && threshold_value < 1.0, "SqueezeConfig: quantile must be in (0,1)");
        if (kernel == KernelKind::GaussianKernel)
            require(kernel_alpha > 0.0, "SqueezeConfig: kernel_alpha must be positive");
    }

    bool operator==(const SqueezeConfig&) const = default;

    double bin_width() const { return (freq_max_hz - freq_min_hz) / freq_bins; }
    // Bin centers.
    VectorXd bin_grid() const {
        VectorXd g(freq_bins);
        const double w = bin_width();
        for (int i = 0; i < freq_bins; ++i) g[i] = freq_min_hz + (i + 0.5) * w;
        return g;
    }
};

struct SqueezeDiagnostics {
    double threshold_used = 0.0;
    std::int64_t points_total = 0;
    std::int64_t points_passing = 0;
    std::int64_t points_deposited = 0;
    std::int64_t points_dropped = 0;
    double mass_deposited = 0.0;
    double mass_dropped = 0.0;

    void accumulate(const SqueezeDiagnostics& o) {
        points_total += o.points_total;
        points_passing += o.points_passing;
        points_deposited += o.points_deposited;
        points_dropped += o.points_dropped;
        mass_deposited += o.mass_deposited;
        mass_dropped += o.mass_dropped;
    }
};

struct SqueezedTF {
    MatrixXcd values;  // rows = freq bins, cols = time
    VectorXd freq_grid;
    VectorXd time_grid;
    std::vector<std::uint8_t> boundary_mask;  // 1 = excluded column (zeroed)
    // Amplitude reconstruction scale: A(t) ~ |band sum| / amp_constant.
    double amp_constant = 0.0;
    SqueezeDiagnostics diag;
};

struct TvPS {
    MatrixXd values;  // rows = freq bins, cols = time; nonnegative
    VectorXd freq_grid;
    VectorXd time_grid;
    std::vector<std::uint8_t> boundary_mask;
};

}  // namespace conceft
