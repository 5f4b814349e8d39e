#pragma once

#include <cstdint>

#include "core/types.hpp"

namespace conceft::signal {

double sample_mean(const VectorXd& x);
// Sample standard deviation (n-1 normalization).
double sample_std(const VectorXd& x);

// Smoothened Brownian motion: a standard Brownian path (cumulative sum of
// N(0, dt) increments) convolved with a Gaussian kernel of std
// `bandwidth_samples` samples. The path is reflected at both ends before the
// convolution so the smoothing has no edge dip.
VectorXd smoothened_brownian(double bandwidth_samples, Eigen::Index n, double rate_hz, std::uint64_t seed);

// zeta1 + zeta2 t + zeta3 Phi/||Phi||_inf + zeta5 cumtrapz(Phi'/||Phi'||_inf).
// A degenerate all-zero Phi contributes nothing to its term.
VectorXd random_profile(const ProfileParams& p, double rate_hz, std::uint64_t seed);

struct PhaseTrack {
    VectorXd phase_cycles;  // zeta2 t + zeta5 cumtrapz(...)
    VectorXd if_hz;         // zeta2 + zeta5 * normalized integrand (exact)
};
// Monotone phase profile (zeta1 = zeta3 = 0 shape) plus its analytic
// instantaneous-frequency track.
PhaseTrack random_phase_profile(double zeta2, double zeta5, double zeta6, double duration_sec, double rate_hz,
                                std::uint64_t seed);

struct GeneratedSignal {
    SampledSignal signal;
    GroundTruth truth;
    int rejected_seeds = 0;  // class-C re-draws due to IF-track crossings
};

// Two-component random signal class: amplitudes ~ Psi[2,0,1,200,0,0],
// phase_1 ~ Psi[0,10,0,0,6,400] on support [18,60], phase_2 ~
// Psi[0,2pi,0,0,2,300] on support [0,36]. Seeds whose IF tracks cross on the
// overlap are rejected and re-drawn deterministically.
GeneratedSignal make_class_c_signal(std::uint64_t seed, double rate_hz = 160.0, double duration_sec = 60.0);

// Three-component deterministic signal with closed-form amplitude/phase
// tracks; supports [10,48], [0,60], [15,60].
GeneratedSignal deterministic_signal(double rate_hz = 160.0, double duration_sec = 60.0);

struct NoisyResult {
    SampledSignal noisy;
    double sigma = 0.0;
    double realized_snr_db = 0.0;
};

// Y = s + sigma*xi with sigma solved so that
// 20 log10(std(s) / (sigma std(xi))) equals the target exactly, using sample
// standard deviations of the actual realization.
NoisyResult add_noise(const SampledSignal& s, const NoiseSpec& spec);

// Raw unit-parameter noise realization for a given kind (pre-sigma).
VectorXd raw_noise(NoiseKind kind, Eigen::Index n, std::uint64_t seed);

// Ideal time-varying power spectrum: per time slice deposits A_k^2(t) into
// the single frequency bin containing the component's IF track.
TvPS ideal_tvps(const GroundTruth& gt, const VectorXd& freq_bin_centers, const VectorXd& time_grid);

// Smallest IF value over all components/supports (used for boundary masks).
double min_ground_truth_if(const GroundTruth& gt);

// Minimum ordered separation ratio over all adjacent component pairs (sorted
// by mean IF); <= 0 means some tracks touch or cross on an overlap.
double compute_separation(const GroundTruth& gt);

}  // namespace conceft::signal
