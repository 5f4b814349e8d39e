#pragma once

#include "core/tapers.hpp"
#include "core/types.hpp"

namespace conceft::tf {

struct StftParams {
    int fft_size = 2048;
    int hop = 1;
    double freq_max_hz = 0.0;  // <= 0: keep the full [0, Nyquist] axis
    int threads = 0;
};

// Modified STFT V(t, eta) = Int f(t+u) h_j(u) e^{-i 2 pi eta u} du, evaluated
// by a sliding-window FFT at every `hop`-th sample; the frequency axis is the
// FFT bin grid m * rate / fft_size, m = 0..fft_size/2 (optionally truncated).
TFMatrix stft(const SampledSignal& s, const tapers::ReferenceFamily& fam, int taper_index, const StftParams& p = {});

// Time derivative of the STFT via the derivative window:
// d/dt V = -V^{(h')} + i 2 pi eta V. No finite differencing.
TFMatrix d_stft(const SampledSignal& s, const tapers::ReferenceFamily& fam, int taper_index, const StftParams& p = {});

// CWT against the combined wavelet sum_j weights_j psi_j: per scale a, the
// inverse FFT of f_hat(xi) sqrt(a) psi_hat(a xi) over the positive
// frequencies (analytic convention; psi_hat real). With `derivative` the
// integrand carries the extra i 2 pi xi factor, giving d/db W exactly.
TFMatrix cwt_combined(const SampledSignal& s, const tapers::ReferenceFamily& fam, const VectorXd& weights,
                      const ScaleGrid& grid, bool derivative, int threads = 0);

TFMatrix cwt(const SampledSignal& s, const tapers::ReferenceFamily& fam, int order, const ScaleGrid& grid,
             int threads = 0);
TFMatrix d_cwt(const SampledSignal& s, const tapers::ReferenceFamily& fam, int order, const ScaleGrid& grid,
               int threads = 0);

// All J base transforms and their derivative partners, sharing one signal
// FFT. Pipeline workhorse: combined-taper transforms are then entrywise
// linear combinations.
struct TransformSet {
    std::vector<TFMatrix> w;   // J transforms
    std::vector<TFMatrix> dw;  // J derivative transforms
};
TransformSet cwt_set(const SampledSignal& s, const tapers::ReferenceFamily& fam, const ScaleGrid& grid,
                     int threads = 0);

// STFT analogue: V_j and dV_j for every taper in one pass over the columns.
TransformSet stft_set(const SampledSignal& s, const tapers::ReferenceFamily& fam, const StftParams& p = {});

}  // namespace conceft::tf
