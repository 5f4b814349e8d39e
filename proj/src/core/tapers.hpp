#pragma once

#include <cstdint>

#include "core/types.hpp"

namespace conceft::tapers {

enum class FamilyKind { HermiteWindows, MorseWavelets };

// Orthonormal taper family. Hermite windows are discretized in the time
// domain at a working rate; Morse wavelets live on the positive-frequency
// half-line and are evaluated analytically (a reference sampling is kept for
// Gram checks and CSV export).
struct ReferenceFamily {
    FamilyKind kind = FamilyKind::HermiteWindows;
    int count = 0;  // J

    // Hermite parameters.
    double sigma = 0.0;    // seconds
    double rate_hz = 0.0;  // discretization rate of the window grid

    // Morse parameters.
    double beta = 0.0;
    double gamma = 0.0;

    // Discretized tapers: grid x J. Hermite rows are time samples (symmetric
    // grid, spacing 1/rate); Morse rows are frequency samples of psi_hat.
    // d_tapers hold the derivative windows (Hermite, analytic recurrence) or
    // the 2*pi*omega*psi_hat profiles (Morse).
    VectorXd grid;
    MatrixXd tapers;
    MatrixXd d_tapers;

    // Envelope std of the taper in time. For Morse this is at pseudo-frequency
    // 1 and scales like sigma_t / f; for Hermite it is absolute (highest
    // order in the family).
    double time_halfwidth_sec = 0.0;

    // Upper edge of the effective frequency support of psi_hat (Morse,
    // rescaled axis): largest omega with psi_hat above 1e-7 of the peak.
    double freq_support_hi = 0.0;

    // Cached Morse constants: Laguerre parameter, raw peak frequency and the
    // per-order log of the squared normalization.
    double morse_c = 0.0;
    double morse_peak = 0.0;
    VectorXd morse_log_norm2;

    // Analytic psi_hat_k(omega) on the rescaled axis (order-0 peak at 1).
    // Morse families only.
    double morse_eval(int order, double omega) const;

    // Max |Gram - I| over the family at the working discretization.
    double gram_error() const;

    double envelope_std_at(double pseudo_freq_hz) const {
        return kind == FamilyKind::MorseWavelets ? time_halfwidth_sec / pseudo_freq_hz : time_halfwidth_sec;
    }
};

// First J orthonormal Hermite functions scaled by sigma (seconds), sampled at
// `rate_hz` on a symmetric grid wide enough that the tail mass is below 1e-12.
// d_tapers are the analytic derivatives via the Hermite recurrence.
ReferenceFamily hermite_windows(int j_count, double sigma, double rate_hz = 160.0);

// First J generalized Morse wavelets psi_hat_k(w) = A_k w^beta exp(-w^gamma)
// L_k^c(2 w^gamma), c = (2 beta + 1 - gamma)/gamma, unit L2 norm, frequency
// axis rescaled so the order-0 peak sits at 1.
ReferenceFamily morse_wavelets(double beta, double gamma, int j_count);

struct ProjectionSet {
    MatrixXd vectors;  // J x N, unit columns
    std::uint64_t seed = 0;

    int dim() const { return static_cast<int>(vectors.rows()); }
    int size() const { return static_cast<int>(vectors.cols()); }
};

// N i.i.d. uniform samples on the unit sphere S^{J-1} (normalized Gaussians).
ProjectionSet random_unit_vectors(int n_vectors, int j_dim, std::uint64_t seed);

}  // namespace conceft::tapers
