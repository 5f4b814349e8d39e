#pragma once

#include <functional>

#include "core/tapers.hpp"
#include "core/transforms.hpp"
#include "core/types.hpp"

namespace conceft::squeeze {

// Resolved hard threshold for a transform under the config's threshold rule.
double resolve_threshold(const SqueezeConfig& cfg, const TFMatrix& w);

// Reassignment rule Omega = Re[-i dW / (2 pi W)] where |W| > gamma_abs,
// -inf sentinel elsewhere. Works for both backends (dW is the time
// derivative of W in both conventions).
MatrixXd reassignment_rule(const TFMatrix& w, const TFMatrix& dw, double gamma_abs);

// CWT-based SST: accumulates W(a,b) a^{-3/2} da into the frequency bin (or
// Gaussian-kernel-weighted bins) at Omega(a,b) over scales passing the
// threshold. amp_constant calibrates band-integrated amplitude
// reconstruction (pass admissibility_constant(fam, weights) / 2).
SqueezedTF sst_cwt(const TFMatrix& w, const TFMatrix& dw, const SqueezeConfig& cfg, const ScaleGrid& grid,
                   double amp_constant = 0.0, int threads = 0);

// STFT-based SST: same accumulation with unit measure d eta.
SqueezedTF sst_stft(const TFMatrix& v, const TFMatrix& dv, const SqueezeConfig& cfg, double amp_constant = 0.0,
                    int threads = 0);

// Entrywise mean of congruent squeezed transforms.
SqueezedTF mtsst(const std::vector<SqueezedTF>& ssts);

TvPS tvps_of(const SqueezedTF& s);

// CWT admissibility-style constant Int psi_hat(u)/u du of the combined taper
// (quadrature on the reference grid); the SST band sum of a unit-amplitude
// IMT approaches (C_psi/2) e^{i 2 pi phi}.
double admissibility_constant(const tapers::ReferenceFamily& fam, const VectorXd& weights);
// STFT analogue: combined window value at t = 0 (band sum approaches
// (h(0)/2) e^{i 2 pi phi}).
double window_zero_value(const tapers::ReferenceFamily& fam, const VectorXd& weights);

struct ConceftOptions {
    SqueezeConfig squeeze;
    int threads = 0;
};

struct ConceftOutput {
    SqueezedTF c;  // (1/N) sum of the per-projection SSTs
    TvPS tvps;     // |C|^2
};

// ConceFT over a precomputed base-transform set: for each projection r_n the
// combined transform sum_j (r_n)_j W_j and its derivative partner are
// squeezed with the half-sphere sign rule (coefficients with negative real
// part are negated before accumulation; per-point by default, or globally
// per vector when cfg.sign_flip = PerVector) and the SSTs averaged in fixed
// order. The scale grid is required for the CWT measure; pass nullptr for
// STFT sets.
ConceftOutput conceft(const tf::TransformSet& set, const tapers::ReferenceFamily& fam,
                      const tapers::ProjectionSet& proj, const ConceftOptions& opt, const ScaleGrid* grid);

// Streaming variant: runs through the projections once and invokes the
// callback with the prefix average C_n at every n in snapshot_ns (ascending).
// Shares one projection stream across the snapshot sizes.
void conceft_stream(const tf::TransformSet& set, const tapers::ReferenceFamily& fam,
                    const tapers::ProjectionSet& proj, const ConceftOptions& opt, const ScaleGrid* grid,
                    const std::vector<int>& snapshot_ns,
                    const std::function<void(int, const ConceftOutput&)>& on_snapshot);

// Band-integrated amplitude estimate: per time, |sum of S over bins within
// band_halfwidth_hz of the track| / amp_constant.
VectorXd reconstruct_amplitude(const SqueezedTF& s, const VectorXd& if_track_hz, double band_halfwidth_hz);

struct RidgeExtraction {
    std::vector<VectorXd> tracks_hz;  // sorted by mean frequency
    int requested = 0;
    bool truncated = false;  // fewer detectable ridges than requested
};

// Per-time maximum-energy paths with a quadratic continuity penalty,
// extracted one at a time (each extracted ridge clears a band around itself).
RidgeExtraction extract_ridges(const TvPS& p, int count);

}  // namespace conceft::squeeze
