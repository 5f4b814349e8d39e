#include "core/tapers.hpp"

#include <cmath>

#include "core/rng.hpp"

namespace conceft::tapers {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;

// Orthonormal Hermite functions h_0..h_{jmax-1} at dimensionless x, via the
// stable recurrence h_{n+1} = x sqrt(2/(n+1)) h_n - sqrt(n/(n+1)) h_{n-1}.
void hermite_column(double x, int jmax, double* out) {
    const double h0 = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
    out[0] = h0;
    if (jmax == 1) return;
    out[1] = std::sqrt(2.0) * x * h0;
    for (int n = 1; n + 1 < jmax; ++n)
        out[n + 1] = x * std::sqrt(2.0 / (n + 1)) * out[n] - std::sqrt(static_cast<double>(n) / (n + 1)) * out[n - 1];
}

// Generalized Laguerre L_k^c(x).
double laguerre(int k, double c, double x) {
    if (k == 0) return 1.0;
    double lm1 = 1.0;
    double l = 1.0 + c - x;
    for (int m = 1; m < k; ++m) {
        const double lp1 = ((2.0 * m + 1.0 + c - x) * l - (m + c) * lm1) / (m + 1.0);
        lm1 = l;
        l = lp1;
    }
    return l;
}

}  // namespace

ReferenceFamily hermite_windows(int j_count, double sigma, double rate_hz) {
    require(j_count >= 1, "hermite_windows: J must be >= 1");
    require(sigma > 0.0, "hermite_windows: sigma must be positive");
    require(rate_hz > 0.0, "hermite_windows: rate must be positive");

    const double dt = 1.0 / rate_hz;

    // Half-width heuristic, widened until the discrete norm of every order is
    // 1 within 1e-12 (captures both tail mass and quadrature error).
    double half = 6.0 * sigma * std::sqrt(2.0 * std::log(static_cast<double>(j_count) + 2.0));
    const double half_cap = 64.0 * sigma * std::sqrt(static_cast<double>(j_count) + 1.0);

    ReferenceFamily fam;
    fam.kind = FamilyKind::HermiteWindows;
    fam.count = j_count;
    fam.sigma = sigma;
    fam.rate_hz = rate_hz;

    std::vector<double> col(static_cast<std::size_t>(j_count));
    while (true) {
        const auto m = static_cast<Eigen::Index>(std::ceil(half * rate_hz));
        const Eigen::Index npts = 2 * m + 1;
        fam.grid.resize(npts);
        fam.tapers.resize(npts, j_count);
        fam.d_tapers.resize(npts, j_count);
        const double s_half = std::pow(sigma, -0.5);
        const double s_three_half = std::pow(sigma, -1.5);
        for (Eigen::Index i = 0; i < npts; ++i) {
            const double t = static_cast<double>(i - m) * dt;
            const double x = t / sigma;
            fam.grid[i] = t;
            hermite_column(x, j_count, col.data());
            for (int j = 0; j < j_count; ++j) fam.tapers(i, j) = s_half * col[static_cast<std::size_t>(j)];
            // h_n'(x) = sqrt(2n) h_{n-1}(x) - x h_n(x); chain rule adds 1/sigma.
            for (int j = 0; j < j_count; ++j) {
                const double lower = j > 0 ? std::sqrt(2.0 * j) * col[static_cast<std::size_t>(j - 1)] : 0.0;
                fam.d_tapers(i, j) = s_three_half * (lower - x * col[static_cast<std::size_t>(j)]);
            }
        }
        double worst = 0.0;
        for (int j = 0; j < j_count; ++j)
            worst = std::max(worst, std::abs(fam.tapers.col(j).squaredNorm() * dt - 1.0));
        if (worst < 1e-12) break;
        if (half >= half_cap)
            throw NumericError("hermite_windows: grid cannot hold order " + std::to_string(j_count - 1) +
                               " at the required tail tolerance");
        half *= 1.25;
    }

    // Envelope std of the widest (highest-order) window: sigma sqrt(n + 1/2).
    fam.time_halfwidth_sec = sigma * std::sqrt(static_cast<double>(j_count - 1) + 0.5);
    return fam;
}

double ReferenceFamily::morse_eval(int order, double omega) const {
    if (omega <= 0.0) return 0.0;
    const double w = morse_peak * omega;  // back to the unscaled axis
    const double wg = std::pow(w, gamma);
    const double log_env = 0.5 * morse_log_norm2[order] + beta * std::log(w) - wg;
    if (log_env < -700.0) return 0.0;  // underflow guard before the Laguerre factor
    const double val = std::exp(log_env) * laguerre(order, morse_c, 2.0 * wg);
    return std::sqrt(morse_peak) * val;
}

ReferenceFamily morse_wavelets(double beta, double gamma, int j_count) {
    require(beta > 0.0, "morse_wavelets: beta must be positive");
    require(gamma > 0.0, "morse_wavelets: gamma must be positive");
    require(j_count >= 1, "morse_wavelets: J must be >= 1");
    const double c = (2.0 * beta + 1.0 - gamma) / gamma;
    if (c <= -1.0)
        throw NumericError("morse_wavelets: Laguerre parameter c = (2b+1-g)/g must exceed -1");

    ReferenceFamily fam;
    fam.kind = FamilyKind::MorseWavelets;
    fam.count = j_count;
    fam.beta = beta;
    fam.gamma = gamma;
    fam.morse_c = c;
    fam.morse_peak = std::pow(beta / gamma, 1.0 / gamma);
    fam.morse_log_norm2.resize(j_count);
    for (int k = 0; k < j_count; ++k)
        fam.morse_log_norm2[k] =
            std::log(2.0 * gamma) + c * std::log(2.0) + std::lgamma(k + 1.0) - std::lgamma(c + k + 1.0);

    // Reference sampling of the rescaled-axis wavelets on (0, 4].
    const Eigen::Index npts = 16384;
    const double w_max = 4.0;
    const double dw = w_max / static_cast<double>(npts);
    fam.grid.resize(npts);
    fam.tapers.resize(npts, j_count);
    fam.d_tapers.resize(npts, j_count);
    for (Eigen::Index i = 0; i < npts; ++i) {
        const double w = static_cast<double>(i + 1) * dw;
        fam.grid[i] = w;
        for (int j = 0; j < j_count; ++j) {
            const double v = fam.morse_eval(j, w);
            fam.tapers(i, j) = v;
            fam.d_tapers(i, j) = kTwoPi * w * v;
        }
    }

    const double gram = fam.gram_error();
    if (gram > 1e-6)
        throw NumericError("morse_wavelets: family failed the orthonormality check (Gram deviation " +
                           std::to_string(gram) + ")");

    // Envelope std in time at pseudo-frequency 1, from the spectral spread of
    // the order-0 wavelet: sigma_t = 1/(2 pi sigma_w).
    const VectorXd p0 = fam.tapers.col(0).array().square() * dw;  // unit-mass density
    const double mean_w = (fam.grid.array() * p0.array()).sum();
    const double var_w = ((fam.grid.array() - mean_w).square() * p0.array()).sum();
    fam.time_halfwidth_sec = 1.0 / (kTwoPi * std::sqrt(var_w));

    double hi = 0.0;
    const double cutoff = 1e-7 * fam.tapers.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < npts; ++i)
        if (fam.tapers.row(i).cwiseAbs().maxCoeff() > cutoff) hi = fam.grid[i];
    fam.freq_support_hi = hi;
    return fam;
}

double ReferenceFamily::gram_error() const {
    const double step = kind == FamilyKind::HermiteWindows ? 1.0 / rate_hz : grid[1] - grid[0];
    const MatrixXd gram = tapers.transpose() * tapers * step;
    return (gram - MatrixXd::Identity(count, count)).cwiseAbs().maxCoeff();
}

ProjectionSet random_unit_vectors(int n_vectors, int j_dim, std::uint64_t seed) {
    require(n_vectors >= 1, "random_unit_vectors: N must be >= 1");
    require(j_dim >= 1, "random_unit_vectors: J must be >= 1");

    ProjectionSet out;
    out.seed = seed;
    out.vectors.resize(j_dim, n_vectors);
    rng::Engine eng(seed);
    for (int n = 0; n < n_vectors; ++n) {
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (int j = 0; j < j_dim; ++j) {
                const double g = eng.normal();
                out.vectors(j, n) = g;
                norm2 += g * g;
            }
        } while (norm2 == 0.0);
        out.vectors.col(n) /= std::sqrt(norm2);
    }
    return out;
}

}  // namespace conceft::tapers
