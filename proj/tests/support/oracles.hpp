#pragma once

// Test-only oracles, implemented independently of the library code paths
// they check (direct quadrature instead of FFT, min-cost flow instead of the
// CDF shortcut, full sorts instead of selection).

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "core/tapers.hpp"
#include "core/types.hpp"

namespace oracles {

using conceft::cplx;
using conceft::MatrixXcd;
using conceft::VectorXcd;
using conceft::VectorXd;

// Direct evaluation of the modified STFT integral
// V(t_i, eta) = dt * sum_u f(t_i + u) h(u) exp(-i 2 pi eta u).
cplx stft_point(const conceft::SampledSignal& s, const VectorXd& window_grid, const VectorXd& window,
                Eigen::Index center_index, double eta_hz);

// Time-domain wavelet samples psi(t) = Int_0^inf psi_hat(w) e^{i 2 pi w t} dw
// by quadrature on the family's reference grid.
VectorXcd morse_time_domain(const conceft::tapers::ReferenceFamily& fam, int order, const VectorXd& times);

// Direct inner product W(a, b) = dt * sum_t f(t) a^{-1/2} conj(psi((t-b)/a)).
cplx cwt_point(const conceft::SampledSignal& s, const conceft::tapers::ReferenceFamily& fam, int order, double scale,
               double b_sec);

// Exact minimum-cost transport between two nonnegative mass vectors on a
// common grid with |x_i - x_j| costs, via successive shortest paths.
// Masses are normalized to probability vectors internally.
double min_cost_transport(const VectorXd& grid, const VectorXd& mass_p, const VectorXd& mass_q);

// Nearest-rank percentile by full sort.
double sorted_percentile(const std::vector<double>& values, double percent);

// Sample variance (n-1) of Phi_B(T): an independently coded smoothened
// Brownian endpoint, reflected at both path ends, Monte Carlo over seeds.
struct McVariance {
    double variance = 0.0;
    double std_error = 0.0;  // of the variance estimate
};
McVariance brownian_endpoint_variance(double bandwidth_samples, Eigen::Index n, double rate_hz, int n_seeds,
                                      std::uint64_t seed0);

}  // namespace oracles
