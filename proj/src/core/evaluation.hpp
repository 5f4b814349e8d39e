#pragma once

#include <cstdint>

#include "core/types.hpp"

namespace conceft::eval {

struct OTConfig {
    double alpha = 0.0;            // weight of the relative-total-mass term
    double boundary_skip_sec = 0;  // slices within this of either end are skipped
    int threads = 0;
};

struct OTReport {
    VectorXd per_time;  // per-slice distance; NaN where skipped
    double mean = 0.0;
    double alpha = 0.0;
    Eigen::Index evaluated = 0;
    Eigen::Index skipped_zero_mass = 0;
    Eigen::Index skipped_boundary = 0;
};

// Per-time-slice 1-D optimal transport between the two spectra, via CDF
// differences: slices are normalized to probability vectors and
// sum |F_p - F_q| dw accumulated; with alpha > 0 the relative-total-mass term
// |m_p - m_q|/(m_p + m_q) is mixed in after a global mass equalization.
// Slices with zero mass on either side are skipped and counted.
OTReport ot_distance(const TvPS& p, const TvPS& q, const OTConfig& cfg = {});

// Scales P so the mean entry equals theta.
TvPS normalize_tvps(const TvPS& p, double theta);

struct RenderSpec {
    enum class QMode { Fixed, QuantilePercent };
    double theta = 5.0;  // target mean entry for the Fixed-q scheme
    QMode q_mode = QMode::Fixed;
    double q_value = 5.718;  // cut-off (Fixed) or percent (QuantilePercent)

    bool operator==(const RenderSpec&) const = default;
};

struct GrayImage {
    int width = 0;   // time
    int height = 0;  // frequency, top row = highest frequency
    std::vector<std::uint8_t> pixels;
};

struct RenderResult {
    GrayImage image;
    MatrixXd r_matrix;  // log(1 + min(P, q)) after any normalization
    double q_used = 0.0;
    double norm_scale = 1.0;
};

// Grayscale rendering R = log(1 + min(P, q)), white = 0, black = log(1+q).
// Fixed-q mode first normalizes to mean entry theta; quantile mode renders
// the raw matrix with q at the given per-image percentile.
RenderResult render(const TvPS& p, const RenderSpec& spec);

// Exact sphere-cap ratio constant of the restricted-sphere second-moment
// identity: Int_k^1 (1-x^2)^{(J-1)/2} x^{-2} dx / Int_k^1 (1-x^2)^{(J-3)/2} dx.
double lemma_c_exact(int j_dim, double kappa);
// Large-J approximation chain evaluated by quadrature (full-sphere
// normalizer), whose J -> inf limit is the asymptotic constant.
double lemma_c_gamma_approx(int j_dim, double kappa);
// 2 sqrt(2) / (sqrt(pi J) kappa).
double lemma_c_asymptotic(int j_dim, double kappa);

struct LemmaReport {
    cplx mc_mean;
    cplx formula_mean;  // p_v(u)
    double mean_se = 0.0;
    double mc_second = 0.0;       // mean |r.u / r.v|^2
    double formula_second = 0.0;  // |p_v u|^2 + c_exact ||P_perp u||^2/(J-1)
    double second_se = 0.0;
    double c_exact = 0.0;
    double c_gamma_approx = 0.0;
    double c_asymptotic = 0.0;
    double acceptance_rate = 0.0;
    long long samples = 0;
    bool mean_within_3se = false;
    bool second_within_3se = false;
};

// Monte Carlo check of the restricted-sphere moment identities: r uniform on
// {r in S^{J-1} : r.v > kappa} (v normalized internally, the ratio keeps
// ||v||: ratio = r.u / r.v_hat), first and second moments against the exact
// formulas.
LemmaReport lemma_s3_check(const VectorXcd& u, const VectorXd& v, double kappa, long long samples,
                           std::uint64_t seed);

struct PropositionReport {
    int j_dim = 0;
    double phi_prime = 0.0;
    double phase_cycles = 0.0;
    cplx mc_mean;
    cplx predicted_center;  // phi' + e^{-i 2 pi phi} p_Q(V)
    double mean_dev = 0.0;
    double mean_se = 0.0;
    double e1_bound = 0.0;
    double mc_var = 0.0;  // E|w - Ew|^2 over the restricted sphere
    double var_bound = 0.0;
    double var_se = 0.0;
    double noise_norm = 0.0;  // ||eps + sigma Phi||
    double kappa = 0.0;
    double acceptance_rate = 0.0;
    bool mean_within = false;
    bool var_within = false;
};

// Verifies the reassignment-rule expectation/variance bounds over the
// restricted half-sphere for one synthetic configuration: Q real,
// per-coordinate perturbation scales eps_scale (deterministic part) and
// sigma (circular complex Gaussian part). Errors if the drawn noise violates
// the norm condition ||eps + sigma Phi|| <= kappa.
PropositionReport proposition_check(const VectorXd& q_vec, double eps_scale, double sigma, double kappa,
                                    long long samples, std::uint64_t seed);

// Printed variance bound evaluated at fixed scalar inputs (used to study the
// J dependence at a fixed noise scale).
double proposition_var_bound(int j_dim, double kappa_eff, double proj_sq, double norm_sq);

}  // namespace conceft::eval
