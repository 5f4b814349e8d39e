#include "core/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/rng.hpp"
#include "core/threading.hpp"

namespace conceft::eval {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kPi = 3.14159265358979323846264338328;

// Composite Simpson on [a, b].
template <typename F>
double simpson(F&& f, double a, double b, int intervals) {
    if (intervals % 2) ++intervals;
    const double h = (b - a) / intervals;
    double acc = f(a) + f(b);
    for (int i = 1; i < intervals; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

}  // namespace

OTReport ot_distance(const TvPS& p, const TvPS& q, const OTConfig& cfg) {
    require(p.freq_grid.size() == q.freq_grid.size() && p.time_grid.size() == q.time_grid.size(),
            "ot_distance: grid mismatch");
    require((p.freq_grid - q.freq_grid).cwiseAbs().maxCoeff() <= 1e-12, "ot_distance: frequency grids differ");
    const Eigen::Index bins = p.freq_grid.size();
    const Eigen::Index ntimes = p.time_grid.size();
    const double dw = bins > 1 ? p.freq_grid[1] - p.freq_grid[0] : 1.0;

    // The alpha-weighted mass term is defined after equalizing total masses.
    double mass_scale = 1.0;
    if (cfg.alpha != 0.0) {
        const double mp = p.values.sum();
        const double mq = q.values.sum();
        require(mp > 0.0 && mq > 0.0, "ot_distance: zero-mass input with alpha > 0");
        mass_scale = mq / mp;
    }

    OTReport rep;
    rep.alpha = cfg.alpha;
    rep.per_time = VectorXd::Constant(ntimes, kNan);

    const double t_begin = p.time_grid[0];
    const double t_end = p.time_grid[ntimes - 1];

    std::vector<std::uint8_t> zero_mass(static_cast<std::size_t>(ntimes), 0);
    std::vector<std::uint8_t> boundary(static_cast<std::size_t>(ntimes), 0);

    parallel_for(ntimes, cfg.threads, [&](long long begin, long long end) {
        for (long long t = begin; t < end; ++t) {
            const double tt = p.time_grid[t];
            if (cfg.boundary_skip_sec > 0.0 &&
                (tt - t_begin < cfg.boundary_skip_sec || t_end - tt < cfg.boundary_skip_sec)) {
                boundary[static_cast<std::size_t>(t)] = 1;
                continue;
            }
            const double mp = p.values.col(t).sum() * mass_scale;
            const double mq = q.values.col(t).sum();
            if (!(mp > 0.0) || !(mq > 0.0)) {
                zero_mass[static_cast<std::size_t>(t)] = 1;
                continue;
            }
            // CDF formula for the 1-D transport cost.
            double fp = 0.0, fq = 0.0, dist = 0.0;
            for (Eigen::Index b = 0; b < bins; ++b) {
                fp += p.values(b, t) * mass_scale / mp;
                fq += q.values(b, t) / mq;
                dist += std::abs(fp - fq) * dw;
            }
            const double mass_term = std::abs(mp - mq) / (mp + mq);
            rep.per_time[t] = cfg.alpha * mass_term + (1.0 - cfg.alpha) * dist;
        }
    });

    double sum = 0.0;
    for (Eigen::Index t = 0; t < ntimes; ++t) {
        if (boundary[static_cast<std::size_t>(t)]) {
            ++rep.skipped_boundary;
        } else if (zero_mass[static_cast<std::size_t>(t)]) {
            ++rep.skipped_zero_mass;
        } else {
            sum += rep.per_time[t];
            ++rep.evaluated;
        }
    }
    require(rep.evaluated > 0, "ot_distance: no slices left to evaluate");
    rep.mean = sum / static_cast<double>(rep.evaluated);
    return rep;
}

TvPS normalize_tvps(const TvPS& p, double theta) {
    require(theta > 0.0, "normalize_tvps: theta must be positive");
    const double mean = p.values.mean();
    if (!(mean > 0.0)) throw NumericError("normalize_tvps: zero-mass tvPS");
    TvPS out = p;
    out.values *= theta / mean;
    return out;
}

RenderResult render(const TvPS& p, const RenderSpec& spec) {
    require(spec.theta > 0.0, "render: theta must be positive");

    RenderResult out;
    MatrixXd values = p.values;
    if (spec.q_mode == RenderSpec::QMode::Fixed) {
        const double mean = values.mean();
        if (mean > 0.0) {
            out.norm_scale = spec.theta / mean;
            values *= out.norm_scale;
        }
        out.q_used = spec.q_value;
    } else {
        require(spec.q_value > 0.0 && spec.q_value < 100.0, "render: quantile percent must be in (0,100)");
        // Nearest-rank percentile over all entries of the raw matrix.
        std::vector<double> sorted(values.data(), values.data() + values.size());
        std::sort(sorted.begin(), sorted.end());
        const auto rank = static_cast<std::size_t>(
            std::max<long long>(0, static_cast<long long>(std::ceil(spec.q_value / 100.0 * sorted.size())) - 1));
        out.q_used = sorted[rank];
    }

    const Eigen::Index bins = values.rows();
    const Eigen::Index ntimes = values.cols();
    out.r_matrix.resize(bins, ntimes);
    for (Eigen::Index t = 0; t < ntimes; ++t)
        for (Eigen::Index b = 0; b < bins; ++b)
            out.r_matrix(b, t) = std::log1p(std::min(values(b, t), out.q_used));

    const double r_max = std::log1p(out.q_used);
    out.image.width = static_cast<int>(ntimes);
    out.image.height = static_cast<int>(bins);
    out.image.pixels.assign(static_cast<std::size_t>(bins * ntimes), 255);
    // Top pixel row is the highest frequency (origin bottom-left).
    for (Eigen::Index b = 0; b < bins; ++b) {
        const Eigen::Index row = bins - 1 - b;
        for (Eigen::Index t = 0; t < ntimes; ++t) {
            const double frac = r_max > 0.0 ? out.r_matrix(b, t) / r_max : 0.0;
            const auto px = static_cast<int>(std::lround(255.0 * (1.0 - std::min(1.0, frac))));
            out.image.pixels[static_cast<std::size_t>(row * ntimes + t)] = static_cast<std::uint8_t>(px);
        }
    }
    return out;
}

double lemma_c_exact(int j_dim, double kappa) {
    require(j_dim >= 2, "lemma_c_exact: J must be >= 2");
    require(kappa > 0.0 && kappa < 1.0, "lemma_c_exact: kappa must be in (0,1)");
    // x = cos(theta) substitution keeps both integrands smooth for J = 2.
    const double theta_max = std::acos(kappa);
    const double num = simpson(
        [&](double th) {
            const double s = std::sin(th), c = std::cos(th);
            return std::pow(s, j_dim) / (c * c);
        },
        0.0, theta_max, 20000);
    const double den = simpson([&](double th) { return std::pow(std::sin(th), j_dim - 2); }, 0.0, theta_max, 20000);
    return num / den;
}

double lemma_c_gamma_approx(int j_dim, double kappa) {
    require(j_dim >= 2, "lemma_c_gamma_approx: J must be >= 2");
    const double theta_max = std::acos(kappa);
    const double num = simpson(
        [&](double th) {
            const double s = std::sin(th), c = std::cos(th);
            return std::pow(s, j_dim) / (c * c);
        },
        0.0, theta_max, 20000);
    return 2.0 / std::sqrt(kPi) * std::exp(std::lgamma(j_dim / 2.0) - std::lgamma((j_dim - 1) / 2.0)) * num;
}

double lemma_c_asymptotic(int j_dim, double kappa) {
    return 2.0 * std::sqrt(2.0) / (std::sqrt(kPi * j_dim) * kappa);
}

namespace {

// Uniform sphere point in R^J.
void sphere_point(rng::Engine& eng, VectorXd& r) {
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (Eigen::Index j = 0; j < r.size(); ++j) {
            r[j] = eng.normal();
            norm2 += r[j] * r[j];
        }
    } while (norm2 == 0.0);
    r /= std::sqrt(norm2);
}

}  // namespace

LemmaReport lemma_s3_check(const VectorXcd& u, const VectorXd& v, double kappa, long long samples,
                           std::uint64_t seed) {
    require(u.size() == v.size(), "lemma_s3_check: u and v must have the same dimension");
    const int j_dim = static_cast<int>(v.size());
    require(j_dim >= 2, "lemma_s3_check: J must be >= 2");
    const double vnorm = v.norm();
    require(vnorm > 0.0, "lemma_s3_check: v must be nonzero");
    require(kappa > 0.0 && kappa < vnorm, "lemma_s3_check: kappa must be in (0, ||v||)");
    require(samples >= 100, "lemma_s3_check: need at least 100 samples");

    const VectorXd v_hat = v / vnorm;
    const double kappa_eff = kappa / vnorm;

    LemmaReport rep;
    rep.samples = samples;
    rep.c_exact = lemma_c_exact(j_dim, kappa_eff);
    rep.c_gamma_approx = lemma_c_gamma_approx(j_dim, kappa_eff);
    rep.c_asymptotic = lemma_c_asymptotic(j_dim, kappa_eff);

    // Expected acceptance = cap fraction; bail out early when rejection
    // sampling would starve.
    const double cap_fraction =
        simpson([&](double th) { return std::pow(std::sin(th), j_dim - 2); }, 0.0, std::acos(kappa_eff), 20000) /
        simpson([&](double th) { return std::pow(std::sin(th), j_dim - 2); }, 0.0, kPi, 20000);
    if (cap_fraction < 1e-7)
        throw NumericError("lemma_s3_check: rejection sampling starved, acceptance rate ~" +
                           std::to_string(cap_fraction));

    rng::Engine eng(seed);
    VectorXd r(j_dim);
    long long attempts = 0;
    double sum_re = 0, sum_im = 0, sum_re2 = 0, sum_im2 = 0;
    double sum_sq = 0, sum_sq2 = 0;
    for (long long i = 0; i < samples; ++i) {
        do {
            sphere_point(eng, r);
            ++attempts;
        } while (r.dot(v_hat) <= kappa_eff);
        const double denom = r.dot(v_hat);
        cplx num(0.0, 0.0);
        for (int j = 0; j < j_dim; ++j) num += r[j] * u[j];
        const cplx ratio = num / denom;
        sum_re += ratio.real();
        sum_im += ratio.imag();
        sum_re2 += ratio.real() * ratio.real();
        sum_im2 += ratio.imag() * ratio.imag();
        const double sq = std::norm(ratio);
        sum_sq += sq;
        sum_sq2 += sq * sq;
    }
    const double m = static_cast<double>(samples);
    rep.acceptance_rate = m / static_cast<double>(attempts);
    rep.mc_mean = cplx(sum_re / m, sum_im / m);
    const double var_re = std::max(0.0, sum_re2 / m - (sum_re / m) * (sum_re / m));
    const double var_im = std::max(0.0, sum_im2 / m - (sum_im / m) * (sum_im / m));
    rep.mean_se = std::sqrt((var_re + var_im) / m);
    rep.mc_second = sum_sq / m;
    rep.second_se = std::sqrt(std::max(0.0, sum_sq2 / m - rep.mc_second * rep.mc_second) / m);

    const cplx proj = v_hat.cast<cplx>().dot(u.matrix());  // v_hat real: plain dot
    rep.formula_mean = proj;
    const VectorXcd perp = u - proj * v_hat.cast<cplx>();
    rep.formula_second = std::norm(proj) + rep.c_exact * perp.squaredNorm() / (j_dim - 1);

    rep.mean_within_3se = std::abs(rep.mc_mean - rep.formula_mean) <= 3.0 * rep.mean_se + 1e-12;
    rep.second_within_3se = std::abs(rep.mc_second - rep.formula_second) <= 3.0 * rep.second_se + 1e-12;
    return rep;
}

double proposition_var_bound(int j_dim, double kappa_eff, double proj_sq, double norm_sq) {
    const double c = lemma_c_exact(j_dim, kappa_eff);
    const double x = (1.0 - c / (j_dim - 1)) * proj_sq + c * norm_sq / (j_dim - 1);
    return 2.5 * x;
}

PropositionReport proposition_check(const VectorXd& q_vec, double eps_scale, double sigma, double kappa,
                                    long long samples, std::uint64_t seed) {
    const int j_dim = static_cast<int>(q_vec.size());
    require(j_dim >= 2, "proposition_check: J must be >= 2");
    require(kappa > 0.0, "proposition_check: kappa must be positive");
    require(samples >= 100, "proposition_check: need at least 100 samples");
    const double qnorm = q_vec.norm();
    require(qnorm > 0.0, "proposition_check: Q must be nonzero");

    rng::Engine eng(seed);
    PropositionReport rep;
    rep.j_dim = j_dim;
    rep.kappa = kappa;
    rep.phi_prime = 3.0 + 5.0 * eng.uniform();
    rep.phase_cycles = eng.uniform();

    const cplx rot = std::polar(1.0, kTwoPi * rep.phase_cycles);
    auto complex_noise = [&](double scale) {
        VectorXcd z(j_dim);
        // Circular complex Gaussian, E|z_j|^2 = scale^2.
        const double s = scale / std::sqrt(2.0);
        for (int j = 0; j < j_dim; ++j) z[j] = cplx(s * eng.normal(), s * eng.normal());
        return z;
    };

    const VectorXcd eps = complex_noise(eps_scale);
    const VectorXcd eps_tilde = complex_noise(eps_scale);
    const VectorXcd phi_vec = complex_noise(1.0);
    const VectorXcd phi_tilde = complex_noise(1.0);

    const VectorXcd b_pert = eps + sigma * phi_vec;            // joins the denominator
    const VectorXcd a_pert = eps_tilde + sigma * phi_tilde;    // joins the numerator
    rep.noise_norm = b_pert.norm();
    if (rep.noise_norm > kappa)
        throw NumericError("proposition_check: drawn noise violates the norm condition (||eps + sigma Phi|| = " +
                           std::to_string(rep.noise_norm) + " > kappa)");

    const VectorXcd big_b = rot * q_vec.cast<cplx>();
    const VectorXcd big_a = rep.phi_prime * big_b;
    const VectorXcd v_vec = a_pert - rep.phi_prime * b_pert;

    // Predicted center and printed bounds.
    const cplx p_qv = q_vec.cast<cplx>().dot(v_vec.matrix()) / qnorm;
    rep.predicted_center = rep.phi_prime + std::conj(rot) * p_qv;
    const double kappa_eff = std::min(0.999, kappa / qnorm);
    const double c = lemma_c_exact(j_dim, kappa_eff);
    const double x =
        (1.0 - c / (j_dim - 1)) * std::norm(p_qv) + c * v_vec.squaredNorm() / (j_dim - 1);
    rep.e1_bound = 0.5 * std::sqrt(std::max(0.0, x));
    rep.var_bound = 2.5 * x;

    VectorXd r(j_dim);
    long long attempts = 0, accepted = 0;
    double sum_re = 0, sum_im = 0, sum_sq = 0, sum_sq2 = 0;
    std::vector<cplx> kept;
    kept.reserve(static_cast<std::size_t>(samples));
    while (accepted < samples) {
        sphere_point(eng, r);
        ++attempts;
        if (attempts > 1000 * samples + 1000000)
            throw NumericError("proposition_check: rejection sampling starved (acceptance rate ~" +
                               std::to_string(static_cast<double>(accepted) / static_cast<double>(attempts)) + ")");
        cplx den(0.0, 0.0), num(0.0, 0.0);
        for (int j = 0; j < j_dim; ++j) {
            den += r[j] * (big_b[j] + b_pert[j]);
            num += r[j] * (big_a[j] + a_pert[j]);
        }
        if (!(std::abs(den) > 2.0 * kappa) || !(den.real() > 0.0)) continue;
        ++accepted;
        const cplx w = num / den;
        kept.push_back(w);
        sum_re += w.real();
        sum_im += w.imag();
    }
    const double m = static_cast<double>(samples);
    rep.acceptance_rate = m / static_cast<double>(attempts);
    rep.mc_mean = cplx(sum_re / m, sum_im / m);
    for (const cplx& w : kept) {
        const double d = std::norm(w - rep.mc_mean);
        sum_sq += d;
        sum_sq2 += d * d;
    }
    rep.mc_var = sum_sq / m;
    rep.var_se = std::sqrt(std::max(0.0, sum_sq2 / m - rep.mc_var * rep.mc_var) / m);
    // SE of the complex mean magnitude: treat components independently.
    double vre = 0, vim = 0;
    for (const cplx& w : kept) {
        vre += (w.real() - rep.mc_mean.real()) * (w.real() - rep.mc_mean.real());
        vim += (w.imag() - rep.mc_mean.imag()) * (w.imag() - rep.mc_mean.imag());
    }
    rep.mean_se = std::sqrt((vre + vim) / (m * m));

    rep.mean_dev = std::abs(rep.mc_mean - rep.predicted_center);
    rep.mean_within = rep.mean_dev <= rep.e1_bound + 3.0 * rep.mean_se + 1e-12;
    rep.var_within = rep.mc_var <= rep.var_bound + 3.0 * rep.var_se + 1e-12;
    return rep;
}

}  // namespace conceft::eval
