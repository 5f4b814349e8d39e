// Acceptance suite: one self-contained check per criterion, each printing a
// PASS/FAIL line with its runtime and the measured numbers.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/evaluation.hpp"
#include "core/io.hpp"
#include "core/pipeline.hpp"
#include "core/rng.hpp"
#include "core/signal_model.hpp"
#include "core/squeeze.hpp"
#include "core/tapers.hpp"
#include "core/threading.hpp"
#include "core/transforms.hpp"
#include "support/oracles.hpp"

using namespace conceft;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kMasterSeed = 20150610;

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Stats {
    double mean = 0.0, sd = 0.0;
    int n = 0;
};

Stats stats_of(const std::vector<double>& xs) {
    Stats s;
    s.n = static_cast<int>(xs.size());
    for (double x : xs) s.mean += x;
    s.mean /= s.n;
    for (double x : xs) s.sd += (x - s.mean) * (x - s.mean);
    s.sd = s.n > 1 ? std::sqrt(s.sd / (s.n - 1)) : 0.0;
    return s;
}

double pooled_se(const Stats& a, const Stats& b) {
    return std::sqrt(a.sd * a.sd / a.n + b.sd * b.sd / b.n);
}

SampledSignal tone5hz() {
    SampledSignal s;
    s.rate_hz = 160.0;
    s.samples.resize(1600);
    for (Eigen::Index i = 0; i < 1600; ++i)
        s.samples[i] = std::cos(kTwoPi * 5.0 * static_cast<double>(i) / 160.0);
    return s;
}

double worst_interior_concentration(const SqueezedTF& s, double f0) {
    const double width = s.freq_grid[1] - s.freq_grid[0];
    const auto target = static_cast<Eigen::Index>(std::floor((f0 - (s.freq_grid[0] - 0.5 * width)) / width));
    double worst = 1.0;
    for (Eigen::Index t = 0; t < s.time_grid.size(); ++t) {
        if (s.boundary_mask[static_cast<std::size_t>(t)]) continue;
        double total = 0.0, band = 0.0;
        for (Eigen::Index b = 0; b < s.freq_grid.size(); ++b) {
            const double m = std::abs(s.values(b, t));
            total += m;
            if (std::abs(b - target) <= 2) band += m;
        }
        if (total > 0.0) worst = std::min(worst, band / total);
    }
    return worst;
}

// criterion 1: taper family orthonormality
Outcome criterion_orthonormality() {
    const auto hermite = tapers::hermite_windows(6, 5.0 / 16.0, 160.0);
    const auto morse = tapers::morse_wavelets(30.0, 9.0, 4);
    const double gh = hermite.gram_error();
    const double gm = morse.gram_error();
    Outcome out;
    out.pass = gh < 1e-6 && gm < 1e-6;
    std::ostringstream d;
    d << "hermite gram dev " << gh << ", morse gram dev " << gm << " (tol 1e-6)";
    out.detail = d.str();
    return out;
}

// criterion 2: pure-tone concentration for both backends
Outcome criterion_concentration() {
    const auto s = tone5hz();
    SqueezeConfig cfg;
    cfg.freq_bins = 1024;
    cfg.freq_min_hz = 0.0;
    cfg.freq_max_hz = 20.0;
    cfg.boundary_ref_freq_hz = 5.0;

    const auto morse = tapers::morse_wavelets(30.0, 9.0, 1);
    const auto grid = ScaleGrid::geometric(0.5, 40.0, 32.0);
    const auto w = tf::cwt(s, morse, 0, grid);
    const auto dw = tf::d_cwt(s, morse, 0, grid);
    const double cwt_frac = worst_interior_concentration(squeeze::sst_cwt(w, dw, cfg, grid), 5.0);

    const auto hermite = tapers::hermite_windows(1, 5.0 / 16.0, 160.0);
    tf::StftParams sp;
    sp.fft_size = 2048;
    const auto v = tf::stft(s, hermite, 0, sp);
    const auto dv = tf::d_stft(s, hermite, 0, sp);
    const double stft_frac = worst_interior_concentration(squeeze::sst_stft(v, dv, cfg), 5.0);

    Outcome out;
    out.pass = cwt_frac >= 0.95 && stft_frac >= 0.95;
    std::ostringstream d;
    d << "per-slice mass within +-2 bins of 5 Hz: cwt-sst " << cwt_frac * 100 << "%, stft-sst " << stft_frac * 100
      << "% (need >= 95%)";
    out.detail = d.str();
    return out;
}

// criterion 3: CDF transport equals LP minimum-cost transport
Outcome criterion_ot_oracle() {
    rng::Engine eng(rng::derive_seed(kMasterSeed, 3));
    VectorXd grid(12);
    for (int i = 0; i < 12; ++i) grid[i] = (i + 0.5) * (10.0 / 12.0);
    VectorXd times(1);
    times[0] = 0.0;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        TvPS a, b;
        a.freq_grid = b.freq_grid = grid;
        a.time_grid = b.time_grid = times;
        a.values.resize(12, 1);
        b.values.resize(12, 1);
        for (int i = 0; i < 12; ++i) {
            a.values(i, 0) = eng.uniform() + 1e-9;
            b.values(i, 0) = eng.uniform() + 1e-9;
        }
        a.boundary_mask.assign(1, 0);
        b.boundary_mask.assign(1, 0);
        const double cdf = eval::ot_distance(a, b, {}).mean;
        const double lp = oracles::min_cost_transport(grid, a.values.col(0), b.values.col(0));
        worst = std::max(worst, std::abs(cdf - lp));
    }
    Outcome out;
    out.pass = worst < 1e-9;
    std::ostringstream d;
    d << "max |cdf - lp| = " << worst << " over 100 random 12-bin pairs (tol 1e-9)";
    out.detail = d.str();
    return out;
}

struct MethodRun {
    std::vector<double> conceft, mtsst, sst;
};

// shared experiment driver for criteria 4 and 5
MethodRun run_ordering_experiment(const signal::GeneratedSignal& gen, NoiseKind kind, int n_seeds,
                                  std::uint64_t stream) {
    const auto fam = tapers::morse_wavelets(30.0, 9.0, 2);
    const auto grid = ScaleGrid::geometric(0.5, 40.0, 32.0);
    SqueezeConfig cfg;
    cfg.freq_bins = 1024;
    cfg.freq_max_hz = 20.0;
    const double skip = 4.0 * fam.envelope_std_at(signal::min_ground_truth_if(gen.truth));

    MethodRun out;
    for (int rep = 0; rep < n_seeds; ++rep) {
        NoiseSpec spec{kind, 0.0, rng::derive_seed(kMasterSeed, stream, static_cast<std::uint64_t>(rep))};
        const auto noisy = signal::add_noise(gen.signal, spec);
        const auto set = tf::cwt_set(noisy.noisy, fam, grid);

        eval::OTConfig ot;
        ot.boundary_skip_sec = skip;
        auto ot_of = [&](const TvPS& p) {
            const TvPS ideal = signal::ideal_tvps(gen.truth, p.freq_grid, p.time_grid);
            return eval::ot_distance(p, ideal, ot).mean;
        };

        const auto proj = tapers::random_unit_vectors(
            20, 2, rng::derive_seed(kMasterSeed, stream + 1, static_cast<std::uint64_t>(rep)));
        squeeze::ConceftOptions opt;
        opt.squeeze = cfg;
        out.conceft.push_back(ot_of(squeeze::conceft(set, fam, proj, opt, &grid).tvps));

        std::vector<SqueezedTF> parts;
        parts.push_back(squeeze::sst_cwt(set.w[0], set.dw[0], cfg, grid));
        parts.push_back(squeeze::sst_cwt(set.w[1], set.dw[1], cfg, grid));
        out.sst.push_back(ot_of(squeeze::tvps_of(parts[0])));
        out.mtsst.push_back(ot_of(squeeze::tvps_of(squeeze::mtsst(parts))));
    }
    return out;
}

// criterion 4: ConceFT < MTSST < mono-SST per noise kind, gaps > 1 pooled SE
Outcome criterion_ordering() {
    const auto gen = signal::make_class_c_signal(kMasterSeed);
    Outcome out;
    out.pass = true;
    std::ostringstream d;
    int stream = 40;
    for (auto [kind, name] : {std::pair<NoiseKind, const char*>{NoiseKind::GaussianWhite, "gaussian"},
                              {NoiseKind::Arma11, "arma11"},
                              {NoiseKind::Poisson, "poisson"}}) {
        const MethodRun runs = run_ordering_experiment(gen, kind, 10, static_cast<std::uint64_t>(stream));
        stream += 2;
        const Stats c = stats_of(runs.conceft), m = stats_of(runs.mtsst), s = stats_of(runs.sst);
        const bool ok = (c.mean < m.mean - pooled_se(c, m)) && (m.mean < s.mean - pooled_se(m, s));
        out.pass = out.pass && ok;
        d << name << ": conceft " << c.mean << ", mtsst " << m.mean << ", sst " << s.mean << " (se "
          << pooled_se(c, m) << "/" << pooled_se(m, s) << (ok ? ", ordered) " : ", ORDER VIOLATED) ");
    }
    out.detail = d.str();
    return out;
}

// criterion 5: elbow in the number of projections
Outcome criterion_elbow() {
    const auto gen = signal::make_class_c_signal(kMasterSeed);
    const auto fam = tapers::morse_wavelets(30.0, 9.0, 2);
    const auto grid = ScaleGrid::geometric(0.5, 40.0, 32.0);
    SqueezeConfig cfg;
    cfg.freq_bins = 1024;
    cfg.freq_max_hz = 20.0;
    const double skip = 4.0 * fam.envelope_std_at(signal::min_ground_truth_if(gen.truth));
    const std::vector<int> n_list = {1, 5, 10, 20, 50};

    std::map<int, std::vector<double>> per_n;
    for (int rep = 0; rep < 30; ++rep) {
        NoiseSpec spec{NoiseKind::GaussianWhite, 0.0,
                       rng::derive_seed(kMasterSeed, 50, static_cast<std::uint64_t>(rep))};
        const auto noisy = signal::add_noise(gen.signal, spec);
        const auto set = tf::cwt_set(noisy.noisy, fam, grid);
        const auto proj =
            tapers::random_unit_vectors(50, 2, rng::derive_seed(kMasterSeed, 51, static_cast<std::uint64_t>(rep)));
        squeeze::ConceftOptions opt;
        opt.squeeze = cfg;
        squeeze::conceft_stream(set, fam, proj, opt, &grid, n_list,
                                [&](int n, const squeeze::ConceftOutput& res) {
                                    const TvPS ideal =
                                        signal::ideal_tvps(gen.truth, res.tvps.freq_grid, res.tvps.time_grid);
                                    eval::OTConfig ot;
                                    ot.boundary_skip_sec = skip;
                                    per_n[n].push_back(eval::ot_distance(res.tvps, ideal, ot).mean);
                                });
    }
    const Stats s1 = stats_of(per_n[1]), s20 = stats_of(per_n[20]), s50 = stats_of(per_n[50]);
    const bool drop_ok = s20.mean <= s1.mean - 2.0 * pooled_se(s1, s20);
    const bool flat_ok = std::abs(s50.mean - s20.mean) <= 0.10 * s20.mean;
    Outcome out;
    out.pass = drop_ok && flat_ok;
    std::ostringstream d;
    d << "mean OT: N=1 " << s1.mean << ", N=5 " << stats_of(per_n[5]).mean << ", N=10 " << stats_of(per_n[10]).mean
      << ", N=20 " << s20.mean << ", N=50 " << s50.mean << "; drop " << (drop_ok ? "ok" : "TOO SMALL")
      << " (2se = " << 2.0 * pooled_se(s1, s20) << "), plateau " << (flat_ok ? "ok" : "NOT FLAT");
    out.detail = d.str();
    return out;
}

// criterion 6: restricted-sphere moment identities
Outcome criterion_lemma() {
    rng::Engine eng(rng::derive_seed(kMasterSeed, 60));
    Outcome out;
    out.pass = true;
    std::ostringstream d;
    struct Case {
        int j;
        double kappa;
    };
    eval::LemmaReport last;
    for (const Case cs : {Case{3, 0.2}, Case{10, 0.3}}) {
        VectorXd v(cs.j);
        for (int i = 0; i < cs.j; ++i) v[i] = eng.normal();
        v /= v.norm();
        VectorXcd u(cs.j);
        for (int i = 0; i < cs.j; ++i) u[i] = cplx(eng.normal(), eng.normal());
        const auto rep = eval::lemma_s3_check(u, v, cs.kappa, 1000000, rng::derive_seed(kMasterSeed, 61));
        out.pass = out.pass && rep.mean_within_3se && rep.second_within_3se;
        d << "(J=" << cs.j << ",k=" << cs.kappa << "): mean dev " << std::abs(rep.mc_mean - rep.formula_mean) << " vs 3se "
          << 3.0 * rep.mean_se << ", second dev " << std::abs(rep.mc_second - rep.formula_second) << " vs 3se "
          << 3.0 * rep.second_se << "; ";
        last = rep;
    }
    // asymptotic constant against the quadrature of the approximation chain
    const double rel = std::abs(last.c_asymptotic - last.c_gamma_approx) / last.c_gamma_approx;
    out.pass = out.pass && rel < 0.15;
    d << "asymptotic c " << last.c_asymptotic << " vs quadrature " << last.c_gamma_approx << " (rel " << rel
      << ", need < 0.15; exact c " << last.c_exact << ")";
    out.detail = d.str();
    return out;
}

// criterion 7: reassignment-rule variance bound
Outcome criterion_proposition() {
    Outcome out;
    out.pass = true;
    std::ostringstream d;
    rng::Engine eng(rng::derive_seed(kMasterSeed, 70));
    for (int j : {2, 4, 8}) {
        VectorXd q(j);
        for (int i = 0; i < j; ++i) q[i] = 1.0 + 0.2 * eng.uniform();
        int ok = 0;
        for (int draw = 0; draw < 100; ++draw) {
            const auto rep = eval::proposition_check(
                q, 0.005, 0.02, 0.35, 20000, rng::derive_seed(kMasterSeed, 71, static_cast<std::uint64_t>(j * 1000 + draw)));
            if (rep.var_within) ++ok;
        }
        out.pass = out.pass && ok >= 99;
        d << "J=" << j << ": var bound held " << ok << "/100; ";
    }
    double prev = std::numeric_limits<double>::infinity();
    bool decreasing = true;
    for (int j : {2, 4, 8}) {
        const double b = eval::proposition_var_bound(j, 0.3, 0.1, 1.0);
        decreasing = decreasing && b < prev;
        d << "bound(J=" << j << ") = " << b << "; ";
        prev = b;
    }
    out.pass = out.pass && decreasing;
    d << (decreasing ? "strictly decreasing in J" : "NOT decreasing in J");
    out.detail = d.str();
    return out;
}

// criterion 8: SNR exactness across kinds and random targets
Outcome criterion_snr() {
    const auto gen = signal::make_class_c_signal(kMasterSeed);
    rng::Engine eng(rng::derive_seed(kMasterSeed, 80));
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const double target = -20.0 + 40.0 * eng.uniform();
        for (auto kind :
             {NoiseKind::GaussianWhite, NoiseKind::Arma11, NoiseKind::Poisson, NoiseKind::StudentT4Iid}) {
            NoiseSpec spec{kind, target, eng.raw()};
            const auto noisy = signal::add_noise(gen.signal, spec);
            worst = std::max(worst, std::abs(noisy.realized_snr_db - target));
        }
    }
    Outcome out;
    out.pass = worst < 1e-9;
    std::ostringstream d;
    d << "max |realized - target| = " << worst << " dB over 1000 targets x 4 kinds (tol 1e-9)";
    out.detail = d.str();
    return out;
}

// criterion 9: band-integrated amplitude reconstruction
Outcome criterion_reconstruction() {
    const auto gen = signal::make_class_c_signal(kMasterSeed);
    const auto& c1 = gen.truth.components[0];
    SampledSignal s;
    s.rate_hz = gen.signal.rate_hz;
    s.samples = VectorXd::Zero(gen.signal.size());
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (c1.alive(s.time(i))) s.samples[i] = c1.amplitude[i] * std::cos(kTwoPi * c1.phase_cycles[i]);

    const auto fam = tapers::morse_wavelets(30.0, 9.0, 1);
    const auto grid = ScaleGrid::geometric(1.0, 40.0, 32.0);
    VectorXd e0 = VectorXd::Ones(1);
    const double c_psi = squeeze::admissibility_constant(fam, e0);
    SqueezeConfig cfg;
    cfg.freq_bins = 1024;
    cfg.freq_max_hz = 20.0;
    const auto sst =
        squeeze::sst_cwt(tf::cwt(s, fam, 0, grid), tf::d_cwt(s, fam, 0, grid), cfg, grid, 0.5 * c_psi);
    const VectorXd amp = squeeze::reconstruct_amplitude(sst, c1.if_hz, 1.0);

    const double lo = c1.support_begin + 0.1 * (c1.support_end - c1.support_begin);
    const double hi = c1.support_end - 0.1 * (c1.support_end - c1.support_begin);
    double num = 0.0, den = 0.0;
    for (Eigen::Index t = 0; t < amp.size(); ++t) {
        const double tt = s.time(t);
        if (tt < lo || tt > hi || sst.boundary_mask[static_cast<std::size_t>(t)]) continue;
        num += (amp[t] - c1.amplitude[t]) * (amp[t] - c1.amplitude[t]);
        den += c1.amplitude[t] * c1.amplitude[t];
    }
    const double rel = std::sqrt(num / den);
    Outcome out;
    out.pass = rel < 0.10;
    std::ostringstream d;
    d << "relative L2 error " << rel * 100 << "% on the interior 80% of the support (need < 10%)";
    out.detail = d.str();
    return out;
}

// criterion 10: byte-identical artifacts across a repeated pipeline run
Outcome criterion_reproducibility() {
    const fs::path base = fs::temp_directory_path() / "conceft_acceptance_repro";
    fs::remove_all(base);
    fs::create_directories(base);

    cfg::RunConfig c;
    c.seed = kMasterSeed;
    c.signal_kind = cfg::SignalKind::ClassC;
    c.noise_kind = NoiseKind::GaussianWhite;
    c.snr_db = 0.0;
    c.method = cfg::Method::Conceft;
    c.backend = cfg::Backend::Cwt;

    auto run_all = [&](const std::string& dir) {
        pipeline::cmd_simulate(c, dir);
        pipeline::cmd_analyze(c, dir);
        pipeline::cmd_evaluate(c, dir);
        pipeline::cmd_render(c, dir);
    };
    run_all((base / "a").string());
    run_all((base / "b").string());

    Outcome out;
    out.pass = true;
    std::ostringstream d;
    int compared = 0;
    for (const auto& entry : fs::directory_iterator(base / "a")) {
        const std::string name = entry.path().filename().string();
        const std::string lhs = io::read_text_file(entry.path().string());
        const std::string rhs = io::read_text_file((base / "b" / name).string());
        ++compared;
        if (lhs != rhs) {
            out.pass = false;
            d << name << " differs; ";
        }
    }
    d << compared << " artifacts byte-compared (simulate/analyze/evaluate/render)";
    out.detail = d.str();
    fs::remove_all(base);
    return out;
}

}  // namespace

int main() {
    struct Entry {
        int id;
        const char* name;
        std::function<Outcome()> run;
        double limit_sec;  // 0 = unbounded (minutes-scale)
    };
    const std::vector<Entry> criteria = {
        {1, "taper family orthonormality", criterion_orthonormality, 1.0},
        {2, "pure-tone SST concentration", criterion_concentration, 10.0},
        {3, "OT oracle equivalence (CDF vs LP)", criterion_ot_oracle, 30.0},
        {4, "method ordering conceft < mtsst < sst", criterion_ordering, 0.0},
        {5, "projection-count elbow at N=20", criterion_elbow, 0.0},
        {6, "restricted-sphere moment identities", criterion_lemma, 60.0},
        {7, "reassignment variance bound", criterion_proposition, 60.0},
        {8, "SNR exactness", criterion_snr, 0.0},
        {9, "amplitude reconstruction by band integration", criterion_reconstruction, 0.0},
        {10, "pipeline reproducibility", criterion_reproducibility, 0.0},
    };

    int failures = 0;
    for (const auto& entry : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = entry.run();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string("exception: ") + e.what();
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool in_time = entry.limit_sec <= 0.0 || seconds < entry.limit_sec;
        if (!in_time) out.detail += " [RUNTIME LIMIT EXCEEDED]";
        const bool pass = out.pass && in_time;
        if (!pass) ++failures;
        std::printf("[%s] criterion %2d: %s (%.1f s) - %s\n", pass ? "PASS" : "FAIL", entry.id, entry.name, seconds,
                    out.detail.c_str());
        std::fflush(stdout);
    }
    if (failures == 0)
        std::printf("acceptance: all %zu criteria passed\n", criteria.size());
    else
        std::printf("acceptance: %d criteria FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
