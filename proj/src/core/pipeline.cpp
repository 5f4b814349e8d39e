#include "core/pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "core/evaluation.hpp"
#include "core/io.hpp"
#include "core/rng.hpp"
#include "core/signal_model.hpp"
#include "core/threading.hpp"

namespace conceft::pipeline {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void log_event(const json& j) { std::cerr << j.dump() << "\n"; }

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

std::string join(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

struct Stats {
    double mean = 0.0;
    double sd = 0.0;
    int n = 0;
};

Stats stats_of(const std::vector<double>& xs) {
    Stats s;
    s.n = static_cast<int>(xs.size());
    if (s.n == 0) return s;
    double acc = 0.0;
    for (double x : xs) acc += x;
    s.mean = acc / s.n;
    if (s.n > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.sd = std::sqrt(ss / (s.n - 1));
    }
    return s;
}

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

cfg::Method method_from_name(const std::string& name) {
    if (name == "sst") return cfg::Method::Sst;
    if (name == "mtsst") return cfg::Method::Mtsst;
    if (name == "conceft") return cfg::Method::Conceft;
    throw ConfigError("unknown method name '" + name + "'");
}

json diag_json(const SqueezeDiagnostics& d) {
    return json{{"threshold_used", d.threshold_used},
                {"points_total", d.points_total},
                {"points_passing", d.points_passing},
                {"points_deposited", d.points_deposited},
                {"points_dropped", d.points_dropped},
                {"mass_deposited", d.mass_deposited},
                {"mass_dropped", d.mass_dropped}};
}

}  // namespace

PreparedSignal prepare_signal(const cfg::RunConfig& c) {
    PreparedSignal out;
    switch (c.signal_kind) {
        case cfg::SignalKind::ClassC: {
            auto gen = signal::make_class_c_signal(c.effective_signal_seed(), c.rate_hz, c.duration_sec);
            out.clean = std::move(gen.signal);
            out.truth = std::move(gen.truth);
            out.has_truth = true;
            out.rejected_seeds = gen.rejected_seeds;
            break;
        }
        case cfg::SignalKind::Deterministic: {
            auto gen = signal::deterministic_signal(c.rate_hz, c.duration_sec);
            out.clean = std::move(gen.signal);
            out.truth = std::move(gen.truth);
            out.has_truth = true;
            break;
        }
        case cfg::SignalKind::File: {
            out.clean = io::load_signal(c.signal_path);
            if (!c.eval_truth_path.empty()) {
                out.truth = io::load_ground_truth_csv(c.eval_truth_path);
                out.has_truth = true;
            }
            break;
        }
    }
    return out;
}

tapers::ReferenceFamily build_family(const cfg::RunConfig& c) {
    if (c.backend == cfg::Backend::Cwt) return tapers::morse_wavelets(c.beta, c.gamma, c.effective_j());
    return tapers::hermite_windows(c.effective_j(), c.sigma, c.rate_hz);
}

ScaleGrid build_scale_grid(const cfg::RunConfig& c) {
    return ScaleGrid::geometric(c.scale_freq_min_hz, c.scale_freq_max_hz, c.voices_per_octave);
}

tf::TransformSet build_transforms(const SampledSignal& y, const tapers::ReferenceFamily& fam,
                                  const cfg::RunConfig& c) {
    if (c.backend == cfg::Backend::Cwt) return tf::cwt_set(y, fam, build_scale_grid(c), c.threads);
    tf::StftParams p;
    p.fft_size = c.stft_fft_size;
    p.hop = c.stft_hop;
    p.freq_max_hz = c.effective_stft_freq_max(y.rate_hz / 2.0);
    p.threads = c.threads;
    return tf::stft_set(y, fam, p);
}

SqueezedTF run_method(const tf::TransformSet& set, const tapers::ReferenceFamily& fam, const cfg::RunConfig& c,
                      cfg::Method method, std::uint64_t projection_seed) {
    const bool is_cwt = c.backend == cfg::Backend::Cwt;
    const ScaleGrid grid = is_cwt ? build_scale_grid(c) : ScaleGrid{};

    auto amp_const_of = [&](int order) {
        VectorXd e = VectorXd::Zero(fam.count);
        e[order] = 1.0;
        return is_cwt ? 0.5 * squeeze::admissibility_constant(fam, e) : 0.5 * squeeze::window_zero_value(fam, e);
    };
    auto single = [&](int order) {
        const auto& w = set.w[static_cast<std::size_t>(order)];
        const auto& dw = set.dw[static_cast<std::size_t>(order)];
        return is_cwt ? squeeze::sst_cwt(w, dw, c.squeeze, grid, amp_const_of(order), c.threads)
                      : squeeze::sst_stft(w, dw, c.squeeze, amp_const_of(order), c.threads);
    };

    switch (method) {
        case cfg::Method::Sst:
            return single(0);
        case cfg::Method::Mtsst: {
            std::vector<SqueezedTF> parts;
            for (int j = 0; j < fam.count; ++j) parts.push_back(single(j));
            return squeeze::mtsst(parts);
        }
        case cfg::Method::Conceft: {
            const auto proj = tapers::random_unit_vectors(c.n_projections, fam.count, projection_seed);
            squeeze::ConceftOptions opt;
            opt.squeeze = c.squeeze;
            opt.threads = c.threads;
            return squeeze::conceft(set, fam, proj, opt, is_cwt ? &grid : nullptr).c;
        }
    }
    throw InvalidArgumentError("run_method: unreachable");
}

double eval_boundary_skip(const cfg::RunConfig& c, const tapers::ReferenceFamily& fam, const GroundTruth& gt) {
    switch (c.eval_boundary) {
        case cfg::BoundaryPolicy::None:
            return 0.0;
        case cfg::BoundaryPolicy::Seconds:
            return c.eval_boundary_sec;
        case cfg::BoundaryPolicy::Auto: {
            // twice the effective half-width (two envelope stds) at the
            // lowest ground-truth IF
            const double f_min = gt.components.empty() ? c.squeeze.boundary_ref_freq_hz : signal::min_ground_truth_if(gt);
            return 4.0 * fam.envelope_std_at(std::max(1e-6, f_min));
        }
    }
    return 0.0;
}

void cmd_simulate(const cfg::RunConfig& c, const std::string& out_dir) {
    if (c.signal_kind == cfg::SignalKind::File)
        throw ConfigError("simulate: signal.kind = \"file\" has nothing to simulate");
    ensure_dir(out_dir);

    PreparedSignal sig = prepare_signal(c);
    json manifest;
    manifest["command"] = "simulate";
    manifest["master_seed"] = c.seed;
    manifest["signal_seed"] = c.effective_signal_seed();
    manifest["rejected_seeds"] = sig.rejected_seeds;

    std::vector<std::string> files;
    io::save_signal_cft1(sig.clean, join(out_dir, "signal_clean.cft1"));
    io::save_signal_csv(sig.clean, join(out_dir, "signal_clean.csv"));
    io::save_ground_truth_csv(sig.truth, join(out_dir, "ground_truth.csv"));
    files = {"signal_clean.cft1", "signal_clean.csv", "ground_truth.csv"};

    if (c.noise_enabled) {
        NoiseSpec spec{c.noise_kind, c.snr_db, c.effective_noise_seed(0)};
        auto noisy = signal::add_noise(sig.clean, spec);
        io::save_signal_cft1(noisy.noisy, join(out_dir, "signal_noisy.cft1"));
        io::save_signal_csv(noisy.noisy, join(out_dir, "signal_noisy.csv"));
        files.push_back("signal_noisy.cft1");
        files.push_back("signal_noisy.csv");
        manifest["noise_seed"] = spec.seed;
        manifest["realized_sigma"] = noisy.sigma;
        manifest["realized_snr_db"] = noisy.realized_snr_db;
        log_event({{"event", "noise_added"}, {"sigma", noisy.sigma}, {"snr_db", noisy.realized_snr_db}});
    }
    manifest["files"] = files;
    cfg::save_config(c, join(out_dir, "run_config.toml"));
    io::write_text_file(join(out_dir, "manifest.json"), manifest.dump(2) + "\n");
}

void cmd_analyze(const cfg::RunConfig& c, const std::string& out_dir) {
    ensure_dir(out_dir);
    PreparedSignal sig = prepare_signal(c);

    SampledSignal y = sig.clean;
    json manifest;
    manifest["command"] = "analyze";
    manifest["master_seed"] = c.seed;
    if (c.noise_enabled) {
        NoiseSpec spec{c.noise_kind, c.snr_db, c.effective_noise_seed(0)};
        auto noisy = signal::add_noise(y, spec);
        y = std::move(noisy.noisy);
        manifest["noise_seed"] = spec.seed;
        manifest["realized_sigma"] = noisy.sigma;
        manifest["realized_snr_db"] = noisy.realized_snr_db;
    }

    const auto fam = build_family(c);
    log_event({{"event", "transforms_start"}, {"backend", c.backend == cfg::Backend::Cwt ? "cwt" : "stft"}});
    const auto set = build_transforms(y, fam, c);
    log_event({{"event", "transforms_done"}});

    const std::uint64_t proj_seed = c.effective_projection_seed(0);
    SqueezedTF s = run_method(set, fam, c, c.method, proj_seed);
    TvPS p = squeeze::tvps_of(s);

    io::save_squeezed(s, join(out_dir, "squeezed.cft2"));
    io::save_tvps(p, join(out_dir, "tvps.cft2"));
    io::save_family_csv(fam, join(out_dir, "family.csv"));
    if (sig.has_truth) io::save_ground_truth_csv(sig.truth, join(out_dir, "ground_truth.csv"));

    json diag = diag_json(s.diag);
    diag["projection_seed"] = proj_seed;
    diag["gram_error"] = fam.gram_error();
    diag["rejected_seeds"] = sig.rejected_seeds;
    int invalid_rows = 0;
    for (const auto& w : set.w) invalid_rows += static_cast<int>(w.invalid_rows.size());
    diag["invalid_scale_rows"] = invalid_rows;
    if (invalid_rows > 0)
        log_event({{"event", "scales_beyond_resolution"}, {"rows", invalid_rows}});
    io::write_text_file(join(out_dir, "diagnostics.json"), diag.dump(2) + "\n");

    manifest["projection_seed"] = proj_seed;
    manifest["files"] = json::array({"squeezed.cft2", "tvps.cft2", "family.csv", "diagnostics.json"});
    if (sig.has_truth) manifest["files"].push_back("ground_truth.csv");
    cfg::save_config(c, join(out_dir, "run_config.toml"));
    io::write_text_file(join(out_dir, "manifest.json"), manifest.dump(2) + "\n");
}

namespace {

// Shared driver for the methods/snr_sweep evaluation protocols: per noise
// seed the base transforms are computed once and every method runs off them.
struct ExperimentRow {
    std::string method;
    double snr_db = 0.0;
    Stats stats;
};

std::vector<ExperimentRow> run_method_experiment(const cfg::RunConfig& c, const PreparedSignal& sig,
                                                 const std::vector<double>& snrs, int n_seeds) {
    const auto fam = build_family(c);
    const double skip = eval_boundary_skip(c, fam, sig.truth);

    std::vector<ExperimentRow> rows;
    for (double snr : snrs) {
        std::map<std::string, std::vector<double>> per_method;
        for (int rep = 0; rep < n_seeds; ++rep) {
            cfg::RunConfig cc = c;
            cc.snr_db = snr;
            NoiseSpec spec{c.noise_kind, snr, c.effective_noise_seed(static_cast<std::uint64_t>(rep))};
            auto noisy = signal::add_noise(sig.clean, spec);
            const auto set = build_transforms(noisy.noisy, fam, cc);
            for (const auto& name : c.eval_methods) {
                SqueezedTF s = run_method(set, fam, cc, method_from_name(name),
                                          c.effective_projection_seed(static_cast<std::uint64_t>(rep)));
                TvPS p = squeeze::tvps_of(s);
                TvPS ideal = signal::ideal_tvps(sig.truth, p.freq_grid, p.time_grid);
                eval::OTConfig ot;
                ot.alpha = c.ot_alpha;
                ot.boundary_skip_sec = skip;
                ot.threads = c.threads;
                per_method[name].push_back(eval::ot_distance(p, ideal, ot).mean);
            }
            log_event({{"event", "experiment_cell"}, {"snr_db", snr}, {"repeat", rep}});
        }
        for (const auto& name : c.eval_methods) {
            ExperimentRow row;
            row.method = name;
            row.snr_db = snr;
            row.stats = stats_of(per_method[name]);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

}  // namespace

void cmd_evaluate(const cfg::RunConfig& c, const std::string& out_dir) {
    ensure_dir(out_dir);
    json manifest;
    manifest["command"] = "evaluate";
    std::vector<std::string> files;

    if (c.eval_mode == cfg::EvalMode::Single) {
        const std::string tvps_path = c.eval_tvps_path.empty() ? join(out_dir, "tvps.cft2") : c.eval_tvps_path;
        const std::string truth_path =
            c.eval_truth_path.empty() ? join(out_dir, "ground_truth.csv") : c.eval_truth_path;
        if (!fs::exists(tvps_path)) throw IoError("evaluate: tvPS file not found: " + tvps_path);
        if (!fs::exists(truth_path)) throw IoError("evaluate: ground truth file not found: " + truth_path);

        TvPS p = io::load_tvps(tvps_path);
        GroundTruth gt = io::load_ground_truth_csv(truth_path);
        TvPS ideal = signal::ideal_tvps(gt, p.freq_grid, p.time_grid);

        const auto fam = build_family(c);
        eval::OTConfig ot;
        ot.alpha = c.ot_alpha;
        ot.boundary_skip_sec = eval_boundary_skip(c, fam, gt);
        ot.threads = c.threads;
        const auto rep = eval::ot_distance(p, ideal, ot);
        io::save_ot_report(rep, p.time_grid, join(out_dir, "ot_report.csv"), join(out_dir, "ot_summary.json"));
        files = {"ot_report.csv", "ot_summary.json"};
        manifest["mean_ot"] = rep.mean;
        manifest["boundary_skip_sec"] = ot.boundary_skip_sec;
    } else {
        PreparedSignal sig = prepare_signal(c);
        require(sig.has_truth, "evaluate: experiment modes need ground truth");
        const std::vector<double> snrs =
            c.eval_mode == cfg::EvalMode::SnrSweep
                ? (c.eval_snr_list.empty() ? std::vector<double>{-7, -6, -5, -4, -3, -2, -1, 0, 1, 2, 3, 4, 5, 6, 7}
                                           : c.eval_snr_list)
                : std::vector<double>{c.snr_db};
        const auto rows = run_method_experiment(c, sig, snrs, c.eval_noise_seeds);

        const char* fname = c.eval_mode == cfg::EvalMode::SnrSweep ? "snr_sweep.csv" : "method_comparison.csv";
        std::ostringstream csv;
        csv << "method,snr_db,n,mean_ot,sd_ot\n";
        for (const auto& r : rows)
            csv << r.method << ',' << fmt_double(r.snr_db) << ',' << r.stats.n << ',' << fmt_double(r.stats.mean)
                << ',' << fmt_double(r.stats.sd) << '\n';
        io::write_text_file(join(out_dir, fname), csv.str());
        files = {fname};

        json table = json::array();
        for (const auto& r : rows)
            table.push_back({{"method", r.method},
                             {"snr_db", r.snr_db},
                             {"n", r.stats.n},
                             {"mean_ot", r.stats.mean},
                             {"sd_ot", r.stats.sd}});
        manifest["table"] = table;

        if (c.eval_mode == cfg::EvalMode::Methods && !rows.empty()) {
            // methods sorted by mean OT, best first
            std::vector<const ExperimentRow*> sorted;
            for (const auto& r : rows) sorted.push_back(&r);
            std::sort(sorted.begin(), sorted.end(),
                      [](const ExperimentRow* a, const ExperimentRow* b) { return a->stats.mean < b->stats.mean; });
            std::string ordering;
            for (const auto* r : sorted) ordering += (ordering.empty() ? "" : " < ") + r->method;
            manifest["ordering"] = ordering;
        }
    }

    manifest["files"] = files;
    cfg::save_config(c, join(out_dir, "run_config.toml"));
    io::write_text_file(join(out_dir, "manifest.json"), manifest.dump(2) + "\n");
}

namespace {

struct SweepCell {
    double gamma = 0.0;
    double beta = 0.0;
    int j = 0;
    int x_index = 0;  // heat-map column (beta cycles fastest within gamma)
    Stats stats;
    bool feasible = true;
    std::string error;
};

void write_heatmap_png(const std::vector<SweepCell>& cells, const std::vector<int>& js, int n_x,
                       const std::string& path) {
    // Rows = J values (top = largest), columns = x index; lighter = smaller OT.
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& cell : cells)
        if (cell.feasible) {
            lo = std::min(lo, cell.stats.mean);
            hi = std::max(hi, cell.stats.mean);
        }
    if (!(hi > lo)) hi = lo + 1.0;

    const int cell_px = 8;
    eval::GrayImage img;
    img.width = n_x * cell_px;
    img.height = static_cast<int>(js.size()) * cell_px;
    img.pixels.assign(static_cast<std::size_t>(img.width) * img.height, 255);
    for (const auto& cell : cells) {
        int row = 0;
        for (std::size_t i = 0; i < js.size(); ++i)
            if (js[i] == cell.j) row = static_cast<int>(js.size() - 1 - i);
        const double frac = cell.feasible ? (cell.stats.mean - lo) / (hi - lo) : 1.0;
        const auto px = static_cast<std::uint8_t>(std::lround(255.0 * (1.0 - frac)));
        for (int dy = 0; dy < cell_px; ++dy)
            for (int dx = 0; dx < cell_px; ++dx)
                img.pixels[static_cast<std::size_t>((row * cell_px + dy)) * img.width + (cell.x_index - 1) * cell_px +
                           dx] = px;
    }
    io::write_png_gray(img, path);
}

}  // namespace

void cmd_sweep(const cfg::RunConfig& c, const std::string& out_dir) {
    ensure_dir(out_dir);
    PreparedSignal sig = prepare_signal(c);
    require(sig.has_truth, "sweep: needs a signal with ground truth");

    json manifest;
    manifest["command"] = "sweep";
    cfg::save_config(c, join(out_dir, "run_config.toml"));

    if (c.sweep_mode == cfg::SweepMode::MorseParams) {
        require(c.backend == cfg::Backend::Cwt, "sweep: morse_params mode needs the cwt backend");
        std::vector<SweepCell> cells;
        for (std::size_t gi = 0; gi < c.sweep_gammas.size(); ++gi)
            for (std::size_t bi = 0; bi < c.sweep_betas.size(); ++bi)
                for (int j : c.sweep_js) {
                    SweepCell cell;
                    cell.gamma = c.sweep_gammas[gi];
                    cell.beta = c.sweep_betas[bi];
                    cell.j = j;
                    cell.x_index = static_cast<int>(gi * c.sweep_betas.size() + bi) + 1;
                    cells.push_back(cell);
                }

        parallel_for(static_cast<long long>(cells.size()), c.threads, [&](long long begin, long long end) {
            for (long long i = begin; i < end; ++i) {
                SweepCell& cell = cells[static_cast<std::size_t>(i)];
                cfg::RunConfig cc = c;
                cc.beta = cell.beta;
                cc.gamma = cell.gamma;
                cc.j_count = cell.j;
                cc.n_projections = c.sweep_projections;
                cc.threads = 1;  // cells run in the worker pool
                try {
                    const auto fam = build_family(cc);
                    const double skip = eval_boundary_skip(cc, fam, sig.truth);
                    std::vector<double> ots;
                    for (int rep = 0; rep < c.sweep_repeats; ++rep) {
                        NoiseSpec spec{c.noise_kind, c.snr_db, c.effective_noise_seed(static_cast<std::uint64_t>(rep))};
                        auto noisy = signal::add_noise(sig.clean, spec);
                        const auto set = build_transforms(noisy.noisy, fam, cc);
                        SqueezedTF s = run_method(set, fam, cc, cfg::Method::Conceft,
                                                  c.effective_projection_seed(static_cast<std::uint64_t>(rep)));
                        TvPS p = squeeze::tvps_of(s);
                        TvPS ideal = signal::ideal_tvps(sig.truth, p.freq_grid, p.time_grid);
                        eval::OTConfig ot;
                        ot.alpha = c.ot_alpha;
                        ot.boundary_skip_sec = skip;
                        ot.threads = 1;
                        ots.push_back(eval::ot_distance(p, ideal, ot).mean);
                    }
                    cell.stats = stats_of(ots);
                } catch (const std::exception& e) {
                    cell.feasible = false;
                    cell.error = e.what();
                }
            }
        });

        std::ostringstream csv;
        csv << "x,gamma,beta,j,n,mean_ot,sd_ot,feasible\n";
        for (const auto& cell : cells)
            csv << cell.x_index << ',' << fmt_double(cell.gamma) << ',' << fmt_double(cell.beta) << ',' << cell.j
                << ',' << cell.stats.n << ',' << fmt_double(cell.stats.mean) << ',' << fmt_double(cell.stats.sd)
                << ',' << (cell.feasible ? 1 : 0) << '\n';
        io::write_text_file(join(out_dir, "sweep_heatmap.csv"), csv.str());
        write_heatmap_png(cells, c.sweep_js, static_cast<int>(c.sweep_gammas.size() * c.sweep_betas.size()),
                          join(out_dir, "sweep_heatmap.png"));

        int infeasible = 0;
        for (const auto& cell : cells)
            if (!cell.feasible) {
                ++infeasible;
                log_event({{"event", "sweep_cell_infeasible"},
                           {"gamma", cell.gamma},
                           {"beta", cell.beta},
                           {"j", cell.j},
                           {"error", cell.error}});
            }
        manifest["cells"] = cells.size();
        manifest["infeasible"] = infeasible;
        manifest["files"] = json::array({"sweep_heatmap.csv", "sweep_heatmap.png"});
    } else {
        // Projection-count sweep (elbow protocol): one projection stream per
        // repeat, prefix averages at each requested N.
        std::vector<int> n_list = c.sweep_n_list;
        require(!n_list.empty(), "sweep: projections mode needs sweep.n_list");
        std::sort(n_list.begin(), n_list.end());
        const int n_max = n_list.back();

        const auto fam = build_family(c);
        const ScaleGrid grid = c.backend == cfg::Backend::Cwt ? build_scale_grid(c) : ScaleGrid{};
        const double skip = eval_boundary_skip(c, fam, sig.truth);

        std::map<int, std::vector<double>> per_n;
        for (int rep = 0; rep < c.sweep_repeats; ++rep) {
            NoiseSpec spec{c.noise_kind, c.snr_db, c.effective_noise_seed(static_cast<std::uint64_t>(rep))};
            auto noisy = signal::add_noise(sig.clean, spec);
            const auto set = build_transforms(noisy.noisy, fam, c);
            const auto proj = tapers::random_unit_vectors(n_max, fam.count,
                                                          c.effective_projection_seed(static_cast<std::uint64_t>(rep)));
            squeeze::ConceftOptions opt;
            opt.squeeze = c.squeeze;
            opt.threads = c.threads;
            squeeze::conceft_stream(set, fam, proj, opt, c.backend == cfg::Backend::Cwt ? &grid : nullptr, n_list,
                                    [&](int n, const squeeze::ConceftOutput& out) {
                                        TvPS ideal = signal::ideal_tvps(sig.truth, out.tvps.freq_grid,
                                                                        out.tvps.time_grid);
                                        eval::OTConfig ot;
                                        ot.alpha = c.ot_alpha;
                                        ot.boundary_skip_sec = skip;
                                        ot.threads = c.threads;
                                        per_n[n].push_back(eval::ot_distance(out.tvps, ideal, ot).mean);
                                    });
            log_event({{"event", "sweep_repeat_done"}, {"repeat", rep}});
        }

        std::ostringstream csv;
        csv << "n_projections,repeats,mean_ot,sd_ot\n";
        for (int n : n_list) {
            const Stats st = stats_of(per_n[n]);
            csv << n << ',' << st.n << ',' << fmt_double(st.mean) << ',' << fmt_double(st.sd) << '\n';
        }
        io::write_text_file(join(out_dir, "elbow.csv"), csv.str());
        manifest["files"] = json::array({"elbow.csv"});
    }

    io::write_text_file(join(out_dir, "manifest.json"), manifest.dump(2) + "\n");
}

void cmd_render(const cfg::RunConfig& c, const std::string& out_dir) {
    ensure_dir(out_dir);
    std::vector<std::string> inputs = c.render_inputs;
    if (inputs.empty()) inputs.push_back(join(out_dir, "tvps.cft2"));

    json manifest;
    manifest["command"] = "render";
    std::vector<std::string> files;
    std::vector<eval::GrayImage> panels;

    for (const auto& input : inputs) {
        if (!fs::exists(input)) throw IoError("render: tvPS file not found: " + input);
        TvPS p = io::load_tvps(input);
        const auto result = eval::render(p, c.render);
        const std::string stem = fs::path(input).stem().string();
        const std::string png_name = stem + ".png";
        io::write_png_gray(result.image, join(out_dir, png_name));
        files.push_back(png_name);
        manifest[stem] = json{{"q_used", result.q_used}, {"norm_scale", result.norm_scale}};

        // Exact-comparison CSV of R for matrices of moderate size.
        if (result.r_matrix.size() <= (1 << 22)) {
            const std::string csv_name = stem + "_r.csv";
            std::ostringstream csv;
            for (Eigen::Index b = 0; b < result.r_matrix.rows(); ++b) {
                for (Eigen::Index t = 0; t < result.r_matrix.cols(); ++t)
                    csv << (t ? "," : "") << fmt_double(result.r_matrix(b, t));
                csv << '\n';
            }
            io::write_text_file(join(out_dir, csv_name), csv.str());
            files.push_back(csv_name);
        }
        panels.push_back(result.image);
    }

    if (panels.size() > 1) {
        // Side-by-side composition with a 2px separator.
        int height = 0, width = 0;
        for (const auto& p : panels) {
            height = std::max(height, p.height);
            width += p.width + 2;
        }
        width -= 2;
        eval::GrayImage panel;
        panel.width = width;
        panel.height = height;
        panel.pixels.assign(static_cast<std::size_t>(width) * height, 128);
        int x0 = 0;
        for (const auto& p : panels) {
            for (int y = 0; y < p.height; ++y)
                for (int x = 0; x < p.width; ++x)
                    panel.pixels[static_cast<std::size_t>(y) * width + x0 + x] =
                        p.pixels[static_cast<std::size_t>(y) * p.width + x];
            x0 += p.width + 2;
        }
        io::write_png_gray(panel, join(out_dir, "panel.png"));
        files.push_back("panel.png");
    }

    manifest["files"] = files;
    cfg::save_config(c, join(out_dir, "run_config.toml"));
    io::write_text_file(join(out_dir, "manifest.json"), manifest.dump(2) + "\n");
}

void run_command(const std::string& command, const cfg::RunConfig& c, const std::string& out_dir) {
    c.validate();
    const std::string dir = out_dir.empty() ? c.out_dir : out_dir;
    log_event({{"event", "command_start"}, {"command", command}, {"out_dir", dir}});
    if (command == "simulate")
        cmd_simulate(c, dir);
    else if (command == "analyze")
        cmd_analyze(c, dir);
    else if (command == "evaluate")
        cmd_evaluate(c, dir);
    else if (command == "sweep")
        cmd_sweep(c, dir);
    else if (command == "render")
        cmd_render(c, dir);
    else
        throw ConfigError("unknown command '" + command + "'");
    log_event({{"event", "command_done"}, {"command", command}});
}

}  // namespace conceft::pipeline
