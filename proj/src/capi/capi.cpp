#include "conceft/conceft.h"

#include <cmath>
#include <cstring>
#include <string>

#include "core/config.hpp"
#include "core/errors.hpp"
#include "core/evaluation.hpp"
#include "core/io.hpp"
#include "core/pipeline.hpp"
#include "core/signal_model.hpp"
#include "core/squeeze.hpp"
#include "core/tapers.hpp"
#include "core/transforms.hpp"

using namespace conceft;

struct cft_signal {
    SampledSignal value;
};
struct cft_ground_truth {
    GroundTruth value;
};
struct cft_family {
    tapers::ReferenceFamily value;
};
struct cft_result {
    SqueezedTF squeezed;
    TvPS tvps;
};

namespace {

thread_local std::string g_last_error;

cft_status status_of(const Error& e) {
    switch (e.code()) {
        case ErrorCode::Config: return CFT_ERROR_CONFIG;
        case ErrorCode::Numeric: return CFT_ERROR_NUMERIC;
        case ErrorCode::Io: return CFT_ERROR_IO;
        case ErrorCode::Invalid: return CFT_ERROR_INVALID;
    }
    return CFT_ERROR_INVALID;
}

template <typename Fn>
cft_status guarded(Fn&& fn) {
    try {
        fn();
        return CFT_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return status_of(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return CFT_ERROR_NUMERIC;
    } catch (...) {
        g_last_error = "unknown error";
        return CFT_ERROR_NUMERIC;
    }
}

cft_status invalid(const char* msg) {
    g_last_error = msg;
    return CFT_ERROR_INVALID;
}

NoiseKind noise_kind_of(const char* kind) {
    const std::string k = kind ? kind : "";
    if (k == "gaussian") return NoiseKind::GaussianWhite;
    if (k == "arma11") return NoiseKind::Arma11;
    if (k == "poisson") return NoiseKind::Poisson;
    if (k == "student_t4") return NoiseKind::StudentT4Iid;
    throw InvalidArgumentError("unknown noise kind '" + k + "'");
}

}  // namespace

extern "C" {

const char* cft_version(void) { return "conceft 1.0.0"; }

const char* cft_last_error(void) { return g_last_error.c_str(); }

cft_status cft_signal_create(const double* samples, size_t n, double rate_hz, double t0, cft_signal** out) {
    if (!samples || !out) return invalid("cft_signal_create: null argument");
    return guarded([&] {
        auto* s = new cft_signal;
        s->value.samples = Eigen::Map<const VectorXd>(samples, static_cast<Eigen::Index>(n));
        s->value.rate_hz = rate_hz;
        s->value.t0 = t0;
        try {
            s->value.validate();
        } catch (...) {
            delete s;
            throw;
        }
        *out = s;
    });
}

cft_status cft_signal_class_c(uint64_t seed, double rate_hz, double duration_sec, cft_signal** out_signal,
                              cft_ground_truth** out_truth) {
    if (!out_signal) return invalid("cft_signal_class_c: null out pointer");
    return guarded([&] {
        auto gen = signal::make_class_c_signal(seed, rate_hz, duration_sec);
        *out_signal = new cft_signal{std::move(gen.signal)};
        if (out_truth) *out_truth = new cft_ground_truth{std::move(gen.truth)};
    });
}

cft_status cft_signal_deterministic(double rate_hz, double duration_sec, cft_signal** out_signal,
                                    cft_ground_truth** out_truth) {
    if (!out_signal) return invalid("cft_signal_deterministic: null out pointer");
    return guarded([&] {
        auto gen = signal::deterministic_signal(rate_hz, duration_sec);
        *out_signal = new cft_signal{std::move(gen.signal)};
        if (out_truth) *out_truth = new cft_ground_truth{std::move(gen.truth)};
    });
}

cft_status cft_signal_add_noise(const cft_signal* in, const char* kind, double snr_db, uint64_t seed,
                                cft_signal** out, double* realized_sigma) {
    if (!in || !out) return invalid("cft_signal_add_noise: null argument");
    return guarded([&] {
        NoiseSpec spec{noise_kind_of(kind), snr_db, seed};
        auto noisy = signal::add_noise(in->value, spec);
        *out = new cft_signal{std::move(noisy.noisy)};
        if (realized_sigma) *realized_sigma = noisy.sigma;
    });
}

size_t cft_signal_length(const cft_signal* s) { return s ? static_cast<size_t>(s->value.size()) : 0; }

double cft_signal_rate(const cft_signal* s) { return s ? s->value.rate_hz : 0.0; }

cft_status cft_signal_samples(const cft_signal* s, double* out, size_t capacity) {
    if (!s || !out) return invalid("cft_signal_samples: null argument");
    if (capacity < static_cast<size_t>(s->value.size())) return invalid("cft_signal_samples: buffer too small");
    std::memcpy(out, s->value.samples.data(), sizeof(double) * static_cast<size_t>(s->value.size()));
    return CFT_OK;
}

cft_status cft_signal_save(const cft_signal* s, const char* path) {
    if (!s || !path) return invalid("cft_signal_save: null argument");
    return guarded([&] { io::save_signal(s->value, path); });
}

cft_status cft_signal_load(const char* path, cft_signal** out) {
    if (!path || !out) return invalid("cft_signal_load: null argument");
    return guarded([&] { *out = new cft_signal{io::load_signal(path)}; });
}

void cft_signal_free(cft_signal* s) { delete s; }

cft_status cft_ground_truth_save(const cft_ground_truth* gt, const char* path) {
    if (!gt || !path) return invalid("cft_ground_truth_save: null argument");
    return guarded([&] { io::save_ground_truth_csv(gt->value, path); });
}

cft_status cft_ground_truth_load(const char* path, cft_ground_truth** out) {
    if (!path || !out) return invalid("cft_ground_truth_load: null argument");
    return guarded([&] { *out = new cft_ground_truth{io::load_ground_truth_csv(path)}; });
}

void cft_ground_truth_free(cft_ground_truth* gt) { delete gt; }

cft_status cft_family_hermite(int j_count, double sigma, double rate_hz, cft_family** out) {
    if (!out) return invalid("cft_family_hermite: null out pointer");
    return guarded([&] { *out = new cft_family{tapers::hermite_windows(j_count, sigma, rate_hz)}; });
}

cft_status cft_family_morse(double beta, double gamma, int j_count, cft_family** out) {
    if (!out) return invalid("cft_family_morse: null out pointer");
    return guarded([&] { *out = new cft_family{tapers::morse_wavelets(beta, gamma, j_count)}; });
}

cft_status cft_family_gram_error(const cft_family* fam, double* out_dev) {
    if (!fam || !out_dev) return invalid("cft_family_gram_error: null argument");
    return guarded([&] { *out_dev = fam->value.gram_error(); });
}

void cft_family_free(cft_family* fam) { delete fam; }

void cft_analysis_params_init(cft_analysis_params* p) {
    if (!p) return;
    p->method = "conceft";
    p->backend = "cwt";
    p->n_projections = 20;
    p->projection_seed = 1;
    p->freq_bins = 1024;
    p->freq_min_hz = 0.0;
    p->freq_max_hz = 20.0;
    p->threshold = "relative";
    p->threshold_value = 1e-6;
    p->voices_per_octave = 32.0;
    p->scale_freq_min_hz = 0.5;
    p->scale_freq_max_hz = 40.0;
    p->stft_fft_size = 2048;
    p->boundary_ref_freq_hz = 2.0;
    p->threads = 0;
}

cft_status cft_analyze(const cft_signal* y, const cft_family* fam, const cft_analysis_params* params,
                       cft_result** out) {
    if (!y || !fam || !params || !out) return invalid("cft_analyze: null argument");
    return guarded([&] {
        const std::string backend = params->backend ? params->backend : "cwt";
        cfg::RunConfig c;
        c.signal_kind = cfg::SignalKind::File;
        c.signal_path = "<memory>";
        c.rate_hz = y->value.rate_hz;
        c.duration_sec = static_cast<double>(y->value.size()) / y->value.rate_hz;
        c.backend = backend == "stft" ? cfg::Backend::Stft : cfg::Backend::Cwt;
        c.n_projections = params->n_projections;
        c.j_count = fam->value.count;
        c.squeeze.freq_bins = params->freq_bins;
        c.squeeze.freq_min_hz = params->freq_min_hz;
        c.squeeze.freq_max_hz = params->freq_max_hz;
        const std::string thr = params->threshold ? params->threshold : "relative";
        c.squeeze.threshold_kind = thr == "absolute" ? SqueezeConfig::ThresholdKind::Absolute
                                   : thr == "quantile" ? SqueezeConfig::ThresholdKind::Quantile
                                                       : SqueezeConfig::ThresholdKind::RelativeToMax;
        c.squeeze.threshold_value = params->threshold_value;
        c.squeeze.boundary_ref_freq_hz = params->boundary_ref_freq_hz;
        c.voices_per_octave = params->voices_per_octave;
        c.scale_freq_min_hz = params->scale_freq_min_hz;
        c.scale_freq_max_hz = params->scale_freq_max_hz;
        c.stft_fft_size = params->stft_fft_size;
        c.threads = params->threads;
        if (c.backend == cfg::Backend::Cwt) {
            c.beta = fam->value.beta;
            c.gamma = fam->value.gamma;
        } else {
            c.sigma = fam->value.sigma;
            if (std::abs(fam->value.rate_hz - y->value.rate_hz) > 1e-9 * y->value.rate_hz)
                throw InvalidArgumentError("cft_analyze: family rate does not match the signal rate");
        }

        const auto set = pipeline::build_transforms(y->value, fam->value, c);
        const auto method = pipeline::run_method(set, fam->value, c,
                                                 params->method && std::string(params->method) == "sst"
                                                     ? cfg::Method::Sst
                                                     : params->method && std::string(params->method) == "mtsst"
                                                           ? cfg::Method::Mtsst
                                                           : cfg::Method::Conceft,
                                                 params->projection_seed);
        auto* r = new cft_result;
        r->squeezed = method;
        r->tvps = squeeze::tvps_of(method);
        *out = r;
    });
}

cft_status cft_result_dims(const cft_result* r, size_t* out_freq_bins, size_t* out_times) {
    if (!r || !out_freq_bins || !out_times) return invalid("cft_result_dims: null argument");
    *out_freq_bins = static_cast<size_t>(r->tvps.values.rows());
    *out_times = static_cast<size_t>(r->tvps.values.cols());
    return CFT_OK;
}

cft_status cft_result_tvps(const cft_result* r, double* out, size_t capacity) {
    if (!r || !out) return invalid("cft_result_tvps: null argument");
    const auto need = static_cast<size_t>(r->tvps.values.size());
    if (capacity < need) return invalid("cft_result_tvps: buffer too small");
    std::memcpy(out, r->tvps.values.data(), sizeof(double) * need);
    return CFT_OK;
}

cft_status cft_result_save_squeezed(const cft_result* r, const char* path) {
    if (!r || !path) return invalid("cft_result_save_squeezed: null argument");
    return guarded([&] { io::save_squeezed(r->squeezed, path); });
}

cft_status cft_result_save_tvps(const cft_result* r, const char* path) {
    if (!r || !path) return invalid("cft_result_save_tvps: null argument");
    return guarded([&] { io::save_tvps(r->tvps, path); });
}

cft_status cft_result_ot_distance(const cft_result* r, const cft_ground_truth* gt, double alpha,
                                  double boundary_skip_sec, double* out_mean) {
    if (!r || !gt || !out_mean) return invalid("cft_result_ot_distance: null argument");
    return guarded([&] {
        TvPS ideal = signal::ideal_tvps(gt->value, r->tvps.freq_grid, r->tvps.time_grid);
        eval::OTConfig cfg;
        cfg.alpha = alpha;
        cfg.boundary_skip_sec = boundary_skip_sec < 0 ? 0.0 : boundary_skip_sec;
        *out_mean = eval::ot_distance(r->tvps, ideal, cfg).mean;
    });
}

cft_status cft_result_render_png(const cft_result* r, const char* path, double theta, double q) {
    if (!r || !path) return invalid("cft_result_render_png: null argument");
    return guarded([&] {
        eval::RenderSpec spec;
        spec.theta = theta;
        if (q > 0) {
            spec.q_mode = eval::RenderSpec::QMode::Fixed;
            spec.q_value = q;
        } else {
            spec.q_mode = eval::RenderSpec::QMode::QuantilePercent;
            spec.q_value = 99.8;
        }
        io::write_png_gray(eval::render(r->tvps, spec).image, path);
    });
}

void cft_result_free(cft_result* r) { delete r; }

cft_status cft_run(const char* command, const char* config_path, const char* out_dir,
                   const uint64_t* seed_override, int threads) {
    if (!command || !config_path) return invalid("cft_run: null command or config path");
    return guarded([&] {
        cfg::RunConfig c = cfg::load_config(config_path);
        if (seed_override) c.seed = *seed_override;
        if (threads > 0) c.threads = threads;
        pipeline::run_command(command, c, out_dir ? out_dir : "");
    });
}

}  // extern "C"
