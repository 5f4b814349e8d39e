/* C API for the conceft time-frequency analysis library.
 *
 * All functions return cft_status; every handle-producing call writes its
 * result through an out-parameter that is only valid on CFT_OK. Handles are
 * opaque and freed with the matching *_free function. cft_last_error()
 * returns a thread-local message for the most recent failing call.
 */
#ifndef CONCEFT_H
#define CONCEFT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CFT_API __declspec(dllexport)
#else
#define CFT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cft_status {
    CFT_OK = 0,
    CFT_ERROR_INVALID = 1,
    CFT_ERROR_CONFIG = 2,
    CFT_ERROR_NUMERIC = 3,
    CFT_ERROR_IO = 4
} cft_status;

CFT_API const char* cft_version(void);
CFT_API const char* cft_last_error(void);

typedef struct cft_signal cft_signal;
typedef struct cft_ground_truth cft_ground_truth;
typedef struct cft_family cft_family;
typedef struct cft_result cft_result;

/* ------ signals ------ */

CFT_API cft_status cft_signal_create(const double* samples, size_t n, double rate_hz, double t0,
                                     cft_signal** out);
CFT_API cft_status cft_signal_class_c(uint64_t seed, double rate_hz, double duration_sec, cft_signal** out_signal,
                                      cft_ground_truth** out_truth);
CFT_API cft_status cft_signal_deterministic(double rate_hz, double duration_sec, cft_signal** out_signal,
                                            cft_ground_truth** out_truth);
/* kind: "gaussian" | "arma11" | "poisson" | "student_t4". realized_sigma may
 * be NULL. */
CFT_API cft_status cft_signal_add_noise(const cft_signal* in, const char* kind, double snr_db, uint64_t seed,
                                        cft_signal** out, double* realized_sigma);
CFT_API size_t cft_signal_length(const cft_signal* s);
CFT_API double cft_signal_rate(const cft_signal* s);
CFT_API cft_status cft_signal_samples(const cft_signal* s, double* out, size_t capacity);
/* Format by extension: .csv text, anything else the CFT1 binary. */
CFT_API cft_status cft_signal_save(const cft_signal* s, const char* path);
CFT_API cft_status cft_signal_load(const char* path, cft_signal** out);
CFT_API void cft_signal_free(cft_signal* s);

CFT_API cft_status cft_ground_truth_save(const cft_ground_truth* gt, const char* path);
CFT_API cft_status cft_ground_truth_load(const char* path, cft_ground_truth** out);
CFT_API void cft_ground_truth_free(cft_ground_truth* gt);

/* ------ taper families ------ */

CFT_API cft_status cft_family_hermite(int j_count, double sigma, double rate_hz, cft_family** out);
CFT_API cft_status cft_family_morse(double beta, double gamma, int j_count, cft_family** out);
/* Max |Gram - I| over the family at the working discretization. */
CFT_API cft_status cft_family_gram_error(const cft_family* fam, double* out_dev);
CFT_API void cft_family_free(cft_family* fam);

/* ------ analysis ------ */

typedef struct cft_analysis_params {
    const char* method;  /* "sst" | "mtsst" | "conceft" */
    const char* backend; /* "cwt" | "stft" */
    int n_projections;
    uint64_t projection_seed;
    int freq_bins;
    double freq_min_hz;
    double freq_max_hz;
    const char* threshold; /* "absolute" | "relative" | "quantile" */
    double threshold_value;
    double voices_per_octave; /* cwt */
    double scale_freq_min_hz;
    double scale_freq_max_hz;
    int stft_fft_size; /* stft */
    double boundary_ref_freq_hz;
    int threads;
} cft_analysis_params;

/* Fills the calibrated defaults (conceft, cwt, N=20, 1024 bins on [0,20] Hz,
 * relative threshold 1e-6, 32 voices over [0.5,40] Hz). */
CFT_API void cft_analysis_params_init(cft_analysis_params* p);

CFT_API cft_status cft_analyze(const cft_signal* y, const cft_family* fam, const cft_analysis_params* params,
                               cft_result** out);

CFT_API cft_status cft_result_dims(const cft_result* r, size_t* out_freq_bins, size_t* out_times);
/* tvPS values, time-major (freq varies fastest), capacity in doubles. */
CFT_API cft_status cft_result_tvps(const cft_result* r, double* out, size_t capacity);
CFT_API cft_status cft_result_save_squeezed(const cft_result* r, const char* path);
CFT_API cft_status cft_result_save_tvps(const cft_result* r, const char* path);
/* Mean per-slice OT distance of the result's tvPS to the ideal tvPS of the
 * ground truth. boundary_skip_sec < 0 selects the default policy. */
CFT_API cft_status cft_result_ot_distance(const cft_result* r, const cft_ground_truth* gt, double alpha,
                                          double boundary_skip_sec, double* out_mean);
/* theta/q per the grayscale scheme; q <= 0 renders with the per-image 99.8%
 * quantile cut-off instead of a fixed q. */
CFT_API cft_status cft_result_render_png(const cft_result* r, const char* path, double theta, double q);
CFT_API void cft_result_free(cft_result* r);

/* ------ config-driven pipeline ------ */

/* command: "simulate" | "analyze" | "evaluate" | "sweep" | "render".
 * out_dir/seed_override/threads may be NULL/NULL/0 to use config values. */
CFT_API cft_status cft_run(const char* command, const char* config_path, const char* out_dir,
                           const uint64_t* seed_override, int threads);

#ifdef __cplusplus
}
#endif

#endif /* CONCEFT_H */
