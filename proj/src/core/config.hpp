#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/evaluation.hpp"
#include "core/types.hpp"

namespace conceft::cfg {

enum class SignalKind { ClassC, Deterministic, File };
enum class Method { Sst, Mtsst, Conceft };
enum class Backend { Cwt, Stft };
enum class BoundaryPolicy { Auto, None, Seconds };
enum class EvalMode { Single, Methods, SnrSweep };
enum class SweepMode { MorseParams, Projections };

// One nested key-value config drives every subcommand; unset values fall
// back to the calibrated defaults (Morse beta=30 gamma=9 J=2 N=20 for the
// CWT backend, Hermite sigma=5/16 J=4 N=20 for STFT). Sub-seeds not set
// explicitly derive from the master seed.
struct RunConfig {
    // [run]
    std::uint64_t seed = 1;
    int threads = 0;

    // [signal]
    SignalKind signal_kind = SignalKind::ClassC;
    double rate_hz = 160.0;
    double duration_sec = 60.0;
    std::optional<std::uint64_t> signal_seed;
    std::string signal_path;

    // [noise]
    bool noise_enabled = true;
    NoiseKind noise_kind = NoiseKind::GaussianWhite;
    double snr_db = 0.0;
    std::optional<std::uint64_t> noise_seed;

    // [method]
    Method method = Method::Conceft;
    Backend backend = Backend::Cwt;
    int n_projections = 20;
    std::optional<std::uint64_t> projection_seed;

    // [family]
    double beta = 30.0;
    double gamma = 9.0;
    int j_count = 0;  // 0: backend default (2 for CWT, 4 for STFT)
    double sigma = 0.3125;

    // [scales]
    double voices_per_octave = 32.0;
    double scale_freq_min_hz = 0.5;
    double scale_freq_max_hz = 40.0;

    // [stft]
    int stft_fft_size = 2048;
    int stft_hop = 1;
    double stft_freq_max_hz = 0.0;  // 0: squeeze band + 5 Hz margin

    // [squeeze]
    SqueezeConfig squeeze;

    // [evaluate]
    EvalMode eval_mode = EvalMode::Single;
    double ot_alpha = 0.0;
    BoundaryPolicy eval_boundary = BoundaryPolicy::Auto;
    double eval_boundary_sec = 0.0;
    std::string eval_tvps_path;
    std::string eval_truth_path;
    std::vector<std::string> eval_methods{"conceft", "mtsst", "sst"};
    std::vector<double> eval_snr_list;
    int eval_noise_seeds = 20;

    // [render]
    eval::RenderSpec render;
    std::vector<std::string> render_inputs;

    // [sweep]
    SweepMode sweep_mode = SweepMode::MorseParams;
    std::vector<double> sweep_gammas{3, 4, 5, 6, 7, 8, 9, 10};
    std::vector<double> sweep_betas{20, 30, 40, 50, 60, 70};
    std::vector<int> sweep_js{1, 2, 3, 4};
    std::vector<int> sweep_n_list{1, 5, 10, 20, 50};
    int sweep_repeats = 10;
    int sweep_projections = 10;

    // [output]
    std::string out_dir = "out";

    bool operator==(const RunConfig&) const = default;

    int effective_j() const { return j_count > 0 ? j_count : (backend == Backend::Cwt ? 2 : 4); }
    std::uint64_t effective_signal_seed() const;
    std::uint64_t effective_noise_seed(std::uint64_t repeat) const;
    std::uint64_t effective_projection_seed(std::uint64_t repeat) const;
    double effective_stft_freq_max(double nyquist) const;

    void validate() const;
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, const std::string& origin = "<string>");
std::string dump_config(const RunConfig& c);
void save_config(const RunConfig& c, const std::string& path);

}  // namespace conceft::cfg
