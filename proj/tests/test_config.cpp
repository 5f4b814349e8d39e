#include <doctest.h>

#include "core/config.hpp"

using namespace conceft;
using namespace conceft::cfg;

TEST_CASE("defaults carry the calibrated parameters") {
    const RunConfig c = parse_config("", "<empty>");
    CHECK(c.backend == Backend::Cwt);
    CHECK(c.method == Method::Conceft);
    CHECK(c.beta == 30.0);
    CHECK(c.gamma == 9.0);
    CHECK(c.effective_j() == 2);
    CHECK(c.n_projections == 20);
    CHECK(c.squeeze.freq_bins == 1024);
    CHECK(c.squeeze.freq_max_hz == 20.0);

    RunConfig stft = c;
    stft.backend = Backend::Stft;
    CHECK(stft.effective_j() == 4);
    CHECK(stft.sigma == doctest::Approx(5.0 / 16.0));
}

TEST_CASE("parse and round-trip through dump_config") {
    const char* text = R"(
# experiment config
[run]
seed = 99
threads = 2

[signal]
kind = "deterministic"
rate_hz = 160
duration_sec = 60

[noise]
kind = "arma11"
snr_db = -3.5
seed = 7

[method]
name = "mtsst"
backend = "stft"

[family]
j = 3
sigma = 0.25

[squeeze]
freq_bins = 512
threshold = "quantile"
threshold_value = 0.9

[evaluate]
mode = "methods"
methods = ["conceft", "sst"]
snr_list = [0, -3]

[sweep]
mode = "projections"
n_list = [1, 5, 20]
repeats = 3

[output]
dir = "results"
)";
    const RunConfig c = parse_config(text, "<test>");
    CHECK(c.seed == 99);
    CHECK(c.noise_kind == NoiseKind::Arma11);
    CHECK(c.snr_db == -3.5);
    CHECK(c.noise_seed.has_value());
    CHECK(*c.noise_seed == 7);
    CHECK(c.method == Method::Mtsst);
    CHECK(c.backend == Backend::Stft);
    CHECK(c.effective_j() == 3);
    CHECK(c.squeeze.threshold_kind == SqueezeConfig::ThresholdKind::Quantile);
    CHECK(c.eval_methods == std::vector<std::string>{"conceft", "sst"});
    CHECK(c.eval_snr_list == std::vector<double>{0.0, -3.0});
    CHECK(c.sweep_n_list == std::vector<int>{1, 5, 20});
    CHECK(c.out_dir == "results");

    const RunConfig back = parse_config(dump_config(c), "<dump>");
    CHECK(back == c);
}

TEST_CASE("unknown keys are config errors") {
    CHECK_THROWS_AS(parse_config("[signal]\nkindd = \"class_c\"\n", "<t>"), ConfigError);
    CHECK_THROWS_AS(parse_config("[nonsense]\nx = 1\n", "<t>"), ConfigError);
}

TEST_CASE("malformed values are config errors with location context") {
    CHECK_THROWS_WITH_AS(parse_config("[run]\nseed = banana\n", "<t>"), doctest::Contains("<t>:2"), ConfigError);
    CHECK_THROWS_AS(parse_config("[run]\nseed\n", "<t>"), ConfigError);
    CHECK_THROWS_AS(parse_config("[evaluate]\nmethods = [1, \"a\"]\n", "<t>"), ConfigError);
}

TEST_CASE("validation rejects inconsistent settings") {
    CHECK_THROWS_AS(parse_config("[signal]\nkind = \"file\"\n", "<t>"), ConfigError);
    CHECK_THROWS_AS(parse_config("[scales]\nfreq_max_hz = 100\n", "<t>"), ConfigError);  // beyond Nyquist at 160 Hz
    CHECK_THROWS_AS(parse_config("[method]\nn_projections = 0\n", "<t>"), ConfigError);
    CHECK_THROWS_AS(parse_config("[squeeze]\nfreq_max_hz = 90\n", "<t>"), ConfigError);
}

TEST_CASE("derived sub-seeds are deterministic and distinct per repeat") {
    const RunConfig c = parse_config("[run]\nseed = 5\n", "<t>");
    CHECK(c.effective_noise_seed(0) == c.effective_noise_seed(0));
    CHECK(c.effective_noise_seed(0) != c.effective_noise_seed(1));
    CHECK(c.effective_noise_seed(0) != c.effective_projection_seed(0));

    const RunConfig pinned = parse_config("[run]\nseed = 5\n[noise]\nseed = 123\n", "<t>");
    CHECK(pinned.effective_noise_seed(0) == 123);
    CHECK(pinned.effective_noise_seed(1) != 123);
}

TEST_CASE("stft frequency cap defaults to the squeeze band plus margin") {
    RunConfig c = parse_config("", "<t>");
    CHECK(c.effective_stft_freq_max(80.0) == doctest::Approx(25.0));
    c.stft_freq_max_hz = 60.0;
    CHECK(c.effective_stft_freq_max(80.0) == doctest::Approx(60.0));
    CHECK(c.effective_stft_freq_max(40.0) == doctest::Approx(40.0));
}
