#include "core/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <variant>

#include "core/io.hpp"
#include "core/rng.hpp"

namespace conceft::cfg {

namespace {

// Seed streams for config-derived substreams.
constexpr std::uint64_t kSignalStream = 100;
constexpr std::uint64_t kNoiseStream = 101;
constexpr std::uint64_t kProjectionStream = 102;

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

using Value = std::variant<double, bool, std::string, std::vector<double>, std::vector<std::string>>;

struct ParsedFile {
    std::map<std::string, Value> entries;  // "section.key"
    std::string origin;

    bool has(const std::string& key) const { return entries.count(key) > 0; }

    template <typename T>
    T get(const std::string& key, const T& fallback) const {
        auto it = entries.find(key);
        if (it == entries.end()) return fallback;
        if (const T* v = std::get_if<T>(&it->second)) return *v;
        throw ConfigError(origin + ": wrong type for key '" + key + "'");
    }

    double get_num(const std::string& key, double fallback) const { return get<double>(key, fallback); }

    std::string get_str(const std::string& key, const std::string& fallback) const {
        return get<std::string>(key, fallback);
    }
};

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

Value parse_scalar(const std::string& raw, const std::string& ctx) {
    if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') return raw.substr(1, raw.size() - 2);
    if (raw == "true") return true;
    if (raw == "false") return false;
    try {
        std::size_t used = 0;
        const double v = std::stod(raw, &used);
        if (used == raw.size()) return v;
    } catch (...) {
    }
    throw ConfigError(ctx + ": cannot parse value '" + raw + "'");
}

Value parse_value(const std::string& raw, const std::string& ctx) {
    if (!raw.empty() && raw.front() == '[') {
        if (raw.back() != ']') throw ConfigError(ctx + ": unterminated array");
        std::vector<double> nums;
        std::vector<std::string> strs;
        bool any_string = false;
        std::string inner = raw.substr(1, raw.size() - 2);
        std::istringstream ss(inner);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            Value v = parse_scalar(item, ctx);
            if (std::holds_alternative<std::string>(v)) {
                any_string = true;
                strs.push_back(std::get<std::string>(v));
            } else if (std::holds_alternative<double>(v)) {
                nums.push_back(std::get<double>(v));
            } else {
                throw ConfigError(ctx + ": booleans not allowed in arrays");
            }
        }
        if (any_string) {
            if (!nums.empty()) throw ConfigError(ctx + ": mixed array types");
            return strs;
        }
        return nums;
    }
    return parse_scalar(raw, ctx);
}

ParsedFile parse_file(const std::string& text, const std::string& origin) {
    ParsedFile out;
    out.origin = origin;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string ctx = origin + ":" + std::to_string(lineno);
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(ctx + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(ctx + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string raw = trim(line.substr(eq + 1));
        if (key.empty() || raw.empty()) throw ConfigError(ctx + ": empty key or value");
        const std::string full = section.empty() ? key : section + "." + key;
        out.entries[full] = parse_value(raw, ctx);
    }
    return out;
}

std::uint64_t to_seed(double v, const std::string& ctx) {
    if (v < 0 || std::floor(v) != v) throw ConfigError(ctx + ": seed must be a nonnegative integer");
    return static_cast<std::uint64_t>(v);
}

template <typename T, typename Map>
T parse_enum(const ParsedFile& f, const std::string& key, const Map& table, T fallback) {
    if (!f.has(key)) return fallback;
    const std::string raw = f.get_str(key, "");
    for (const auto& [name, value] : table)
        if (raw == name) return value;
    std::string allowed;
    for (const auto& [name, value] : table) allowed += std::string(allowed.empty() ? "" : "|") + name;
    throw ConfigError(f.origin + ": key '" + key + "' must be one of " + allowed);
}

const std::vector<std::pair<std::string, NoiseKind>> kNoiseNames = {
    {"gaussian", NoiseKind::GaussianWhite},
    {"arma11", NoiseKind::Arma11},
    {"poisson", NoiseKind::Poisson},
    {"student_t4", NoiseKind::StudentT4Iid},
};

std::string noise_name(NoiseKind k) {
    for (const auto& [n, v] : kNoiseNames)
        if (v == k) return n;
    return "gaussian";
}

const char* method_name(Method m) {
    switch (m) {
        case Method::Sst: return "sst";
        case Method::Mtsst: return "mtsst";
        case Method::Conceft: return "conceft";
    }
    return "conceft";
}

}  // namespace

std::uint64_t RunConfig::effective_signal_seed() const {
    return signal_seed ? *signal_seed : rng::derive_seed(seed, kSignalStream);
}

std::uint64_t RunConfig::effective_noise_seed(std::uint64_t repeat) const {
    if (noise_seed && repeat == 0) return *noise_seed;
    return rng::derive_seed(noise_seed ? *noise_seed : seed, kNoiseStream, repeat);
}

std::uint64_t RunConfig::effective_projection_seed(std::uint64_t repeat) const {
    if (projection_seed && repeat == 0) return *projection_seed;
    return rng::derive_seed(projection_seed ? *projection_seed : seed, kProjectionStream, repeat);
}

double RunConfig::effective_stft_freq_max(double nyquist) const {
    const double automatic = std::min(nyquist, squeeze.freq_max_hz + 5.0);
    if (stft_freq_max_hz <= 0.0) return automatic;
    return std::min(stft_freq_max_hz, nyquist);
}

void RunConfig::validate() const {
    if (rate_hz <= 0 || duration_sec <= 0) throw ConfigError("signal: rate and duration must be positive");
    if (signal_kind == SignalKind::File && signal_path.empty())
        throw ConfigError("signal: kind = \"file\" requires signal.path");
    if (n_projections < 1) throw ConfigError("method: n_projections must be >= 1");
    if (effective_j() < 1) throw ConfigError("family: j must be >= 1");
    if (backend == Backend::Cwt) {
        if (beta <= 0 || gamma <= 0) throw ConfigError("family: beta and gamma must be positive");
        if (scale_freq_min_hz <= 0 || scale_freq_max_hz <= scale_freq_min_hz)
            throw ConfigError("scales: need 0 < freq_min < freq_max");
        if (scale_freq_max_hz > rate_hz / 2.0) throw ConfigError("scales: freq_max beyond Nyquist");
    } else {
        if (sigma <= 0) throw ConfigError("family: sigma must be positive");
        if (stft_fft_size < 8) throw ConfigError("stft: fft_size too small");
        if (stft_hop < 1) throw ConfigError("stft: hop must be >= 1");
    }
    try {
        squeeze.validate();
    } catch (const Error& e) {
        throw ConfigError(std::string("squeeze: ") + e.what());
    }
    if (squeeze.freq_max_hz > rate_hz / 2.0) throw ConfigError("squeeze: freq_max beyond Nyquist");
    if (eval_noise_seeds < 1) throw ConfigError("evaluate: n_noise_seeds must be >= 1");
    if (sweep_repeats < 1 || sweep_projections < 1) throw ConfigError("sweep: repeats and projections must be >= 1");
    if (render.theta <= 0) throw ConfigError("render: theta must be positive");
    if (render.q_mode == eval::RenderSpec::QMode::Fixed ? render.q_value <= 0
                                                        : (render.q_value <= 0 || render.q_value >= 100))
        throw ConfigError("render: q out of range");
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
    const ParsedFile f = parse_file(text, origin);
    RunConfig c;

    static const std::vector<std::string> known = {
        "run.seed", "run.threads",
        "signal.kind", "signal.rate_hz", "signal.duration_sec", "signal.seed", "signal.path",
        "noise.enabled", "noise.kind", "noise.snr_db", "noise.seed",
        "method.name", "method.backend", "method.n_projections", "method.projection_seed",
        "family.beta", "family.gamma", "family.j", "family.sigma",
        "scales.voices_per_octave", "scales.freq_min_hz", "scales.freq_max_hz",
        "stft.fft_size", "stft.hop", "stft.freq_max_hz",
        "squeeze.freq_bins", "squeeze.freq_min_hz", "squeeze.freq_max_hz", "squeeze.threshold",
        "squeeze.threshold_value", "squeeze.kernel", "squeeze.kernel_alpha", "squeeze.sign_flip",
        "squeeze.boundary_ref_freq_hz",
        "evaluate.mode", "evaluate.alpha", "evaluate.boundary", "evaluate.boundary_sec",
        "evaluate.tvps_path", "evaluate.truth_path", "evaluate.methods", "evaluate.snr_list",
        "evaluate.n_noise_seeds",
        "render.mode", "render.theta", "render.q", "render.quantile_percent", "render.inputs",
        "sweep.mode", "sweep.gammas", "sweep.betas", "sweep.js", "sweep.n_list", "sweep.repeats",
        "sweep.projections_per_run",
        "output.dir",
    };
    for (const auto& [key, value] : f.entries) {
        (void)value;
        bool ok = false;
        for (const auto& k : known)
            if (k == key) {
                ok = true;
                break;
            }
        if (!ok) throw ConfigError(origin + ": unknown key '" + key + "'");
    }

    if (f.has("run.seed")) c.seed = to_seed(f.get_num("run.seed", 0), origin);
    c.threads = static_cast<int>(f.get_num("run.threads", 0));

    c.signal_kind = parse_enum(f, "signal.kind",
                               std::vector<std::pair<std::string, SignalKind>>{{"class_c", SignalKind::ClassC},
                                                                               {"deterministic", SignalKind::Deterministic},
                                                                               {"file", SignalKind::File}},
                               SignalKind::ClassC);
    c.rate_hz = f.get_num("signal.rate_hz", c.rate_hz);
    c.duration_sec = f.get_num("signal.duration_sec", c.duration_sec);
    if (f.has("signal.seed")) c.signal_seed = to_seed(f.get_num("signal.seed", 0), origin);
    c.signal_path = f.get_str("signal.path", "");

    c.noise_enabled = f.get<bool>("noise.enabled", c.noise_enabled);
    c.noise_kind = parse_enum(f, "noise.kind", kNoiseNames, c.noise_kind);
    c.snr_db = f.get_num("noise.snr_db", c.snr_db);
    if (f.has("noise.seed")) c.noise_seed = to_seed(f.get_num("noise.seed", 0), origin);

    c.method = parse_enum(f, "method.name",
                          std::vector<std::pair<std::string, Method>>{
                              {"sst", Method::Sst}, {"mtsst", Method::Mtsst}, {"conceft", Method::Conceft}},
                          c.method);
    c.backend = parse_enum(f, "method.backend",
                           std::vector<std::pair<std::string, Backend>>{{"cwt", Backend::Cwt}, {"stft", Backend::Stft}},
                           c.backend);
    c.n_projections = static_cast<int>(f.get_num("method.n_projections", c.n_projections));
    if (f.has("method.projection_seed")) c.projection_seed = to_seed(f.get_num("method.projection_seed", 0), origin);

    c.beta = f.get_num("family.beta", c.beta);
    c.gamma = f.get_num("family.gamma", c.gamma);
    c.j_count = static_cast<int>(f.get_num("family.j", 0));
    c.sigma = f.get_num("family.sigma", c.sigma);

    c.voices_per_octave = f.get_num("scales.voices_per_octave", c.voices_per_octave);
    c.scale_freq_min_hz = f.get_num("scales.freq_min_hz", c.scale_freq_min_hz);
    c.scale_freq_max_hz = f.get_num("scales.freq_max_hz", c.scale_freq_max_hz);

    c.stft_fft_size = static_cast<int>(f.get_num("stft.fft_size", c.stft_fft_size));
    c.stft_hop = static_cast<int>(f.get_num("stft.hop", c.stft_hop));
    c.stft_freq_max_hz = f.get_num("stft.freq_max_hz", c.stft_freq_max_hz);

    c.squeeze.freq_bins = static_cast<int>(f.get_num("squeeze.freq_bins", c.squeeze.freq_bins));
    c.squeeze.freq_min_hz = f.get_num("squeeze.freq_min_hz", c.squeeze.freq_min_hz);
    c.squeeze.freq_max_hz = f.get_num("squeeze.freq_max_hz", c.squeeze.freq_max_hz);
    c.squeeze.threshold_kind = parse_enum(
        f, "squeeze.threshold",
        std::vector<std::pair<std::string, SqueezeConfig::ThresholdKind>>{
            {"absolute", SqueezeConfig::ThresholdKind::Absolute},
            {"relative", SqueezeConfig::ThresholdKind::RelativeToMax},
            {"quantile", SqueezeConfig::ThresholdKind::Quantile}},
        c.squeeze.threshold_kind);
    c.squeeze.threshold_value = f.get_num("squeeze.threshold_value", c.squeeze.threshold_value);
    c.squeeze.kernel = parse_enum(f, "squeeze.kernel",
                                  std::vector<std::pair<std::string, SqueezeConfig::KernelKind>>{
                                      {"nearest", SqueezeConfig::KernelKind::NearestBin},
                                      {"gaussian", SqueezeConfig::KernelKind::GaussianKernel}},
                                  c.squeeze.kernel);
    c.squeeze.kernel_alpha = f.get_num("squeeze.kernel_alpha", c.squeeze.kernel_alpha);
    c.squeeze.sign_flip = parse_enum(f, "squeeze.sign_flip",
                                     std::vector<std::pair<std::string, SqueezeConfig::SignFlip>>{
                                         {"per_point", SqueezeConfig::SignFlip::PerPoint},
                                         {"per_vector", SqueezeConfig::SignFlip::PerVector}},
                                     c.squeeze.sign_flip);
    c.squeeze.boundary_ref_freq_hz = f.get_num("squeeze.boundary_ref_freq_hz", c.squeeze.boundary_ref_freq_hz);

    c.eval_mode = parse_enum(f, "evaluate.mode",
                             std::vector<std::pair<std::string, EvalMode>>{{"single", EvalMode::Single},
                                                                           {"methods", EvalMode::Methods},
                                                                           {"snr_sweep", EvalMode::SnrSweep}},
                             c.eval_mode);
    c.ot_alpha = f.get_num("evaluate.alpha", c.ot_alpha);
    c.eval_boundary = parse_enum(f, "evaluate.boundary",
                                 std::vector<std::pair<std::string, BoundaryPolicy>>{{"auto", BoundaryPolicy::Auto},
                                                                                     {"none", BoundaryPolicy::None},
                                                                                     {"seconds", BoundaryPolicy::Seconds}},
                                 c.eval_boundary);
    c.eval_boundary_sec = f.get_num("evaluate.boundary_sec", c.eval_boundary_sec);
    c.eval_tvps_path = f.get_str("evaluate.tvps_path", "");
    c.eval_truth_path = f.get_str("evaluate.truth_path", "");
    c.eval_methods = f.get<std::vector<std::string>>("evaluate.methods", c.eval_methods);
    c.eval_snr_list = f.get<std::vector<double>>("evaluate.snr_list", c.eval_snr_list);
    c.eval_noise_seeds = static_cast<int>(f.get_num("evaluate.n_noise_seeds", c.eval_noise_seeds));

    c.render.q_mode = parse_enum(f, "render.mode",
                                 std::vector<std::pair<std::string, eval::RenderSpec::QMode>>{
                                     {"fixed", eval::RenderSpec::QMode::Fixed},
                                     {"quantile", eval::RenderSpec::QMode::QuantilePercent}},
                                 c.render.q_mode);
    c.render.theta = f.get_num("render.theta", c.render.theta);
    if (c.render.q_mode == eval::RenderSpec::QMode::Fixed)
        c.render.q_value = f.get_num("render.q", c.render.q_value);
    else
        c.render.q_value = f.get_num("render.quantile_percent", 99.8);
    c.render_inputs = f.get<std::vector<std::string>>("render.inputs", c.render_inputs);

    c.sweep_mode = parse_enum(f, "sweep.mode",
                              std::vector<std::pair<std::string, SweepMode>>{{"morse_params", SweepMode::MorseParams},
                                                                             {"projections", SweepMode::Projections}},
                              c.sweep_mode);
    if (f.has("sweep.gammas")) c.sweep_gammas = f.get<std::vector<double>>("sweep.gammas", {});
    if (f.has("sweep.betas")) c.sweep_betas = f.get<std::vector<double>>("sweep.betas", {});
    if (f.has("sweep.js")) {
        c.sweep_js.clear();
        for (double v : f.get<std::vector<double>>("sweep.js", {})) c.sweep_js.push_back(static_cast<int>(v));
    }
    if (f.has("sweep.n_list")) {
        c.sweep_n_list.clear();
        for (double v : f.get<std::vector<double>>("sweep.n_list", {})) c.sweep_n_list.push_back(static_cast<int>(v));
    }
    c.sweep_repeats = static_cast<int>(f.get_num("sweep.repeats", c.sweep_repeats));
    c.sweep_projections = static_cast<int>(f.get_num("sweep.projections_per_run", c.sweep_projections));

    c.out_dir = f.get_str("output.dir", c.out_dir);

    c.validate();
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

std::string dump_config(const RunConfig& c) {
    std::ostringstream o;
    o << "[run]\n";
    o << "seed = " << c.seed << "\n";
    o << "threads = " << c.threads << "\n\n";

    o << "[signal]\n";
    o << "kind = \""
      << (c.signal_kind == SignalKind::ClassC ? "class_c"
                                              : c.signal_kind == SignalKind::Deterministic ? "deterministic" : "file")
      << "\"\n";
    o << "rate_hz = " << fmt_double(c.rate_hz) << "\n";
    o << "duration_sec = " << fmt_double(c.duration_sec) << "\n";
    if (c.signal_seed) o << "seed = " << *c.signal_seed << "\n";
    if (!c.signal_path.empty()) o << "path = \"" << c.signal_path << "\"\n";
    o << "\n[noise]\n";
    o << "enabled = " << (c.noise_enabled ? "true" : "false") << "\n";
    o << "kind = \"" << noise_name(c.noise_kind) << "\"\n";
    o << "snr_db = " << fmt_double(c.snr_db) << "\n";
    if (c.noise_seed) o << "seed = " << *c.noise_seed << "\n";

    o << "\n[method]\n";
    o << "name = \"" << method_name(c.method) << "\"\n";
    o << "backend = \"" << (c.backend == Backend::Cwt ? "cwt" : "stft") << "\"\n";
    o << "n_projections = " << c.n_projections << "\n";
    if (c.projection_seed) o << "projection_seed = " << *c.projection_seed << "\n";

    o << "\n[family]\n";
    o << "beta = " << fmt_double(c.beta) << "\n";
    o << "gamma = " << fmt_double(c.gamma) << "\n";
    o << "j = " << c.j_count << "\n";
    o << "sigma = " << fmt_double(c.sigma) << "\n";

    o << "\n[scales]\n";
    o << "voices_per_octave = " << fmt_double(c.voices_per_octave) << "\n";
    o << "freq_min_hz = " << fmt_double(c.scale_freq_min_hz) << "\n";
    o << "freq_max_hz = " << fmt_double(c.scale_freq_max_hz) << "\n";

    o << "\n[stft]\n";
    o << "fft_size = " << c.stft_fft_size << "\n";
    o << "hop = " << c.stft_hop << "\n";
    o << "freq_max_hz = " << fmt_double(c.stft_freq_max_hz) << "\n";

    o << "\n[squeeze]\n";
    o << "freq_bins = " << c.squeeze.freq_bins << "\n";
    o << "freq_min_hz = " << fmt_double(c.squeeze.freq_min_hz) << "\n";
    o << "freq_max_hz = " << fmt_double(c.squeeze.freq_max_hz) << "\n";
    o << "threshold = \""
      << (c.squeeze.threshold_kind == SqueezeConfig::ThresholdKind::Absolute
              ? "absolute"
              : c.squeeze.threshold_kind == SqueezeConfig::ThresholdKind::RelativeToMax ? "relative" : "quantile")
      << "\"\n";
    o << "threshold_value = " << fmt_double(c.squeeze.threshold_value) << "\n";
    o << "kernel = \"" << (c.squeeze.kernel == SqueezeConfig::KernelKind::NearestBin ? "nearest" : "gaussian")
      << "\"\n";
    o << "kernel_alpha = " << fmt_double(c.squeeze.kernel_alpha) << "\n";
    o << "sign_flip = \"" << (c.squeeze.sign_flip == SqueezeConfig::SignFlip::PerPoint ? "per_point" : "per_vector")
      << "\"\n";
    o << "boundary_ref_freq_hz = " << fmt_double(c.squeeze.boundary_ref_freq_hz) << "\n";

    o << "\n[evaluate]\n";
    o << "mode = \""
      << (c.eval_mode == EvalMode::Single ? "single" : c.eval_mode == EvalMode::Methods ? "methods" : "snr_sweep")
      << "\"\n";
    o << "alpha = " << fmt_double(c.ot_alpha) << "\n";
    o << "boundary = \""
      << (c.eval_boundary == BoundaryPolicy::Auto ? "auto" : c.eval_boundary == BoundaryPolicy::None ? "none" : "seconds")
      << "\"\n";
    o << "boundary_sec = " << fmt_double(c.eval_boundary_sec) << "\n";
    if (!c.eval_tvps_path.empty()) o << "tvps_path = \"" << c.eval_tvps_path << "\"\n";
    if (!c.eval_truth_path.empty()) o << "truth_path = \"" << c.eval_truth_path << "\"\n";
    o << "methods = [";
    for (std::size_t i = 0; i < c.eval_methods.size(); ++i)
        o << (i ? ", " : "") << '"' << c.eval_methods[i] << '"';
    o << "]\n";
    o << "snr_list = [";
    for (std::size_t i = 0; i < c.eval_snr_list.size(); ++i) o << (i ? ", " : "") << fmt_double(c.eval_snr_list[i]);
    o << "]\n";
    o << "n_noise_seeds = " << c.eval_noise_seeds << "\n";

    o << "\n[render]\n";
    o << "mode = \"" << (c.render.q_mode == eval::RenderSpec::QMode::Fixed ? "fixed" : "quantile") << "\"\n";
    o << "theta = " << fmt_double(c.render.theta) << "\n";
    if (c.render.q_mode == eval::RenderSpec::QMode::Fixed)
        o << "q = " << fmt_double(c.render.q_value) << "\n";
    else
        o << "quantile_percent = " << fmt_double(c.render.q_value) << "\n";
    if (!c.render_inputs.empty()) {
        o << "inputs = [";
        for (std::size_t i = 0; i < c.render_inputs.size(); ++i)
            o << (i ? ", " : "") << '"' << c.render_inputs[i] << '"';
        o << "]\n";
    }

    o << "\n[sweep]\n";
    o << "mode = \"" << (c.sweep_mode == SweepMode::MorseParams ? "morse_params" : "projections") << "\"\n";
    o << "gammas = [";
    for (std::size_t i = 0; i < c.sweep_gammas.size(); ++i) o << (i ? ", " : "") << fmt_double(c.sweep_gammas[i]);
    o << "]\n";
    o << "betas = [";
    for (std::size_t i = 0; i < c.sweep_betas.size(); ++i) o << (i ? ", " : "") << fmt_double(c.sweep_betas[i]);
    o << "]\n";
    o << "js = [";
    for (std::size_t i = 0; i < c.sweep_js.size(); ++i) o << (i ? ", " : "") << c.sweep_js[i];
    o << "]\n";
    o << "n_list = [";
    for (std::size_t i = 0; i < c.sweep_n_list.size(); ++i) o << (i ? ", " : "") << c.sweep_n_list[i];
    o << "]\n";
    o << "repeats = " << c.sweep_repeats << "\n";
    o << "projections_per_run = " << c.sweep_projections << "\n";

    o << "\n[output]\n";
    o << "dir = \"" << c.out_dir << "\"\n";
    return o.str();
}

void save_config(const RunConfig& c, const std::string& path) { io::write_text_file(path, dump_config(c)); }

}  // namespace cfg
