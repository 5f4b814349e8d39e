#include "core/io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "core/signal_model.hpp"

namespace conceft::io {

namespace {

namespace fs = std::filesystem;

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Temp-file + rename writer.
template <typename Fn>
void atomic_write(const std::string& path, Fn&& fn) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + tmp);
        fn(out);
        out.flush();
        if (!out) throw IoError("write failed: " + tmp);
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("rename failed for " + path + ": " + ec.message());
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    return in;
}

void put_u32(std::ostream& out, std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); }
void put_f64(std::ostream& out, double v) { out.write(reinterpret_cast<const char*>(&v), 8); }
std::uint32_t get_u32(std::istream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), 4);
    return v;
}
double get_f64(std::istream& in) {
    double v = 0;
    in.read(reinterpret_cast<char*>(&v), 8);
    return v;
}

bool has_extension(const std::string& path, const char* ext) {
    return fs::path(path).extension() == ext;
}

struct Cft2Payload {
    MatrixXcd complex_values;
    MatrixXd real_values;
    bool is_real = false;
    std::uint8_t axis_kind = 0;
    VectorXd time_grid;
    VectorXd axis_grid;
    std::vector<std::uint8_t> mask;
    bool has_amp = false;
    double amp_constant = 0.0;
};

void save_cft2(const Cft2Payload& p, const std::string& path) {
    atomic_write(path, [&](std::ostream& out) {
        out.write("CFT2", 4);
        const std::uint8_t version = 1;
        const std::uint8_t payload = p.is_real ? 1 : 0;
        std::uint8_t flags = 0;
        if (!p.mask.empty()) flags |= 1;
        if (p.has_amp) flags |= 2;
        out.write(reinterpret_cast<const char*>(&version), 1);
        out.write(reinterpret_cast<const char*>(&payload), 1);
        out.write(reinterpret_cast<const char*>(&p.axis_kind), 1);
        out.write(reinterpret_cast<const char*>(&flags), 1);
        const auto n_time = static_cast<std::uint32_t>(p.time_grid.size());
        const auto n_axis = static_cast<std::uint32_t>(p.axis_grid.size());
        put_u32(out, n_time);
        put_u32(out, n_axis);
        out.write(reinterpret_cast<const char*>(p.time_grid.data()), 8 * n_time);
        out.write(reinterpret_cast<const char*>(p.axis_grid.data()), 8 * n_axis);
        if (p.has_amp) put_f64(out, p.amp_constant);
        if (!p.mask.empty()) out.write(reinterpret_cast<const char*>(p.mask.data()), n_time);
        // Column-major (axis, time) matrices dump as time-major on disk.
        if (p.is_real) {
            out.write(reinterpret_cast<const char*>(p.real_values.data()),
                      static_cast<std::streamsize>(8) * p.real_values.size());
        } else {
            out.write(reinterpret_cast<const char*>(p.complex_values.data()),
                      static_cast<std::streamsize>(16) * p.complex_values.size());
        }
    });
}

Cft2Payload load_cft2(const std::string& path) {
    auto in = open_input(path);
    char magic[4];
    in.read(magic, 4);
    if (std::memcmp(magic, "CFT2", 4) != 0) throw IoError("not a CFT2 file: " + path);
    std::uint8_t version = 0, payload = 0, axis_kind = 0, flags = 0;
    in.read(reinterpret_cast<char*>(&version), 1);
    in.read(reinterpret_cast<char*>(&payload), 1);
    in.read(reinterpret_cast<char*>(&axis_kind), 1);
    in.read(reinterpret_cast<char*>(&flags), 1);
    if (version != 1) throw IoError("unsupported CFT2 version in " + path);

    Cft2Payload p;
    p.is_real = payload == 1;
    p.axis_kind = axis_kind;
    const std::uint32_t n_time = get_u32(in);
    const std::uint32_t n_axis = get_u32(in);
    p.time_grid.resize(n_time);
    p.axis_grid.resize(n_axis);
    in.read(reinterpret_cast<char*>(p.time_grid.data()), 8 * n_time);
    in.read(reinterpret_cast<char*>(p.axis_grid.data()), 8 * n_axis);
    if (flags & 2) {
        p.has_amp = true;
        p.amp_constant = get_f64(in);
    }
    if (flags & 1) {
        p.mask.resize(n_time);
        in.read(reinterpret_cast<char*>(p.mask.data()), n_time);
    }
    if (p.is_real) {
        p.real_values.resize(n_axis, n_time);
        in.read(reinterpret_cast<char*>(p.real_values.data()), static_cast<std::streamsize>(8) * p.real_values.size());
    } else {
        p.complex_values.resize(n_axis, n_time);
        in.read(reinterpret_cast<char*>(p.complex_values.data()),
                static_cast<std::streamsize>(16) * p.complex_values.size());
    }
    if (!in) throw IoError("truncated CFT2 file: " + path);
    return p;
}

}  // namespace

void save_signal_csv(const SampledSignal& s, const std::string& path) {
    atomic_write(path, [&](std::ostream& out) {
        out << "t,value\n";
        for (Eigen::Index i = 0; i < s.size(); ++i)
            out << fmt_double(s.time(i)) << ',' << fmt_double(s.samples[i]) << '\n';
    });
}

SampledSignal load_signal_csv(const std::string& path) {
    auto in = open_input(path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<double> t, v;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw IoError("malformed signal CSV row in " + path);
        t.push_back(std::stod(line.substr(0, comma)));
        v.push_back(std::stod(line.substr(comma + 1)));
    }
    if (t.size() < 2) throw IoError("signal CSV too short: " + path);
    SampledSignal s;
    s.t0 = t.front();
    s.rate_hz = 1.0 / (t[1] - t[0]);
    s.samples = Eigen::Map<VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
    s.validate();
    return s;
}

void save_signal_cft1(const SampledSignal& s, const std::string& path) {
    atomic_write(path, [&](std::ostream& out) {
        out.write("CFT1", 4);
        put_u32(out, static_cast<std::uint32_t>(s.size()));
        put_f64(out, s.rate_hz);
        put_f64(out, s.t0);
        out.write(reinterpret_cast<const char*>(s.samples.data()), static_cast<std::streamsize>(8) * s.size());
    });
}

SampledSignal load_signal_cft1(const std::string& path) {
    auto in = open_input(path);
    char magic[4];
    in.read(magic, 4);
    if (std::memcmp(magic, "CFT1", 4) != 0) throw IoError("not a CFT1 file: " + path);
    const std::uint32_t n = get_u32(in);
    SampledSignal s;
    s.rate_hz = get_f64(in);
    s.t0 = get_f64(in);
    s.samples.resize(n);
    in.read(reinterpret_cast<char*>(s.samples.data()), static_cast<std::streamsize>(8) * n);
    if (!in) throw IoError("truncated CFT1 file: " + path);
    s.validate();
    return s;
}

void save_signal(const SampledSignal& s, const std::string& path) {
    if (has_extension(path, ".csv"))
        save_signal_csv(s, path);
    else
        save_signal_cft1(s, path);
}

SampledSignal load_signal(const std::string& path) {
    if (!fs::exists(path)) throw IoError("signal file does not exist: " + path);
    return has_extension(path, ".csv") ? load_signal_csv(path) : load_signal_cft1(path);
}

void save_ground_truth_csv(const GroundTruth& gt, const std::string& path) {
    atomic_write(path, [&](std::ostream& out) {
        out << "t,comp_id,amplitude,if_hz\n";
        for (std::size_t c = 0; c < gt.components.size(); ++c) {
            const auto& comp = gt.components[c];
            for (Eigen::Index i = 0; i < comp.amplitude.size(); ++i) {
                const double t = gt.t0 + static_cast<double>(i) / gt.rate_hz;
                if (!comp.alive(t)) continue;
                out << fmt_double(t) << ',' << (c + 1) << ',' << fmt_double(comp.amplitude[i]) << ','
                    << fmt_double(comp.if_hz[i]) << '\n';
            }
        }
    });
}

GroundTruth load_ground_truth_csv(const std::string& path) {
    auto in = open_input(path);
    std::string line;
    std::getline(in, line);
    struct Row {
        double t, amp, f;
    };
    std::map<int, std::vector<Row>> rows;
    double t_min = std::numeric_limits<double>::infinity();
    double dt_guess = 0.0;
    double prev_t = std::numeric_limits<double>::quiet_NaN();
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Row r{};
        int id = 0;
        std::istringstream ss(line);
        std::string field;
        std::getline(ss, field, ',');
        r.t = std::stod(field);
        std::getline(ss, field, ',');
        id = std::stoi(field);
        std::getline(ss, field, ',');
        r.amp = std::stod(field);
        std::getline(ss, field, ',');
        r.f = std::stod(field);
        if (!std::isnan(prev_t) && r.t > prev_t && dt_guess == 0.0) dt_guess = r.t - prev_t;
        prev_t = r.t;
        t_min = std::min(t_min, r.t);
        rows[id].push_back(r);
    }
    if (rows.empty() || dt_guess <= 0.0) throw IoError("empty or malformed ground truth CSV: " + path);

    GroundTruth gt;
    gt.rate_hz = 1.0 / dt_guess;
    double t_max = 0.0;
    for (const auto& [id, rs] : rows)
        for (const auto& r : rs) t_max = std::max(t_max, r.t);
    gt.t0 = 0.0;  // tracks are stored on the [0, t_max] grid
    const auto n = static_cast<Eigen::Index>(std::llround(t_max * gt.rate_hz)) + 1;
    for (const auto& [id, rs] : rows) {
        ImtComponent comp;
        comp.amplitude = VectorXd::Zero(n);
        comp.if_hz = VectorXd::Zero(n);
        comp.phase_cycles = VectorXd::Zero(n);
        comp.support_begin = rs.front().t;
        comp.support_end = rs.back().t;
        for (const auto& r : rs) {
            const auto i = static_cast<Eigen::Index>(std::llround((r.t - gt.t0) * gt.rate_hz));
            if (i < 0 || i >= n) throw IoError("ground truth row off-grid in " + path);
            comp.amplitude[i] = r.amp;
            comp.if_hz[i] = r.f;
        }
        gt.components.push_back(std::move(comp));
    }
    gt.separation_d = signal::compute_separation(gt);
    return gt;
}

namespace {

Cft2Payload to_payload(const SqueezedTF& s) {
    Cft2Payload p;
    p.complex_values = s.values;
    p.axis_kind = 0;
    p.time_grid = s.time_grid;
    p.axis_grid = s.freq_grid;
    p.mask = s.boundary_mask;
    p.has_amp = true;
    p.amp_constant = s.amp_constant;
    return p;
}

}  // namespace

void save_squeezed(const SqueezedTF& s, const std::string& path) { save_cft2(to_payload(s), path); }

SqueezedTF load_squeezed(const std::string& path) {
    Cft2Payload p = load_cft2(path);
    if (p.is_real) throw IoError("expected a complex CFT2 payload in " + path);
    SqueezedTF s;
    s.values = std::move(p.complex_values);
    s.freq_grid = std::move(p.axis_grid);
    s.time_grid = std::move(p.time_grid);
    s.boundary_mask = std::move(p.mask);
    if (s.boundary_mask.empty()) s.boundary_mask.assign(static_cast<std::size_t>(s.time_grid.size()), 0);
    s.amp_constant = p.amp_constant;
    return s;
}

void save_tvps(const TvPS& t, const std::string& path) {
    Cft2Payload p;
    p.real_values = t.values;
    p.is_real = true;
    p.axis_kind = 0;
    p.time_grid = t.time_grid;
    p.axis_grid = t.freq_grid;
    p.mask = t.boundary_mask;
    save_cft2(p, path);
}

TvPS load_tvps(const std::string& path) {
    Cft2Payload p = load_cft2(path);
    if (!p.is_real) throw IoError("expected a real CFT2 payload in " + path);
    TvPS t;
    t.values = std::move(p.real_values);
    t.freq_grid = std::move(p.axis_grid);
    t.time_grid = std::move(p.time_grid);
    t.boundary_mask = std::move(p.mask);
    if (t.boundary_mask.empty()) t.boundary_mask.assign(static_cast<std::size_t>(t.time_grid.size()), 0);
    return t;
}

void save_tfmatrix(const TFMatrix& m, const std::string& path) {
    Cft2Payload p;
    p.complex_values = m.values;
    p.axis_kind = m.axis_kind == AxisKind::Scale ? 1 : 0;
    p.time_grid = m.time_grid;
    p.axis_grid = m.axis_grid;
    save_cft2(p, path);
}

TFMatrix load_tfmatrix(const std::string& path) {
    Cft2Payload p = load_cft2(path);
    if (p.is_real) throw IoError("expected a complex CFT2 payload in " + path);
    TFMatrix m;
    m.values = std::move(p.complex_values);
    m.axis_kind = p.axis_kind == 1 ? AxisKind::Scale : AxisKind::Frequency;
    m.time_grid = std::move(p.time_grid);
    m.axis_grid = std::move(p.axis_grid);
    if (m.time_grid.size() >= 2) m.rate_hz = 1.0 / (m.time_grid[1] - m.time_grid[0]);
    m.row_halfwidth_sec = VectorXd::Zero(m.axis_grid.size());
    return m;
}

void export_tf_csv(const TFMatrix& m, const std::string& path) {
    atomic_write(path, [&](std::ostream& out) {
        out << "t,axis,re,im\n";
        for (Eigen::Index t = 0; t < m.time_grid.size(); ++t)
            for (Eigen::Index r = 0; r < m.axis_grid.size(); ++r)
                out << fmt_double(m.time_grid[t]) << ',' << fmt_double(m.axis_grid[r]) << ','
                    << fmt_double(m.values(r, t).real()) << ',' << fmt_double(m.values(r, t).imag()) << '\n';
    });
}

void save_family_csv(const tapers::ReferenceFamily& fam, const std::string& path) {
    atomic_write(path, [&](std::ostream& out) {
        out << "grid";
        for (int j = 0; j < fam.count; ++j) out << ",taper_" << j;
        for (int j = 0; j < fam.count; ++j) out << ",d_taper_" << j;
        out << '\n';
        for (Eigen::Index i = 0; i < fam.grid.size(); ++i) {
            out << fmt_double(fam.grid[i]);
            for (int j = 0; j < fam.count; ++j) out << ',' << fmt_double(fam.tapers(i, j));
            for (int j = 0; j < fam.count; ++j) out << ',' << fmt_double(fam.d_tapers(i, j));
            out << '\n';
        }
    });
}

void write_png_gray(const eval::GrayImage& img, const std::string& path) {
    require(img.width > 0 && img.height > 0, "write_png_gray: empty image");
    const std::string tmp = path + ".tmp";
    FILE* fp = std::fopen(tmp.c_str(), "wb");
    if (!fp) throw IoError("cannot open for writing: " + tmp);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        if (png) png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw IoError("libpng initialization failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw IoError("libpng write failed for " + path);
    }
    png_init_io(png, fp);
    png_set_compression_level(png, 6);
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width), static_cast<png_uint_32>(img.height), 8,
                 PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int row = 0; row < img.height; ++row)
        png_write_row(png, const_cast<png_bytep>(img.pixels.data() + static_cast<std::size_t>(row) * img.width));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);

    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("rename failed for " + path + ": " + ec.message());
}

void save_ot_report(const eval::OTReport& rep, const VectorXd& time_grid, const std::string& csv_path,
                    const std::string& json_path) {
    atomic_write(csv_path, [&](std::ostream& out) {
        out << "t,distance\n";
        for (Eigen::Index t = 0; t < time_grid.size(); ++t) {
            if (std::isnan(rep.per_time[t])) continue;
            out << fmt_double(time_grid[t]) << ',' << fmt_double(rep.per_time[t]) << '\n';
        }
    });
    if (!json_path.empty()) {
        std::ostringstream js;
        js << "{\n"
           << "  \"mean\": " << fmt_double(rep.mean) << ",\n"
           << "  \"alpha\": " << fmt_double(rep.alpha) << ",\n"
           << "  \"evaluated_slices\": " << rep.evaluated << ",\n"
           << "  \"skipped_zero_mass\": " << rep.skipped_zero_mass << ",\n"
           << "  \"skipped_boundary\": " << rep.skipped_boundary << "\n"
           << "}\n";
        write_text_file(json_path, js.str());
    }
}

void write_text_file(const std::string& path, const std::string& content) {
    atomic_write(path, [&](std::ostream& out) { out << content; });
}

std::string read_text_file(const std::string& path) {
    auto in = open_input(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace conceft::io
