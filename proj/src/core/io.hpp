#pragma once

#include <string>

#include "core/evaluation.hpp"
#include "core/tapers.hpp"
#include "core/types.hpp"

namespace conceft::io {

// All writers go through a temp file + rename so partial outputs never land
// under the final name.

// Signals: CSV (t,value) or the CFT1 binary ("CFT1", u32 length, f64 rate,
// f64 t0, f64 samples, little-endian). save_signal/load_signal pick the
// format from the extension (.csv vs anything else).
void save_signal_csv(const SampledSignal& s, const std::string& path);
SampledSignal load_signal_csv(const std::string& path);
void save_signal_cft1(const SampledSignal& s, const std::string& path);
SampledSignal load_signal_cft1(const std::string& path);
void save_signal(const SampledSignal& s, const std::string& path);
SampledSignal load_signal(const std::string& path);

// Ground truth: CSV (t, comp_id, amplitude, if_hz), one row per alive
// sample per component. Loading reconstructs supports from the row extent
// and recomputes the separation constant.
void save_ground_truth_csv(const GroundTruth& gt, const std::string& path);
GroundTruth load_ground_truth_csv(const std::string& path);

// CFT2 container shared by complex (SqueezedTF, TFMatrix) and real (TvPS)
// time-frequency payloads: "CFT2", u8 version, u8 payload(0 complex/1 real),
// u8 axis_kind(0 freq/1 scale), u8 flags(bit0 mask, bit1 amp_const),
// u32 n_time, u32 n_axis, f64 time_grid, f64 axis_grid, [f64 amp_const],
// [u8 mask], payload in time-major order (axis varies fastest).
void save_squeezed(const SqueezedTF& s, const std::string& path);
SqueezedTF load_squeezed(const std::string& path);
void save_tvps(const TvPS& p, const std::string& path);
TvPS load_tvps(const std::string& path);
void save_tfmatrix(const TFMatrix& m, const std::string& path);
TFMatrix load_tfmatrix(const std::string& path);

// Long-format CSV (t, axis, re, im) for small matrices.
void export_tf_csv(const TFMatrix& m, const std::string& path);

// Taper family reference sampling: CSV (grid, taper_0.., d_taper_0..).
void save_family_csv(const tapers::ReferenceFamily& fam, const std::string& path);

// 8-bit grayscale PNG, fixed encoder settings (byte-reproducible).
void write_png_gray(const eval::GrayImage& img, const std::string& path);

// OT report: CSV (t, distance) plus a JSON summary path if nonempty.
void save_ot_report(const eval::OTReport& rep, const VectorXd& time_grid, const std::string& csv_path,
                    const std::string& json_path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace conceft::io
