#pragma once

#include <string>

#include "core/config.hpp"
#include "core/squeeze.hpp"
#include "core/tapers.hpp"
#include "core/types.hpp"

namespace conceft::pipeline {

// The signal a run operates on, with its provenance.
struct PreparedSignal {
    SampledSignal clean;
    GroundTruth truth;
    bool has_truth = false;
    int rejected_seeds = 0;
};

PreparedSignal prepare_signal(const cfg::RunConfig& c);

tapers::ReferenceFamily build_family(const cfg::RunConfig& c);
ScaleGrid build_scale_grid(const cfg::RunConfig& c);
tf::TransformSet build_transforms(const SampledSignal& y, const tapers::ReferenceFamily& fam,
                                  const cfg::RunConfig& c);

// Run one method (sst / mtsst / conceft) on a precomputed transform set.
SqueezedTF run_method(const tf::TransformSet& set, const tapers::ReferenceFamily& fam, const cfg::RunConfig& c,
                      cfg::Method method, std::uint64_t projection_seed);

// Evaluation boundary skip in seconds under the configured policy.
double eval_boundary_skip(const cfg::RunConfig& c, const tapers::ReferenceFamily& fam, const GroundTruth& gt);

// Subcommands. Each writes its artifacts plus run_config.toml (reloadable
// echo) and manifest.json into out_dir.
void cmd_simulate(const cfg::RunConfig& c, const std::string& out_dir);
void cmd_analyze(const cfg::RunConfig& c, const std::string& out_dir);
void cmd_evaluate(const cfg::RunConfig& c, const std::string& out_dir);
void cmd_sweep(const cfg::RunConfig& c, const std::string& out_dir);
void cmd_render(const cfg::RunConfig& c, const std::string& out_dir);

// Dispatch by name ("simulate" | "analyze" | "evaluate" | "sweep" | "render").
void run_command(const std::string& command, const cfg::RunConfig& c, const std::string& out_dir);

}  // namespace conceft::pipeline
