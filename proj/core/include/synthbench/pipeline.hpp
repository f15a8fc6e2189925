#pragma once

#include <string>

#include "synthbench/phenotype_matrix.hpp"
#include "synthbench/report.hpp"
#include "synthbench/run_config.hpp"

namespace synthbench {

inline constexpr const char* kToolName = "synth-bench";
inline constexpr const char* kToolVersion = "0.1.0";

// Ingest the configured real dataset: events -> map -> (truncate) ->
// aggregate -> (cohort filter), or a pre-aggregated matrix file.
PhenotypeMatrix load_real_matrix(const RunConfig& cfg, json* ingest_info = nullptr);

// Resolve the synthetic side: external matrix file or a built-in baseline
// generated from the real matrix.
PhenotypeMatrix load_or_generate_syn(const RunConfig& cfg, const PhenotypeMatrix& real,
                                     std::uint64_t seed, double* generation_seconds = nullptr);

// Full battery: ingest -> align -> fidelity/utility/privacy -> report.
// Writes <out_dir>/report.json (and .csv per report_format) atomically and
// returns the report document. Every random stage consumes a sub-seed derived
// from cfg.seed. On stage failure, writes <out_dir>/diagnostics.json and
// rethrows with the stage name.
json run_pipeline(const RunConfig& cfg);

// The metric block used by report consumers (everything except timing).
json metric_block(const json& report);

enum class ScalingAxis { SynthSize, TrainSize };

// MMD, TSTR AUC, and AIR F1 across a grid of synthetic sizes (M) or real
// training sizes (N), mean +/- sd over replicates. Requires a built-in
// baseline generator; external methods supply per-point matrices instead.
struct ScalingPoint {
    std::uint64_t grid_value = 0;
    int replicates = 0;
    double mmd_mean = 0, mmd_sd = 0;
    double tstr_auc_mean = 0, tstr_auc_sd = 0;
    double air_f1_mean = 0, air_f1_sd = 0;
};
std::vector<ScalingPoint> run_scaling_experiment(const RunConfig& cfg, ScalingAxis axis);

void write_scaling_csv(const std::filesystem::path& path, const std::vector<ScalingPoint>& curve,
                       ScalingAxis axis);

}  // namespace synthbench
