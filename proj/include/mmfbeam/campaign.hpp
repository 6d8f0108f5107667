// SPDX-License-Identifier: Apache-2.0
//
// mmfbeam: max-min fair multicast beamforming via SDP-ADMM
// Copyright (C) 2026 the mmfbeam authors

#ifndef MMFBEAM_CAMPAIGN_HPP
#define MMFBEAM_CAMPAIGN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mmfbeam/mmf_solver.hpp"

namespace mmfbeam {

struct ExperimentConfig {
  int num_samples = 2000;
  std::uint64_t base_seed = 1;
  ChannelModelConfig channel;
  MmfConfig mmf;
  std::string out_dir = "out";
  int threads = 0;  // 0 selects hardware concurrency
  bool diagnostics = false;
  std::string diagnostics_format = "jsonl";  // "jsonl" or "csv"
};

struct SampleRecord {
  std::uint64_t seed = 0;
  double min_se_rank1 = 0.0;
  double min_se_sdr_bound = 0.0;
  int elimination_rounds = 0;
  long outer_iterations_total = 0;
  double wall_time_seconds = 0.0;
  bool all_converged = false;
  bool truncated = false;
  bool feasible = false;
  bool failed = false;
  std::string error;
};

struct CampaignSummary {
  int total = 0;
  int failed = 0;
  int converged = 0;
  int truncated = 0;
  double mean_wall_time = 0.0;
  double median_wall_time = 0.0;
  double mean_min_se = 0.0;
  double median_gap_rel = 0.0;  // relative gap of rank-1 SE to the SDR bound
};

struct CampaignResult {
  std::vector<SampleRecord> records;
  CampaignSummary summary;
};

/// Channel set for sample index i of a campaign, derived from seed
/// base_seed + i. Exposed so tests and the acceptance suite share the exact
/// generation path.
ChannelSet campaign_channel_set(const ExperimentConfig& config, std::uint64_t seed);

/// Runs the Monte Carlo campaign: per-sample channel generation and
/// mmf_solve, sample-level parallelism, deterministic seed-derived records.
/// Writes samples.csv, timings.csv, cdf_rank1.csv, cdf_sdr.csv, summary.txt
/// (and a diagnostics file when enabled) under config.out_dir. Individual
/// sample failures are recorded and excluded from the CDFs; only I/O failure
/// aborts the campaign.
CampaignResult run_campaign(const ExperimentConfig& config);

/// Empirical CDF with the midpoint convention: sorted values paired with
/// percentiles (i - 0.5) / n. Throws on empty input.
std::vector<std::pair<double, double>> emit_cdf(std::vector<double> values);

CampaignSummary summarize(const std::vector<SampleRecord>& records);

// Artifact writers; header-only rows for empty inputs.
void write_samples_csv(const std::string& path, const std::vector<SampleRecord>& records);
void write_timings_csv(const std::string& path, const std::vector<SampleRecord>& records);
void write_cdf_csv(const std::string& path, const std::vector<std::pair<double, double>>& cdf);
void write_summary(const std::string& path, const ExperimentConfig& config,
                   const CampaignSummary& summary);

/// JSON (de)serialization of the experiment configuration. Missing fields
/// keep their defaults.
ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config(const std::string& json_text);
std::string experiment_config_to_json(const ExperimentConfig& config);

}  // namespace mmfbeam

#endif  // MMFBEAM_CAMPAIGN_HPP
