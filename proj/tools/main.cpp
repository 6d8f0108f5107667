// SPDX-License-Identifier: Apache-2.0
//
// mmfbeam: max-min fair multicast beamforming via SDP-ADMM
// Copyright (C) 2026 the mmfbeam authors

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "mmfbeam/brute_force.hpp"
#include "mmfbeam/campaign.hpp"

namespace {

using namespace mmfbeam;

int cmd_run(const std::string& config_path, std::uint64_t seed, bool seed_set, int samples,
            const std::string& out_dir, int threads, bool diagnostics) {
  ExperimentConfig cfg;
  if (!config_path.empty()) cfg = load_experiment_config(config_path);
  if (seed_set) cfg.base_seed = seed;
  if (samples >= 0) cfg.num_samples = samples;
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (threads > 0) cfg.threads = threads;
  if (diagnostics) cfg.diagnostics = true;

  const CampaignResult result = run_campaign(cfg);
  const CampaignSummary& s = result.summary;
  std::printf("campaign finished: %d samples (%d failed), N=%d K=%d\n", s.total, s.failed,
              cfg.channel.geometry.num_antennas, cfg.channel.geometry.num_ues);
  std::printf("  mean wall time    %.4g s\n", s.mean_wall_time);
  std::printf("  median wall time  %.4g s\n", s.median_wall_time);
  std::printf("  mean min-SE       %.4g bit/s/Hz\n", s.mean_min_se);
  std::printf("  median gap to SDR %.3g%%\n", 100.0 * s.median_gap_rel);
  std::printf("  artifacts in %s\n", cfg.out_dir.c_str());
  return 0;
}

int cmd_oracle(const std::string& config_path, std::uint64_t seed, int samples, int ues,
               int grid) {
  ExperimentConfig cfg;
  if (!config_path.empty()) cfg = load_experiment_config(config_path);
  cfg.channel.geometry.num_antennas = 2;
  cfg.channel.geometry.num_ues = ues;

  std::printf("seed,oracle_min_se,solver_min_se,sdr_bound_se,ratio\n");
  int sandwich_ok = 0;
  for (int i = 0; i < samples; ++i) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
    const ChannelSet cs = campaign_channel_set(cfg, s);
    const MmfResult mmf = mmf_solve(cs, cfg.mmf);
    const BruteForceResult oracle = brute_force_mmf(cs, cfg.mmf.power_budget, grid);
    const double ratio = oracle.min_se > 0.0 ? mmf.min_se / oracle.min_se : 1.0;
    const bool ok = mmf.min_se >= 0.98 * oracle.min_se &&
                    mmf.min_se <= mmf.sdr_upper_bound_se + 1e-6;
    sandwich_ok += ok ? 1 : 0;
    std::printf("%llu,%.6f,%.6f,%.6f,%.4f%s\n", static_cast<unsigned long long>(s),
                oracle.min_se, mmf.min_se, mmf.sdr_upper_bound_se, ratio,
                ok ? "" : ",SANDWICH-VIOLATION");
  }
  std::printf("sandwich held for %d/%d samples\n", sandwich_ok, samples);
  return sandwich_ok == samples ? 0 : 1;
}

int cmd_replay(const std::string& input, const std::string& config_path,
               const std::string& out_dir, bool diagnostics) {
  ExperimentConfig cfg;
  if (!config_path.empty()) cfg = load_experiment_config(config_path);
  cfg.mmf.collect_diagnostics = diagnostics;

  const ChannelSet cs = load_channel_set(input);
  std::printf("loaded channel set: N=%d K=%d seed=%llu\n", cs.num_antennas, cs.num_ues,
              static_cast<unsigned long long>(cs.seed));
  const MmfResult res = mmf_solve(cs, cfg.mmf);
  std::printf("min SNR          %.6g\n", res.minimum_snr);
  std::printf("min SE           %.6g bit/s/Hz\n", res.min_se);
  std::printf("SDR bound SE     %.6g bit/s/Hz\n", res.sdr_upper_bound_se);
  std::printf("elim rounds      %d%s\n", res.elimination_rounds,
              res.truncated ? " (truncated)" : "");
  std::printf("outer iterations %ld\n", res.total_outer_iterations);
  std::printf("QoS solves       %d (%d converged)\n", res.qos_solves, res.qos_solves_converged);
  std::printf("wall time        %.4g s\n", res.wall_time_seconds);

  if (diagnostics && !out_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    std::ofstream f((fs::path(out_dir) / "replay_steps.csv").string());
    f << "phase,gamma,trace_w,feasible,outer_iters,converged\n";
    for (const BisectionStep& st : res.diagnostics.steps)
      f << st.phase << ',' << st.gamma << ',' << st.trace_w << ',' << (st.feasible ? 1 : 0)
        << ',' << st.outer_iters << ',' << (st.converged ? 1 : 0) << '\n';
    std::printf("diagnostics in %s\n", out_dir.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"max-min fair multicast beamforming via SDP-ADMM"};
  app.require_subcommand(1);

  std::string config_path, out_dir, input;
  std::uint64_t seed = 1;
  int samples = -1, threads = 0, ues = 2, grid = 2000;
  bool diagnostics = false;

  CLI::App* run = app.add_subcommand("run", "run a Monte Carlo campaign");
  run->add_option("--config", config_path, "JSON config file");
  auto* seed_opt = run->add_option("--seed", seed, "base seed");
  run->add_option("--samples", samples, "number of samples");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--threads", threads, "worker threads (0 = hardware)");
  run->add_flag("--diagnostics", diagnostics, "emit per-sample diagnostics");

  CLI::App* oracle = app.add_subcommand("oracle", "validate against the small-instance oracle");
  oracle->add_option("--config", config_path, "JSON config file");
  oracle->add_option("--seed", seed, "base seed");
  oracle->add_option("--samples", samples, "number of instances")->default_val(50);
  oracle->add_option("--ues", ues, "UEs per instance (N is fixed at 2)");
  oracle->add_option("--grid", grid, "grid resolution per angular dimension");

  CLI::App* replay = app.add_subcommand("replay", "solve a serialized channel set");
  replay->add_option("input", input, "channel set file")->required();
  replay->add_option("--config", config_path, "JSON config file");
  replay->add_option("--out", out_dir, "diagnostics output directory");
  replay->add_flag("--diagnostics", diagnostics, "collect per-step diagnostics");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(config_path, seed, !seed_opt->empty(), samples, out_dir, threads,
                     diagnostics);
    if (oracle->parsed())
      return cmd_oracle(config_path, seed, samples < 0 ? 50 : samples, ues, grid);
    if (replay->parsed()) return cmd_replay(input, config_path, out_dir, diagnostics);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
