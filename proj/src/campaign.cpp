// SPDX-License-Identifier: Apache-2.0
//
// mmfbeam: max-min fair multicast beamforming via SDP-ADMM
// Copyright (C) 2026 the mmfbeam authors

#include "mmfbeam/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace mmfbeam {

namespace {

std::string fmt(double v, const char* spec = "%.17g") {
  char buf[40];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

ChannelSet campaign_channel_set(const ExperimentConfig& config, std::uint64_t seed) {
  return generate_channel_set(seed, config.channel);
}

std::vector<std::pair<double, double>> emit_cdf(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("emit_cdf: empty input");
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("emit_cdf: non-finite value");
  std::sort(values.begin(), values.end());
  std::vector<std::pair<double, double>> cdf;
  cdf.reserve(values.size());
  const double n = static_cast<double>(values.size());
  for (size_t i = 0; i < values.size(); ++i)
    cdf.emplace_back(values[i], (static_cast<double>(i) + 0.5) / n);
  return cdf;
}

CampaignSummary summarize(const std::vector<SampleRecord>& records) {
  CampaignSummary s;
  s.total = static_cast<int>(records.size());
  std::vector<double> times, ses, gaps;
  for (const SampleRecord& r : records) {
    if (r.failed) {
      s.failed += 1;
      continue;
    }
    times.push_back(r.wall_time_seconds);
    ses.push_back(r.min_se_rank1);
    if (r.min_se_sdr_bound > 0.0)
      gaps.push_back((r.min_se_sdr_bound - r.min_se_rank1) / r.min_se_sdr_bound);
    s.converged += r.all_converged ? 1 : 0;
    s.truncated += r.truncated ? 1 : 0;
  }
  if (!times.empty()) {
    s.mean_wall_time = std::accumulate(times.begin(), times.end(), 0.0) / times.size();
    s.median_wall_time = median_of(times);
    s.mean_min_se = std::accumulate(ses.begin(), ses.end(), 0.0) / ses.size();
    s.median_gap_rel = median_of(gaps);
  }
  return s;
}

void write_samples_csv(const std::string& path, const std::vector<SampleRecord>& records) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_samples_csv: cannot open " + path);
  // Wall time lives in timings.csv: it is the one field that varies between
  // reruns of an identical campaign, and this file is byte-reproducible.
  f << "seed,min_se_rank1,min_se_sdr_bound,elimination_rounds,outer_iterations_total,"
       "all_converged,truncated,feasible,failed,error\n";
  for (const SampleRecord& r : records) {
    f << r.seed << ',' << fmt(r.min_se_rank1) << ',' << fmt(r.min_se_sdr_bound) << ','
      << r.elimination_rounds << ',' << r.outer_iterations_total << ','
      << (r.all_converged ? 1 : 0) << ',' << (r.truncated ? 1 : 0) << ','
      << (r.feasible ? 1 : 0) << ',' << (r.failed ? 1 : 0) << ',' << csv_escape(r.error)
      << '\n';
  }
  if (!f) throw std::runtime_error("write_samples_csv: write failed for " + path);
}

void write_timings_csv(const std::string& path, const std::vector<SampleRecord>& records) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_timings_csv: cannot open " + path);
  f << "seed,wall_time_seconds\n";
  for (const SampleRecord& r : records)
    if (!r.failed) f << r.seed << ',' << fmt(r.wall_time_seconds, "%.6g") << '\n';
  if (!f) throw std::runtime_error("write_timings_csv: write failed for " + path);
}

void write_cdf_csv(const std::string& path,
                   const std::vector<std::pair<double, double>>& cdf) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_cdf_csv: cannot open " + path);
  f << "value,percentile\n";
  for (const auto& [v, p] : cdf) f << fmt(v) << ',' << fmt(p) << '\n';
  if (!f) throw std::runtime_error("write_cdf_csv: write failed for " + path);
}

void write_summary(const std::string& path, const ExperimentConfig& config,
                   const CampaignSummary& s) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_summary: cannot open " + path);
  f << "samples: " << s.total << "\n"
    << "failed: " << s.failed << "\n"
    << "all_converged: " << s.converged << "\n"
    << "truncated: " << s.truncated << "\n"
    << "N: " << config.channel.geometry.num_antennas << "\n"
    << "K: " << config.channel.geometry.num_ues << "\n"
    << "mean_wall_time_s: " << fmt(s.mean_wall_time, "%.6g") << "\n"
    << "median_wall_time_s: " << fmt(s.median_wall_time, "%.6g") << "\n"
    << "mean_min_se: " << fmt(s.mean_min_se, "%.6g") << "\n"
    << "median_rel_gap_to_sdr: " << fmt(s.median_gap_rel, "%.6g") << "\n";
  if (!f) throw std::runtime_error("write_summary: write failed for " + path);
}

namespace {

nlohmann::json diagnostics_json(const SampleRecord& rec, const MmfDiagnostics& diag) {
  nlohmann::json j;
  j["seed"] = rec.seed;
  j["wall_time_seconds"] = rec.wall_time_seconds;
  auto steps = nlohmann::json::array();
  for (const BisectionStep& s : diag.steps) {
    steps.push_back({{"phase", s.phase},
                     {"gamma", s.gamma},
                     {"trace_w", s.trace_w},
                     {"feasible", s.feasible},
                     {"outer_iters", s.outer_iters},
                     {"converged", s.converged}});
  }
  j["gamma_steps"] = std::move(steps);
  auto rounds = nlohmann::json::array();
  for (const RoundDiagnostics& r : diag.rounds) {
    std::vector<double> spec(r.spectrum_before.data(),
                             r.spectrum_before.data() + r.spectrum_before.size());
    rounds.push_back({{"round", r.round},
                      {"rank_before", r.rank_before},
                      {"spectrum", spec},
                      {"zeta", r.zeta},
                      {"gamma_lo", r.gamma_lo},
                      {"gamma_up", r.gamma_up}});
  }
  j["rounds"] = std::move(rounds);
  return j;
}

void write_diagnostics_csv(std::ofstream& f, const SampleRecord& rec,
                           const MmfDiagnostics& diag) {
  for (const BisectionStep& s : diag.steps) {
    f << rec.seed << ',' << s.phase << ',' << fmt(s.gamma, "%.12g") << ','
      << fmt(s.trace_w, "%.12g") << ',' << (s.feasible ? 1 : 0) << ',' << s.outer_iters
      << ',' << (s.converged ? 1 : 0) << '\n';
  }
}

}  // namespace

CampaignResult run_campaign(const ExperimentConfig& config) {
  if (config.num_samples < 0)
    throw std::invalid_argument("run_campaign: num_samples must be nonnegative");
  namespace fs = std::filesystem;
  fs::create_directories(config.out_dir);

  const int n = config.num_samples;
  std::vector<SampleRecord> records(n);
  std::vector<MmfDiagnostics> diags(config.diagnostics ? n : 0);

  MmfConfig mmf_cfg = config.mmf;
  mmf_cfg.collect_diagnostics = config.diagnostics;

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      SampleRecord& rec = records[i];
      rec.seed = config.base_seed + static_cast<std::uint64_t>(i);
      try {
        const ChannelSet cs = campaign_channel_set(config, rec.seed);
        const MmfResult res = mmf_solve(cs, mmf_cfg);
        rec.min_se_rank1 = res.min_se;
        rec.min_se_sdr_bound = res.sdr_upper_bound_se;
        rec.elimination_rounds = res.elimination_rounds;
        rec.outer_iterations_total = res.total_outer_iterations;
        rec.wall_time_seconds = res.wall_time_seconds;
        rec.all_converged = res.qos_solves_converged == res.qos_solves;
        rec.truncated = res.truncated;
        rec.feasible = res.feasible;
        if (config.diagnostics) diags[i] = res.diagnostics;
      } catch (const std::exception& e) {
        rec.failed = true;
        rec.error = e.what();
      }
    }
  };

  int n_threads = config.threads > 0 ? config.threads
                                     : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::max(1, std::min(n_threads, std::max(1, n)));
  if (n_threads == 1 || n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  CampaignResult out;
  out.records = std::move(records);
  out.summary = summarize(out.records);

  const fs::path dir(config.out_dir);
  write_samples_csv((dir / "samples.csv").string(), out.records);
  write_timings_csv((dir / "timings.csv").string(), out.records);

  std::vector<double> rank1, sdr;
  for (const SampleRecord& r : out.records) {
    if (r.failed) continue;
    rank1.push_back(r.min_se_rank1);
    sdr.push_back(r.min_se_sdr_bound);
  }
  std::vector<std::pair<double, double>> cdf_rank1, cdf_sdr;
  if (!rank1.empty()) {
    cdf_rank1 = emit_cdf(rank1);
    cdf_sdr = emit_cdf(sdr);
  }
  write_cdf_csv((dir / "cdf_rank1.csv").string(), cdf_rank1);
  write_cdf_csv((dir / "cdf_sdr.csv").string(), cdf_sdr);
  write_summary((dir / "summary.txt").string(), config, out.summary);

  if (config.diagnostics) {
    if (config.diagnostics_format == "csv") {
      std::ofstream f((dir / "diagnostics.csv").string());
      if (!f) throw std::runtime_error("run_campaign: cannot open diagnostics.csv");
      f << "seed,phase,gamma,trace_w,feasible,outer_iters,converged\n";
      for (int i = 0; i < n; ++i)
        if (!out.records[i].failed) write_diagnostics_csv(f, out.records[i], diags[i]);
    } else {
      std::ofstream f((dir / "diagnostics.jsonl").string());
      if (!f) throw std::runtime_error("run_campaign: cannot open diagnostics.jsonl");
      for (int i = 0; i < n; ++i)
        if (!out.records[i].failed)
          f << diagnostics_json(out.records[i], diags[i]).dump() << '\n';
    }
  }
  return out;
}

// --------------------------------------------------------------------------
// Configuration (JSON)

namespace {

void parse_qos(const nlohmann::json& j, QosSolverConfig& q) {
  q.rho = j.value("rho", q.rho);
  q.mu = j.value("mu", q.mu);
  q.inner_iters = j.value("inner_iters", q.inner_iters);
  q.eps_dual = j.value("eps_dual", q.eps_dual);
  q.eps_prim = j.value("eps_prim", q.eps_prim);
  q.max_outer_iters = j.value("max_outer_iters", q.max_outer_iters);
  q.reset_inner_each_outer = j.value("reset_inner_each_outer", q.reset_inner_each_outer);
}

void parse_mmf(const nlohmann::json& j, MmfConfig& m) {
  m.power_budget = j.value("power_budget_w", m.power_budget);
  m.bisection_tol = j.value("bisection_tol", m.bisection_tol);
  m.elimination_kappa = j.value("kappa", m.elimination_kappa);
  m.penalty_weight = j.value("penalty_weight", m.penalty_weight);
  m.max_elimination_rounds = j.value("max_elimination_rounds", m.max_elimination_rounds);
  m.rank1_threshold = j.value("rank1_threshold", m.rank1_threshold);
  m.reset_duals_each_solve = j.value("reset_duals_each_solve", m.reset_duals_each_solve);
  if (j.contains("qos")) parse_qos(j.at("qos"), m.qos);
}

void parse_channel(const nlohmann::json& j, ChannelModelConfig& c) {
  c.geometry.area_side_m = j.value("area_side_m", c.geometry.area_side_m);
  c.geometry.num_antennas = j.value("num_antennas", c.geometry.num_antennas);
  c.geometry.num_ues = j.value("num_ues", c.geometry.num_ues);
  c.geometry.min_bs_distance_m = j.value("min_bs_distance_m", c.geometry.min_bs_distance_m);
  c.noise_dbm = j.value("noise_dbm", c.noise_dbm);
  c.angular_std_deg = j.value("angular_std_deg", c.angular_std_deg);
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("config parse error: ") + e.what());
  }
  ExperimentConfig cfg;
  cfg.num_samples = j.value("samples", cfg.num_samples);
  cfg.base_seed = j.value("base_seed", cfg.base_seed);
  if (j.contains("channel")) parse_channel(j.at("channel"), cfg.channel);
  if (j.contains("mmf")) parse_mmf(j.at("mmf"), cfg.mmf);
  cfg.out_dir = j.value("out_dir", cfg.out_dir);
  cfg.threads = j.value("threads", cfg.threads);
  cfg.diagnostics = j.value("diagnostics", cfg.diagnostics);
  cfg.diagnostics_format = j.value("diagnostics_format", cfg.diagnostics_format);
  if (cfg.diagnostics_format != "jsonl" && cfg.diagnostics_format != "csv")
    throw std::runtime_error("config: diagnostics_format must be jsonl or csv");
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_experiment_config(ss.str());
}

std::string experiment_config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["samples"] = c.num_samples;
  j["base_seed"] = c.base_seed;
  j["channel"] = {{"area_side_m", c.channel.geometry.area_side_m},
                  {"num_antennas", c.channel.geometry.num_antennas},
                  {"num_ues", c.channel.geometry.num_ues},
                  {"min_bs_distance_m", c.channel.geometry.min_bs_distance_m},
                  {"noise_dbm", c.channel.noise_dbm},
                  {"angular_std_deg", c.channel.angular_std_deg}};
  j["mmf"] = {{"power_budget_w", c.mmf.power_budget},
              {"bisection_tol", c.mmf.bisection_tol},
              {"kappa", c.mmf.elimination_kappa},
              {"penalty_weight", c.mmf.penalty_weight},
              {"max_elimination_rounds", c.mmf.max_elimination_rounds},
              {"rank1_threshold", c.mmf.rank1_threshold},
              {"reset_duals_each_solve", c.mmf.reset_duals_each_solve},
              {"qos",
               {{"rho", c.mmf.qos.rho},
                {"mu", c.mmf.qos.mu},
                {"inner_iters", c.mmf.qos.inner_iters},
                {"eps_dual", c.mmf.qos.eps_dual},
                {"eps_prim", c.mmf.qos.eps_prim},
                {"max_outer_iters", c.mmf.qos.max_outer_iters},
                {"reset_inner_each_outer", c.mmf.qos.reset_inner_each_outer}}}};
  j["out_dir"] = c.out_dir;
  j["threads"] = c.threads;
  j["diagnostics"] = c.diagnostics;
  j["diagnostics_format"] = c.diagnostics_format;
  return j.dump(2);
}

}  // namespace mmfbeam
