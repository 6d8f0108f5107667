// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mmfbeam/brute_force.hpp"
#include "mmfbeam/campaign.hpp"
#include "support/test_util.hpp"

using namespace mmfbeam;
using mmfbeam_tests::make_channel_set;
using mmfbeam_tests::physical_channel_set;
using mmfbeam_tests::random_cvector;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  REQUIRE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

ExperimentConfig tiny_campaign(const std::string& out_dir, int samples) {
  ExperimentConfig cfg;
  cfg.num_samples = samples;
  cfg.base_seed = 900;
  cfg.channel.geometry.num_antennas = 6;
  cfg.channel.geometry.num_ues = 3;
  cfg.out_dir = out_dir;
  cfg.threads = 1;
  return cfg;
}

}  // namespace

TEST_CASE("emit_cdf: single point uses the midpoint convention") {
  auto cdf = emit_cdf({5.0});
  REQUIRE(cdf.size() == 1);
  CHECK(cdf[0].first == 5.0);
  CHECK(cdf[0].second == 0.5);
}

TEST_CASE("emit_cdf: four points") {
  auto cdf = emit_cdf({4.0, 1.0, 3.0, 2.0});
  REQUIRE(cdf.size() == 4);
  const double expected_p[] = {0.125, 0.375, 0.625, 0.875};
  for (int i = 0; i < 4; ++i) {
    CHECK(cdf[i].first == doctest::Approx(i + 1.0));
    CHECK(cdf[i].second == doctest::Approx(expected_p[i]).epsilon(1e-14));
  }
  for (int i = 1; i < 4; ++i) {
    CHECK(cdf[i].first >= cdf[i - 1].first);
    CHECK(cdf[i].second >= cdf[i - 1].second);
  }
}

TEST_CASE("emit_cdf rejects empty and non-finite input") {
  CHECK_THROWS_AS(emit_cdf({}), std::invalid_argument);
  CHECK_THROWS_AS(emit_cdf({1.0, std::nan("")}), std::invalid_argument);
}

TEST_CASE("brute force recovers MRT for a single UE") {
  Rng rng(140);
  std::vector<Cvec> hs{random_cvector(rng, 2)};
  ChannelSet cs = make_channel_set(hs, Rvec::Constant(1, 1.0));
  BruteForceResult res = brute_force_mmf(cs, 4.0, 800);
  const double opt = 4.0 * hs[0].squaredNorm();
  CHECK(res.min_snr >= 0.995 * opt);
  CHECK(res.min_snr <= opt * (1.0 + 1e-9));
}

TEST_CASE("brute force solves the symmetric two-UE split exactly") {
  // orthogonal equal-norm channels: the optimum splits power evenly and
  // achieves P_T ||h||^2 / (2 sigma^2)
  Cvec h1(2), h2(2);
  h1 << 1.3, 0.0;
  h2 << 0.0, 1.3;
  ChannelSet cs = make_channel_set({h1, h2}, Rvec::Constant(2, 0.9));
  BruteForceResult res = brute_force_mmf(cs, 4.0, 800);
  const double opt = 4.0 * h1.squaredNorm() / (2.0 * 0.9);
  CHECK(res.min_snr == doctest::Approx(opt).epsilon(1e-4));
}

TEST_CASE("brute force enforces its domain preconditions") {
  Rng rng(141);
  ChannelSet big = make_channel_set({random_cvector(rng, 4)}, Rvec::Constant(1, 1.0));
  CHECK_THROWS_AS(brute_force_mmf(big, 4.0, 600), std::invalid_argument);
  ChannelSet ok = make_channel_set({random_cvector(rng, 2)}, Rvec::Constant(1, 1.0));
  CHECK_THROWS_AS(brute_force_mmf(ok, 4.0, 400), std::invalid_argument);
}

TEST_CASE("three-antenna search core recovers MRT at coarse resolution") {
  Rng rng(142);
  std::vector<Cvec> hs{random_cvector(rng, 3)};
  ChannelSet cs = make_channel_set(hs, Rvec::Constant(1, 1.0));
  BruteForceResult res = detail::brute_force_mmf_impl(cs, 4.0, 48);
  const double opt = 4.0 * hs[0].squaredNorm();
  CHECK(res.min_snr >= 0.97 * opt);
  CHECK(res.min_snr <= opt * (1.0 + 1e-9));
}

TEST_CASE("sandwich: solver and oracle agree on a seed-9 three-UE instance") {
  ChannelSet cs = physical_channel_set(9, 2, 3);
  MmfConfig cfg;
  cfg.qos.eps_dual = 1e-7;
  cfg.qos.eps_prim = 1e-6;
  cfg.qos.max_outer_iters = 5000;
  MmfResult mmf = mmf_solve(cs, cfg);
  BruteForceResult oracle = brute_force_mmf(cs, cfg.power_budget, 1000);
  CHECK(oracle.min_se >= mmf.min_se * (1.0 - 0.02));
  CHECK(mmf.min_se <= mmf.sdr_upper_bound_se + 1e-6);
  CHECK(mmf.min_se >= 0.98 * oracle.min_se);
}

TEST_CASE("campaign with zero samples writes empty artifacts and succeeds") {
  const std::string dir = "test_out_empty";
  std::filesystem::remove_all(dir);
  ExperimentConfig cfg = tiny_campaign(dir, 0);
  CampaignResult res = run_campaign(cfg);
  CHECK(res.records.empty());
  CHECK(res.summary.total == 0);
  CHECK(res.summary.failed == 0);
  CHECK(read_file(dir + "/samples.csv").find("seed,") == 0);
  CHECK(read_file(dir + "/cdf_rank1.csv") == "value,percentile\n");
  CHECK(read_file(dir + "/summary.txt").find("samples: 0") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("campaign samples.csv is byte-identical across reruns and threads") {
  const std::string d1 = "test_out_a", d2 = "test_out_b", d3 = "test_out_c";
  for (const auto& d : {d1, d2, d3}) std::filesystem::remove_all(d);

  ExperimentConfig cfg = tiny_campaign(d1, 4);
  run_campaign(cfg);
  cfg.out_dir = d2;
  run_campaign(cfg);
  cfg.out_dir = d3;
  cfg.threads = 3;  // worker count must not affect the records
  run_campaign(cfg);

  CHECK(read_file(d1 + "/samples.csv") == read_file(d2 + "/samples.csv"));
  CHECK(read_file(d1 + "/samples.csv") == read_file(d3 + "/samples.csv"));
  CHECK(read_file(d1 + "/cdf_rank1.csv") == read_file(d2 + "/cdf_rank1.csv"));
  CHECK(read_file(d1 + "/cdf_sdr.csv") == read_file(d3 + "/cdf_sdr.csv"));
  for (const auto& d : {d1, d2, d3}) std::filesystem::remove_all(d);
}

TEST_CASE("rank-1 CDF lies left of the SDR-bound CDF") {
  const std::string dir = "test_out_cdf";
  std::filesystem::remove_all(dir);
  ExperimentConfig cfg = tiny_campaign(dir, 10);
  CampaignResult res = run_campaign(cfg);

  std::vector<double> rank1, sdr;
  for (const SampleRecord& r : res.records) {
    REQUIRE_FALSE(r.failed);
    CHECK(r.min_se_rank1 <= r.min_se_sdr_bound + 1e-6);
    rank1.push_back(r.min_se_rank1);
    sdr.push_back(r.min_se_sdr_bound);
  }
  std::sort(rank1.begin(), rank1.end());
  std::sort(sdr.begin(), sdr.end());
  for (size_t i = 0; i < rank1.size(); ++i) CHECK(rank1[i] <= sdr[i] + 1e-6);
  std::filesystem::remove_all(dir);
}

TEST_CASE("campaign records individual sample failures without aborting") {
  const std::string dir = "test_out_fail";
  std::filesystem::remove_all(dir);
  ExperimentConfig cfg = tiny_campaign(dir, 3);
  // exclusion radius at the half-diagonal: every sample's generation throws
  cfg.channel.geometry.min_bs_distance_m =
      0.5 * M_SQRT2 * cfg.channel.geometry.area_side_m;
  CampaignResult res = run_campaign(cfg);
  CHECK(res.summary.total == 3);
  CHECK(res.summary.failed == 3);
  for (const SampleRecord& r : res.records) {
    CHECK(r.failed);
    CHECK_FALSE(r.error.empty());
  }
  // CDFs exclude failed samples entirely
  CHECK(read_file(dir + "/cdf_rank1.csv") == "value,percentile\n");
  std::filesystem::remove_all(dir);
}

TEST_CASE("solve time grows with the number of UEs") {
  // medians over 50 seeds at N = 8; coarse but stable on shared hardware
  const int seeds = 50;
  std::vector<double> t3, t6;
  for (int s = 0; s < seeds; ++s) {
    MmfConfig cfg;
    ChannelSet a = physical_channel_set(5000 + s, 8, 3);
    t3.push_back(mmf_solve(a, cfg).wall_time_seconds);
    ChannelSet b = physical_channel_set(6000 + s, 8, 6);
    t6.push_back(mmf_solve(b, cfg).wall_time_seconds);
  }
  std::sort(t3.begin(), t3.end());
  std::sort(t6.begin(), t6.end());
  CHECK(t6[seeds / 2] > t3[seeds / 2]);
}

TEST_CASE("timings land in timings.csv, not samples.csv") {
  const std::string dir = "test_out_timing";
  std::filesystem::remove_all(dir);
  ExperimentConfig cfg = tiny_campaign(dir, 2);
  run_campaign(cfg);
  CHECK(read_file(dir + "/samples.csv").find("wall_time") == std::string::npos);
  const std::string timings = read_file(dir + "/timings.csv");
  CHECK(timings.find("seed,wall_time_seconds") == 0);
  int lines = static_cast<int>(std::count(timings.begin(), timings.end(), '\n'));
  CHECK(lines == 3);  // header + one row per sample
  std::filesystem::remove_all(dir);
}

TEST_CASE("diagnostics artifacts are emitted in the requested format") {
  const std::string dir = "test_out_diag";
  std::filesystem::remove_all(dir);
  ExperimentConfig cfg = tiny_campaign(dir, 2);
  cfg.diagnostics = true;
  run_campaign(cfg);
  const std::string jsonl = read_file(dir + "/diagnostics.jsonl");
  CHECK(jsonl.find("\"gamma_steps\"") != std::string::npos);
  CHECK(jsonl.find("\"rounds\"") != std::string::npos);

  cfg.diagnostics_format = "csv";
  run_campaign(cfg);
  const std::string csv = read_file(dir + "/diagnostics.csv");
  CHECK(csv.find("seed,phase,gamma") == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("experiment config parses from JSON with defaults for missing keys") {
  ExperimentConfig cfg = parse_experiment_config(R"({
    "samples": 7,
    "channel": {"num_antennas": 12, "num_ues": 4},
    "mmf": {"power_budget_w": 10.0, "qos": {"mu": 2000.0}}
  })");
  CHECK(cfg.num_samples == 7);
  CHECK(cfg.channel.geometry.num_antennas == 12);
  CHECK(cfg.channel.geometry.num_ues == 4);
  CHECK(cfg.channel.geometry.area_side_m == 750.0);  // default retained
  CHECK(cfg.mmf.power_budget == 10.0);
  CHECK(cfg.mmf.qos.mu == 2000.0);
  CHECK(cfg.mmf.qos.rho == 1.0);
  CHECK(cfg.mmf.elimination_kappa == 0.9);

  CHECK_THROWS_AS(parse_experiment_config("{nope"), std::runtime_error);
  CHECK_THROWS_AS(parse_experiment_config(R"({"diagnostics_format": "xml"})"),
                  std::runtime_error);
}

TEST_CASE("experiment config JSON round-trips") {
  ExperimentConfig cfg;
  cfg.num_samples = 123;
  cfg.base_seed = 99;
  cfg.channel.geometry.num_ues = 30;
  cfg.mmf.qos.eps_dual = 3e-6;
  cfg.threads = 2;
  ExperimentConfig back = parse_experiment_config(experiment_config_to_json(cfg));
  CHECK(back.num_samples == cfg.num_samples);
  CHECK(back.base_seed == cfg.base_seed);
  CHECK(back.channel.geometry.num_ues == 30);
  CHECK(back.mmf.qos.eps_dual == 3e-6);
  CHECK(back.threads == 2);
}

TEST_CASE("default experiment configuration mirrors the reference setup") {
  ExperimentConfig cfg;
  CHECK(cfg.num_samples == 2000);
  CHECK(cfg.channel.geometry.area_side_m == 750.0);
  CHECK(cfg.channel.geometry.num_antennas == 36);
  CHECK(cfg.channel.geometry.num_ues == 15);
  CHECK(cfg.channel.noise_dbm == -94.0);
  CHECK(cfg.mmf.power_budget == 40.0);
  CHECK(cfg.mmf.bisection_tol == 0.1);
  CHECK(cfg.mmf.elimination_kappa == 0.9);
  CHECK(cfg.mmf.penalty_weight == 5.0);
  CHECK(cfg.mmf.qos.rho == 1.0);
  CHECK(cfg.mmf.qos.mu == 1e5);
  CHECK(cfg.mmf.qos.inner_iters == 50);
  CHECK(cfg.mmf.qos.eps_dual == 1e-5);
  CHECK(cfg.mmf.qos.eps_prim == 1e-4);
  CHECK(cfg.mmf.qos.max_outer_iters == 1000);
}
