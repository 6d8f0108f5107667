// SPDX-License-Identifier: Apache-2.0
//
// mmfbeam: max-min fair multicast beamforming via SDP-ADMM
// Copyright (C) 2026 the mmfbeam authors

#include "mmfbeam/channel.hpp"

#include <Eigen/Eigenvalues>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mmfbeam {

NetworkGeometry sample_geometry(Rng& rng, const GeometryParams& params) {
  if (params.num_ues < 1 || params.num_antennas < 1 || params.area_side_m <= 0.0)
    throw std::invalid_argument("sample_geometry: K >= 1, N >= 1, area_side > 0 required");
  const double half_diag = 0.5 * M_SQRT2 * params.area_side_m;
  if (!(params.min_bs_distance_m > 0.0) || params.min_bs_distance_m >= half_diag)
    throw std::invalid_argument("sample_geometry: min_bs_distance must be in (0, half-diagonal)");

  NetworkGeometry g;
  g.area_side_m = params.area_side_m;
  g.bs_position = Eigen::Vector2d(0.5 * params.area_side_m, 0.5 * params.area_side_m);
  g.num_antennas = params.num_antennas;
  g.min_bs_distance_m = params.min_bs_distance_m;
  g.ue_positions.reserve(params.num_ues);
  while (static_cast<int>(g.ue_positions.size()) < params.num_ues) {
    Eigen::Vector2d p(rng.uniform(0.0, params.area_side_m),
                      rng.uniform(0.0, params.area_side_m));
    if ((p - g.bs_position).norm() >= params.min_bs_distance_m)
      g.ue_positions.push_back(p);
  }
  return g;
}

NetworkGeometry sample_geometry(std::uint64_t seed, const GeometryParams& params) {
  Rng rng(seed);
  return sample_geometry(rng, params);
}

double pathloss_db(double d_m) {
  if (!(d_m > 0.0)) throw std::invalid_argument("pathloss_db: distance must be positive");
  return -30.5 - 36.7 * std::log10(d_m);
}

Rmat shadowing_covariance(const NetworkGeometry& geometry) {
  const int k = geometry.num_ues();
  Rmat cov(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const double delta = (geometry.ue_positions[i] - geometry.ue_positions[j]).norm();
      cov(i, j) = 16.0 * std::exp2(-delta / 9.0);
    }
  }
  return cov;
}

namespace {

// Symmetric square root with eigenvalue clipping at zero.
Rmat real_psd_sqrt(const Rmat& cov) {
  Eigen::SelfAdjointEigenSolver<Rmat> es(cov);
  Rvec lam = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lam.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

Rvec sample_shadowing(Rng& rng, const NetworkGeometry& geometry) {
  const int k = geometry.num_ues();
  const Rmat root = real_psd_sqrt(shadowing_covariance(geometry));
  Rvec g(k);
  for (int i = 0; i < k; ++i) g(i) = rng.gaussian();
  return root * g;
}

Rvec sample_shadowing(std::uint64_t seed, const NetworkGeometry& geometry) {
  Rng rng(seed);
  return sample_shadowing(rng, geometry);
}

LargeScaleFading large_scale_fading(const NetworkGeometry& geometry, const Rvec& shadow_db) {
  const int k = geometry.num_ues();
  if (shadow_db.size() != k)
    throw std::invalid_argument("large_scale_fading: shadowing size mismatch");
  LargeScaleFading f;
  f.shadow_db = shadow_db;
  f.distances.resize(k);
  f.beta_db.resize(k);
  for (int i = 0; i < k; ++i) {
    f.distances(i) = geometry.distance(i);
    f.beta_db(i) = pathloss_db(f.distances(i)) + shadow_db(i);
  }
  return f;
}

SpatialCorrelation spatial_correlation(double beta_linear, double nominal_angle,
                                       double angular_std, int n) {
  if (!(beta_linear > 0.0) || n < 1)
    throw std::invalid_argument("spatial_correlation: beta > 0 and n >= 1 required");
  const double sin_phi = std::sin(nominal_angle);
  const double cos_phi = std::cos(nominal_angle);
  Cmat r(n, n);
  for (int l = 0; l < n; ++l) {
    for (int m = 0; m < n; ++m) {
      const double d = static_cast<double>(l - m);
      const double phase = M_PI * d * sin_phi;
      const double damp = angular_std * M_PI * d * cos_phi;
      r(l, m) = beta_linear * std::exp(-0.5 * damp * damp) * Cplx(std::cos(phase), std::sin(phase));
    }
  }
  SpatialCorrelation out;
  out.matrix = HermitianMatrix(psd_project(symmetrize(r)));
  out.nominal_angle = nominal_angle;
  out.angular_std = angular_std;
  return out;
}

ChannelSet sample_channels(Rng& rng, const std::vector<SpatialCorrelation>& correlations,
                           const Rvec& noise_powers) {
  const int k = static_cast<int>(correlations.size());
  if (k < 1) throw std::invalid_argument("sample_channels: need at least one UE");
  if (noise_powers.size() != k)
    throw std::invalid_argument("sample_channels: noise power size mismatch");
  const Eigen::Index n = correlations[0].matrix.dim();

  ChannelSet cs;
  cs.num_antennas = static_cast<int>(n);
  cs.num_ues = k;
  cs.noise_powers = noise_powers;
  cs.channels.reserve(k);
  cs.snr_matrices.reserve(k);
  for (int i = 0; i < k; ++i) {
    const Cmat& r = correlations[i].matrix.mat();
    if (r.rows() != n)
      throw std::invalid_argument("sample_channels: inconsistent correlation dims");
    Eigen::SelfAdjointEigenSolver<Cmat> es(r);
    const double lam_max = es.eigenvalues().maxCoeff();
    if (es.eigenvalues().minCoeff() < -1e-8 * std::max(lam_max, 0.0))
      throw std::invalid_argument("sample_channels: correlation matrix is not PSD");
    Rvec lam = es.eigenvalues().cwiseMax(0.0);
    Cmat root = es.eigenvectors() * lam.cwiseSqrt().asDiagonal() *
                es.eigenvectors().adjoint();
    Cvec g(n);
    for (Eigen::Index a = 0; a < n; ++a) g(a) = rng.cgaussian();
    Cvec h = root * g;
    if (!(noise_powers(i) > 0.0))
      throw std::invalid_argument("sample_channels: noise powers must be positive");
    Cmat hk = (h * h.adjoint()) / noise_powers(i);
    cs.channels.push_back(std::move(h));
    cs.snr_matrices.emplace_back(symmetrize(hk));
  }
  return cs;
}

ChannelSet sample_channels(std::uint64_t seed, const std::vector<SpatialCorrelation>& correlations,
                           const Rvec& noise_powers) {
  Rng rng(seed);
  return sample_channels(rng, correlations, noise_powers);
}

double noise_power_watts(double noise_dbm) {
  return std::pow(10.0, (noise_dbm - 30.0) / 10.0);
}

ChannelSet generate_channel_set(std::uint64_t seed, const ChannelModelConfig& config) {
  Rng rng(seed);
  const NetworkGeometry geo = sample_geometry(rng, config.geometry);
  const Rvec shadow = sample_shadowing(rng, geo);
  const LargeScaleFading fading = large_scale_fading(geo, shadow);
  const double sigma_phi = config.angular_std_deg * M_PI / 180.0;

  std::vector<SpatialCorrelation> corr;
  corr.reserve(geo.num_ues());
  for (int k = 0; k < geo.num_ues(); ++k) {
    const double beta = std::pow(10.0, fading.beta_db(k) / 10.0);
    corr.push_back(spatial_correlation(beta, geo.azimuth(k), sigma_phi, geo.num_antennas));
  }
  const Rvec noise = Rvec::Constant(geo.num_ues(), noise_power_watts(config.noise_dbm));
  ChannelSet cs = sample_channels(rng, corr, noise);
  cs.seed = seed;
  return cs;
}

// --------------------------------------------------------------------------
// Serialization

namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

}  // namespace

void save_channel_set(const ChannelSet& cs, std::ostream& out) {
  out << "mmfbeam-channelset,v1\n";
  out << "N," << cs.num_antennas << "\n";
  out << "K," << cs.num_ues << "\n";
  out << "seed," << cs.seed << "\n";
  out << "sigma2";
  for (int k = 0; k < cs.num_ues; ++k) out << "," << fmt_double(cs.noise_powers(k));
  out << "\n";
  for (int k = 0; k < cs.num_ues; ++k) {
    out << "ue," << k << "\n";
    for (int a = 0; a < cs.num_antennas; ++a) {
      out << fmt_double(cs.channels[k](a).real()) << ","
          << fmt_double(cs.channels[k](a).imag()) << "\n";
    }
  }
}

void save_channel_set(const ChannelSet& cs, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("save_channel_set: cannot open " + path);
  save_channel_set(cs, f);
  if (!f) throw std::runtime_error("save_channel_set: write failed for " + path);
}

ChannelSet load_channel_set(std::istream& in) {
  std::string line;
  auto next_line = [&](const char* what) {
    if (!std::getline(in, line))
      throw std::runtime_error(std::string("load_channel_set: truncated file, expected ") + what);
    return split_csv(line);
  };

  auto magic = next_line("magic header");
  if (magic.size() < 2 || magic[0] != "mmfbeam-channelset" || magic[1] != "v1")
    throw std::runtime_error("load_channel_set: not an mmfbeam channel set file");

  auto nrow = next_line("N");
  auto krow = next_line("K");
  auto srow = next_line("seed");
  auto sig = next_line("sigma2");
  if (nrow.size() != 2 || nrow[0] != "N" || krow.size() != 2 || krow[0] != "K" ||
      srow.size() != 2 || srow[0] != "seed" || sig.empty() || sig[0] != "sigma2")
    throw std::runtime_error("load_channel_set: malformed header");

  ChannelSet cs;
  cs.num_antennas = std::stoi(nrow[1]);
  cs.num_ues = std::stoi(krow[1]);
  cs.seed = std::stoull(srow[1]);
  if (cs.num_antennas < 1 || cs.num_ues < 1)
    throw std::runtime_error("load_channel_set: invalid dimensions");
  if (static_cast<int>(sig.size()) != cs.num_ues + 1)
    throw std::runtime_error("load_channel_set: sigma2 row has wrong arity");
  cs.noise_powers.resize(cs.num_ues);
  for (int k = 0; k < cs.num_ues; ++k) cs.noise_powers(k) = std::stod(sig[k + 1]);

  cs.channels.reserve(cs.num_ues);
  cs.snr_matrices.reserve(cs.num_ues);
  for (int k = 0; k < cs.num_ues; ++k) {
    auto marker = next_line("ue marker");
    if (marker.size() != 2 || marker[0] != "ue" || std::stoi(marker[1]) != k)
      throw std::runtime_error("load_channel_set: malformed UE block marker");
    Cvec h(cs.num_antennas);
    for (int a = 0; a < cs.num_antennas; ++a) {
      auto parts = next_line("channel entry");
      if (parts.size() != 2)
        throw std::runtime_error("load_channel_set: malformed channel entry");
      h(a) = Cplx(std::stod(parts[0]), std::stod(parts[1]));
    }
    if (!(cs.noise_powers(k) > 0.0))
      throw std::runtime_error("load_channel_set: noise powers must be positive");
    Cmat hk = (h * h.adjoint()) / cs.noise_powers(k);
    cs.channels.push_back(std::move(h));
    cs.snr_matrices.emplace_back(symmetrize(hk));
  }
  return cs;
}

ChannelSet load_channel_set(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("load_channel_set: cannot open " + path);
  return load_channel_set(f);
}

}  // namespace mmfbeam
