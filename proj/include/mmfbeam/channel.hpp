// SPDX-License-Identifier: Apache-2.0
//
// mmfbeam: max-min fair multicast beamforming via SDP-ADMM
// Copyright (C) 2026 the mmfbeam authors

#ifndef MMFBEAM_CHANNEL_HPP
#define MMFBEAM_CHANNEL_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mmfbeam/hermitian.hpp"
#include "mmfbeam/rng.hpp"

namespace mmfbeam {

struct GeometryParams {
  double area_side_m = 750.0;
  int num_antennas = 36;
  int num_ues = 15;
  double min_bs_distance_m = 5.0;
};

/// UE drop over a square service area. The BS sits at the area center with a
/// half-wavelength uniform linear array; UE positions are uniform over the
/// square outside an exclusion disc of radius min_bs_distance.
struct NetworkGeometry {
  double area_side_m = 0.0;
  Eigen::Vector2d bs_position;
  int num_antennas = 0;
  double min_bs_distance_m = 0.0;
  std::vector<Eigen::Vector2d> ue_positions;

  int num_ues() const { return static_cast<int>(ue_positions.size()); }
  double distance(int k) const { return (ue_positions[k] - bs_position).norm(); }
  /// BS -> UE azimuth against the array axis.
  double azimuth(int k) const {
    const Eigen::Vector2d d = ue_positions[k] - bs_position;
    return std::atan2(d.y(), d.x());
  }
};

struct LargeScaleFading {
  Rvec beta_db;    // pathloss + shadowing, per UE
  Rvec shadow_db;  // shadowing component F_k
  Rvec distances;  // d_k in meters
};

struct SpatialCorrelation {
  HermitianMatrix matrix;  // R_k, trace/N equals the average channel gain
  double nominal_angle = 0.0;
  double angular_std = 0.0;
};

/// Per-UE channels plus the derived SNR matrices H_k = h_k h_k^H / sigma_k^2
/// that the solver consumes.
struct ChannelSet {
  int num_antennas = 0;
  int num_ues = 0;
  std::uint64_t seed = 0;
  std::vector<Cvec> channels;
  Rvec noise_powers;
  std::vector<HermitianMatrix> snr_matrices;
};

NetworkGeometry sample_geometry(Rng& rng, const GeometryParams& params);
NetworkGeometry sample_geometry(std::uint64_t seed, const GeometryParams& params);

/// -30.5 - 36.7 log10(d / 1 m); d must be positive.
double pathloss_db(double d_m);

/// Correlated log-normal shadowing in dB: zero mean, covariance
/// 16 * 2^(-delta_ki / 9 m) with delta the UE pair distance. The covariance
/// factorization clips negative eigenvalues at zero if finite precision makes
/// it indefinite.
Rvec sample_shadowing(Rng& rng, const NetworkGeometry& geometry);
Rvec sample_shadowing(std::uint64_t seed, const NetworkGeometry& geometry);

Rmat shadowing_covariance(const NetworkGeometry& geometry);

LargeScaleFading large_scale_fading(const NetworkGeometry& geometry, const Rvec& shadow_db);

/// Gaussian local scattering correlation for a half-wavelength ULA,
/// closed-form small-spread approximation:
///   R(l, m) = beta * exp(j pi (l-m) sin phi) * exp(-(sigma^2/2) (pi (l-m) cos phi)^2),
/// symmetrized and PSD-clipped.
SpatialCorrelation spatial_correlation(double beta_linear, double nominal_angle,
                                       double angular_std, int n);

/// h_k = R_k^(1/2) g_k with g_k standard complex Gaussian; assembles the H_k.
ChannelSet sample_channels(Rng& rng, const std::vector<SpatialCorrelation>& correlations,
                           const Rvec& noise_powers);
ChannelSet sample_channels(std::uint64_t seed, const std::vector<SpatialCorrelation>& correlations,
                           const Rvec& noise_powers);

struct ChannelModelConfig {
  GeometryParams geometry;
  double noise_dbm = -94.0;
  double angular_std_deg = 15.0;
};

double noise_power_watts(double noise_dbm);

/// Full generation pipeline: geometry -> shadowing -> correlation -> fading,
/// drawn from a single seeded stream. Bit-identical output for a given
/// (seed, config).
ChannelSet generate_channel_set(std::uint64_t seed, const ChannelModelConfig& config);

/// Text serialization so solver runs can be replayed without the generator.
/// Header rows carry N, K, seed and the per-UE noise powers; each UE block is
/// N rows of "re,im". Values round-trip exactly.
void save_channel_set(const ChannelSet& cs, std::ostream& out);
void save_channel_set(const ChannelSet& cs, const std::string& path);
ChannelSet load_channel_set(std::istream& in);
ChannelSet load_channel_set(const std::string& path);

}  // namespace mmfbeam

#endif  // MMFBEAM_CHANNEL_HPP
