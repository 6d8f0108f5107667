// SPDX-License-Identifier: Apache-2.0
//
// mmfbeam: max-min fair multicast beamforming via SDP-ADMM
// Copyright (C) 2026 the mmfbeam authors

#include "mmfbeam/brute_force.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace mmfbeam {

namespace {

// Unit beamformer from angular parameters. First component real nonnegative:
// amplitudes come from a spherical parameterization of the first octant,
// trailing components carry free phases.
Cvec unit_beamformer(int n, const std::vector<double>& params) {
  Cvec w(n);
  if (n == 2) {
    const double theta = params[0], phi = params[1];
    w(0) = std::cos(theta);
    w(1) = std::sin(theta) * Cplx(std::cos(phi), std::sin(phi));
  } else {
    const double t1 = params[0], t2 = params[1], p1 = params[2], p2 = params[3];
    w(0) = std::cos(t1);
    w(1) = std::sin(t1) * std::cos(t2) * Cplx(std::cos(p1), std::sin(p1));
    w(2) = std::sin(t1) * std::sin(t2) * Cplx(std::cos(p2), std::sin(p2));
  }
  return w;
}

double min_snr_of(const ChannelSet& cs, const Cvec& w_full) {
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < cs.num_ues; ++k) {
    const double v = std::norm(cs.channels[k].dot(w_full)) / cs.noise_powers(k);
    worst = std::min(worst, v);
  }
  return worst;
}

struct Objective {
  const ChannelSet& cs;
  double power;
  int n;
  double eval(const std::vector<double>& params) const {
    const Cvec w = std::sqrt(power) * unit_beamformer(n, params);
    return min_snr_of(cs, w);
  }
};

// Golden-section maximization of a single coordinate on [lo, hi].
double golden_refine(const Objective& obj, std::vector<double> params, int coord,
                     double lo, double hi) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  params[coord] = x1;
  double f1 = obj.eval(params);
  params[coord] = x2;
  double f2 = obj.eval(params);
  for (int i = 0; i < 40; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      params[coord] = x2;
      f2 = obj.eval(params);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      params[coord] = x1;
      f1 = obj.eval(params);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

namespace detail {

BruteForceResult brute_force_mmf_impl(const ChannelSet& cs, double power_budget,
                                      int res) {
  const int n = cs.num_antennas;
  if (n != 2 && n != 3)
    throw std::invalid_argument("brute_force_mmf: only N in {2, 3} is supported");
  if (res < 2) throw std::invalid_argument("brute_force_mmf: resolution too small");

  const double half_pi = 0.5 * M_PI;
  const double two_pi = 2.0 * M_PI;
  const Objective obj{cs, power_budget, n};

  std::vector<double> best_params;
  double best = -1.0;

  if (n == 2) {
    // Per-theta constants let the phi sweep run on scalars:
    // |A + B e^{j phi}|^2 = |A|^2 + |B|^2 + 2 Re(conj(A) B e^{j phi}).
    std::vector<double> cos_p(res), sin_p(res);
    for (int j = 0; j < res; ++j) {
      const double phi = two_pi * j / res;
      cos_p[j] = std::cos(phi);
      sin_p[j] = std::sin(phi);
    }
    const int k_total = cs.num_ues;
    std::vector<double> base(k_total), cre(k_total), cim(k_total);
    for (int i = 0; i < res; ++i) {
      const double theta = half_pi * i / (res - 1);
      const double ct = std::cos(theta), st = std::sin(theta);
      for (int k = 0; k < k_total; ++k) {
        const Cplx a = std::conj(cs.channels[k](0)) * ct;
        const Cplx b = std::conj(cs.channels[k](1)) * st;
        const Cplx c = std::conj(a) * b;
        base[k] = (std::norm(a) + std::norm(b)) * power_budget / cs.noise_powers(k);
        cre[k] = 2.0 * c.real() * power_budget / cs.noise_powers(k);
        cim[k] = 2.0 * c.imag() * power_budget / cs.noise_powers(k);
      }
      for (int j = 0; j < res; ++j) {
        double worst = std::numeric_limits<double>::infinity();
        for (int k = 0; k < k_total; ++k) {
          const double v = base[k] + cre[k] * cos_p[j] - cim[k] * sin_p[j];
          if (v < worst) worst = v;
        }
        if (worst > best) {
          best = worst;
          best_params = {half_pi * i / (res - 1), two_pi * j / res};
        }
      }
    }
  } else {
    for (int i1 = 0; i1 < res; ++i1) {
      const double t1 = half_pi * i1 / (res - 1);
      for (int i2 = 0; i2 < res; ++i2) {
        const double t2 = half_pi * i2 / (res - 1);
        for (int j1 = 0; j1 < res; ++j1) {
          const double p1 = two_pi * j1 / res;
          for (int j2 = 0; j2 < res; ++j2) {
            const double p2 = two_pi * j2 / res;
            const double v = obj.eval({t1, t2, p1, p2});
            if (v > best) {
              best = v;
              best_params = {t1, t2, p1, p2};
            }
          }
        }
      }
    }
  }

  // One polish sweep: golden-section per coordinate within +- one grid cell.
  const double dt = half_pi / (res - 1);
  const double dp = two_pi / res;
  const int n_params = n == 2 ? 2 : 4;
  const int n_amp = n == 2 ? 1 : 2;
  for (int c = 0; c < n_params; ++c) {
    const double span = c < n_amp ? dt : dp;
    const double lo = best_params[c] - span;
    const double hi = best_params[c] + span;
    best_params[c] = golden_refine(obj, best_params, c, lo, hi);
  }

  BruteForceResult out;
  out.beamformer = std::sqrt(power_budget) * unit_beamformer(n, best_params);
  out.min_snr = min_snr_of(cs, out.beamformer);
  out.min_se = std::log2(1.0 + out.min_snr);
  return out;
}

}  // namespace detail

BruteForceResult brute_force_mmf(const ChannelSet& channels, double power_budget,
                                 int grid_resolution) {
  if (channels.num_antennas > 3)
    throw std::invalid_argument("brute_force_mmf: search space too large for N > 3");
  if (grid_resolution < 500)
    throw std::invalid_argument("brute_force_mmf: grid_resolution must be >= 500");
  return detail::brute_force_mmf_impl(channels, power_budget, grid_resolution);
}

}  // namespace mmfbeam
