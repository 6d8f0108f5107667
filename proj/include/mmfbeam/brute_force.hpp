// SPDX-License-Identifier: Apache-2.0
//
// mmfbeam: max-min fair multicast beamforming via SDP-ADMM
// Copyright (C) 2026 the mmfbeam authors

#ifndef MMFBEAM_BRUTE_FORCE_HPP
#define MMFBEAM_BRUTE_FORCE_HPP

#include "mmfbeam/channel.hpp"

namespace mmfbeam {

struct BruteForceResult {
  double min_snr = 0.0;
  double min_se = 0.0;
  Cvec beamformer;
};

/// Exhaustive grid search over the unit-sphere parameterization of the
/// beamformer (global phase fixed: first component real nonnegative), scaled
/// to full power, followed by one coordinate-descent polish pass. N = 2 uses
/// two real parameters, N = 3 four. The grid maximum lower-bounds the true
/// optimum within the grid spacing.
///
/// Supported only for N in {2, 3} with grid_resolution >= 500 per angular
/// dimension; anything else throws.
BruteForceResult brute_force_mmf(const ChannelSet& channels, double power_budget,
                                 int grid_resolution);

namespace detail {
/// Search core without the resolution floor; coarse grids are for tests only.
BruteForceResult brute_force_mmf_impl(const ChannelSet& channels, double power_budget,
                                      int grid_resolution);
}  // namespace detail

}  // namespace mmfbeam

#endif  // MMFBEAM_BRUTE_FORCE_HPP
