// SPDX-License-Identifier: Apache-2.0
//
// mmfbeam: max-min fair multicast beamforming via SDP-ADMM
// Copyright (C) 2026 the mmfbeam authors

#ifndef MMFBEAM_MEASUREMENT_MAP_HPP
#define MMFBEAM_MEASUREMENT_MAP_HPP

#include <vector>

#include "mmfbeam/hermitian.hpp"

namespace mmfbeam {

/// Linear map from Hermitian N x N matrices to R^K built from the per-UE
/// matrices H_k: apply(W)_k = tr(H_k W). The Gram matrix of the vectorized
/// rows (real symmetric PSD) is precomputed once; it is the K x K system
/// matrix of the inner ADMM solve.
class MeasurementMap {
 public:
  explicit MeasurementMap(std::vector<HermitianMatrix> snr_matrices);

  Eigen::Index num_ues() const { return static_cast<Eigen::Index>(mats_.size()); }
  Eigen::Index dim() const { return n_; }

  /// H(W): component k = tr(H_k W). The trace of a product of Hermitian
  /// matrices is real; the imaginary residue is checked against a 1e-9
  /// relative tolerance and then discarded.
  Rvec apply(const Cmat& w) const;

  /// H^H(y) = sum_k y_k H_k.
  Cmat apply_adjoint(const Rvec& y) const;

  const Rmat& gram() const { return gram_; }
  const Cmat& matrix(Eigen::Index k) const { return mats_[k].mat(); }

 private:
  std::vector<HermitianMatrix> mats_;
  Eigen::Index n_ = 0;
  Rmat gram_;
};

}  // namespace mmfbeam

#endif  // MMFBEAM_MEASUREMENT_MAP_HPP
