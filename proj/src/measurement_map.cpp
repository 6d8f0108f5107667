// SPDX-License-Identifier: Apache-2.0
//
// mmfbeam: max-min fair multicast beamforming via SDP-ADMM
// Copyright (C) 2026 the mmfbeam authors

#include "mmfbeam/measurement_map.hpp"

#include <stdexcept>

namespace mmfbeam {

MeasurementMap::MeasurementMap(std::vector<HermitianMatrix> snr_matrices)
    : mats_(std::move(snr_matrices)) {
  if (mats_.empty())
    throw std::invalid_argument("MeasurementMap: need at least one UE matrix");
  n_ = mats_[0].dim();
  for (const auto& m : mats_)
    if (m.dim() != n_)
      throw std::invalid_argument("MeasurementMap: inconsistent matrix dimensions");

  const Eigen::Index k = num_ues();
  gram_.resize(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i; j < k; ++j) {
      // <vec(H_i), vec(H_j)> = tr(H_i H_j), real for Hermitian arguments.
      const Cplx t = mats_[i].mat().conjugate().cwiseProduct(mats_[j].mat()).sum();
      gram_(i, j) = t.real();
      gram_(j, i) = t.real();
    }
  }
}

Rvec MeasurementMap::apply(const Cmat& w) const {
  if (w.rows() != n_ || w.cols() != n_)
    throw std::invalid_argument("MeasurementMap::apply: dimension mismatch");
  Rvec out(num_ues());
  for (Eigen::Index k = 0; k < num_ues(); ++k) {
    const Cplx t = mats_[k].mat().conjugate().cwiseProduct(w).sum();
    if (std::abs(t.imag()) > 1e-9 * std::max(1.0, std::abs(t)))
      throw std::runtime_error("MeasurementMap::apply: non-real measurement value");
    out(k) = t.real();
  }
  return out;
}

Cmat MeasurementMap::apply_adjoint(const Rvec& y) const {
  if (y.size() != num_ues())
    throw std::invalid_argument("MeasurementMap::apply_adjoint: dimension mismatch");
  Cmat out = Cmat::Zero(n_, n_);
  for (Eigen::Index k = 0; k < num_ues(); ++k)
    out.noalias() += y(k) * mats_[k].mat();
  return out;
}

}  // namespace mmfbeam
