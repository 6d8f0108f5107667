// SPDX-License-Identifier: Apache-2.0
//
// mmfbeam: max-min fair multicast beamforming via SDP-ADMM
// Copyright (C) 2026 the mmfbeam authors

#include "mmfbeam/penalty.hpp"

#include <cmath>
#include <stdexcept>

namespace mmfbeam {

PenaltyMatrix::PenaltyMatrix(Eigen::Index dim, double base_weight)
    : dim_(dim), base_weight_(base_weight) {
  if (dim < 1) throw std::invalid_argument("PenaltyMatrix: dim must be >= 1");
  if (!(base_weight >= 1.0))
    throw std::invalid_argument("PenaltyMatrix: base weight must be >= 1");
}

void PenaltyMatrix::add_term(double zeta, const Cvec& u) {
  if (!(zeta >= 0.0)) throw std::invalid_argument("PenaltyMatrix: zeta must be >= 0");
  if (u.size() != dim_) throw std::invalid_argument("PenaltyMatrix: direction dim mismatch");
  if (std::abs(u.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("PenaltyMatrix: direction must be unit norm");
  terms_.push_back({zeta, u});
}

Cmat PenaltyMatrix::assembled() const {
  Cmat lam = base_weight_ * Cmat::Identity(dim_, dim_);
  for (const Term& t : terms_)
    lam.noalias() += t.zeta * t.direction * t.direction.adjoint();
  return symmetrize(lam);
}

}  // namespace mmfbeam
