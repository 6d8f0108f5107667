// SPDX-License-Identifier: Apache-2.0
//
// mmfbeam: max-min fair multicast beamforming via SDP-ADMM
// Copyright (C) 2026 the mmfbeam authors

#ifndef MMFBEAM_PENALTY_HPP
#define MMFBEAM_PENALTY_HPP

#include <vector>

#include "mmfbeam/hermitian.hpp"

namespace mmfbeam {

/// Elimination penalty c I + sum_r zeta_r u_r u_r^H. Terms accumulate across
/// successive-elimination rounds; the assembled matrix is rebuilt from the
/// stored terms on demand so repeated assembly cannot drift.
class PenaltyMatrix {
 public:
  struct Term {
    double zeta;
    Cvec direction;  // unit norm
  };

  PenaltyMatrix(Eigen::Index dim, double base_weight);

  /// Appends a penalized direction; zeta must be nonnegative and u unit norm.
  void add_term(double zeta, const Cvec& u);

  Cmat assembled() const;

  Eigen::Index dim() const { return dim_; }
  double base_weight() const { return base_weight_; }
  const std::vector<Term>& terms() const { return terms_; }

 private:
  Eigen::Index dim_;
  double base_weight_;
  std::vector<Term> terms_;
};

}  // namespace mmfbeam

#endif  // MMFBEAM_PENALTY_HPP
