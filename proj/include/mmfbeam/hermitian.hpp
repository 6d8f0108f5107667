// SPDX-License-Identifier: Apache-2.0
//
// mmfbeam: max-min fair multicast beamforming via SDP-ADMM
// Copyright (C) 2026 the mmfbeam authors

#ifndef MMFBEAM_HERMITIAN_HPP
#define MMFBEAM_HERMITIAN_HPP

#include <Eigen/Dense>
#include <complex>
#include <utility>

namespace mmfbeam {

using Cplx = std::complex<double>;
using Cmat = Eigen::MatrixXcd;
using Cvec = Eigen::VectorXcd;
using Rmat = Eigen::MatrixXd;
using Rvec = Eigen::VectorXd;

/// N x N complex matrix with A = A^H enforced on construction: the input must
/// be Hermitian to within a relative tolerance, and is then symmetrized
/// exactly as (A + A^H)/2.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const Cmat& a, double rel_tol = 1e-10);

  static HermitianMatrix identity(Eigen::Index n);
  static HermitianMatrix zero(Eigen::Index n);

  Eigen::Index dim() const { return m_.rows(); }
  const Cmat& mat() const { return m_; }
  operator const Cmat&() const { return m_; }

 private:
  Cmat m_;
};

/// Eigendecomposition of a Hermitian matrix. Eigenvalues sorted descending;
/// eigenvector columns are unit norm with the global phase fixed so the
/// largest-magnitude component is real nonnegative.
struct EigenDecomposition {
  Rvec eigenvalues;
  Cmat eigenvectors;
};

EigenDecomposition eig_hermitian(const Cmat& a);

/// Positive and flipped-sign negative spectral parts of a Hermitian matrix:
/// x = positive - negative_flipped, both PSD.
struct PsdSplit {
  Cmat positive;
  Cmat negative_flipped;
};

PsdSplit psd_split(const Cmat& x);

/// Nearest PSD matrix in Frobenius norm (eigenvalue clipping at zero).
/// Throws std::invalid_argument on non-finite entries.
Cmat psd_project(const Cmat& x);

/// Number of eigenvalues >= rel_threshold * lambda_max (inclusive boundary).
/// Returns 0 for the zero matrix. Input must be PSD up to projection
/// tolerance; rel_threshold in (0, 1).
int numerical_rank(const Cmat& w, double rel_threshold);

/// (lambda_2, u_2) of a Hermitian matrix with dim >= 2. When lambda_1 equals
/// lambda_2 any unit vector of the shared eigenspace orthogonal to the
/// returned u_1 may be produced; the ordering tie-break follows the
/// underlying dense solver.
std::pair<double, Cvec> second_eigpair(const Cmat& w);

bool is_hermitian(const Cmat& a, double rel_tol = 1e-10);

/// (A + A^H)/2.
Cmat symmetrize(const Cmat& a);

}  // namespace mmfbeam

#endif  // MMFBEAM_HERMITIAN_HPP
