// SPDX-License-Identifier: Apache-2.0
//
// mmfbeam: max-min fair multicast beamforming via SDP-ADMM
// Copyright (C) 2026 the mmfbeam authors

#include "mmfbeam/hermitian.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

#ifdef MMFBEAM_USE_LAPACKE
#include <lapacke.h>
#endif

namespace mmfbeam {

bool is_hermitian(const Cmat& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(1.0, a.norm());
  return (a - a.adjoint()).norm() <= rel_tol * scale;
}

Cmat symmetrize(const Cmat& a) { return 0.5 * (a + a.adjoint()); }

HermitianMatrix::HermitianMatrix(const Cmat& a, double rel_tol) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw std::invalid_argument("HermitianMatrix: matrix must be square with dim >= 1");
  if (!a.allFinite())
    throw std::invalid_argument("HermitianMatrix: non-finite entries");
  if (!is_hermitian(a, rel_tol))
    throw std::invalid_argument("HermitianMatrix: input is not Hermitian within tolerance");
  m_ = symmetrize(a);
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index n) {
  HermitianMatrix h;
  h.m_ = Cmat::Identity(n, n);
  return h;
}

HermitianMatrix HermitianMatrix::zero(Eigen::Index n) {
  HermitianMatrix h;
  h.m_ = Cmat::Zero(n, n);
  return h;
}

namespace {

// Dense Hermitian eigendecomposition, eigenvalues ascending. LAPACK zheevd
// when available (noticeably faster than Eigen's built-in QL for the matrix
// sizes the ADMM loop lives at), Eigen otherwise.
void eig_ascending(const Cmat& a, Rvec& values, Cmat& vectors) {
#ifdef MMFBEAM_USE_LAPACKE
  const lapack_int n = static_cast<lapack_int>(a.rows());
  vectors = a;
  values.resize(n);
  const lapack_int info =
      LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                     reinterpret_cast<lapack_complex_double*>(vectors.data()), n,
                     values.data());
  if (info == 0) return;
  // fall through to the Eigen path on a (rare) LAPACK failure
#endif
  Eigen::SelfAdjointEigenSolver<Cmat> es(a);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eig_ascending: eigensolver failed");
  values = es.eigenvalues();
  vectors = es.eigenvectors();
}

void eigvals_ascending(const Cmat& a, Rvec& values) {
#ifdef MMFBEAM_USE_LAPACKE
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Cmat work = a;
  values.resize(n);
  const lapack_int info =
      LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n,
                     reinterpret_cast<lapack_complex_double*>(work.data()), n,
                     values.data());
  if (info == 0) return;
#endif
  Eigen::SelfAdjointEigenSolver<Cmat> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigvals_ascending: eigensolver failed");
  values = es.eigenvalues();
}

// Multiply each eigenvector column by a unit phase so that its
// largest-magnitude component is real nonnegative. Phase is mathematically
// free; fixing it makes decompositions reproducible.
void normalize_phases(Cmat& vectors) {
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    Eigen::Index imax = 0;
    vectors.col(j).cwiseAbs().maxCoeff(&imax);
    const Cplx v = vectors(imax, j);
    const double mag = std::abs(v);
    if (mag > 0.0) vectors.col(j) *= std::conj(v) / mag;
  }
}

}  // namespace

EigenDecomposition eig_hermitian(const Cmat& a) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("eig_hermitian: matrix must be square");
  if (!a.allFinite())
    throw std::invalid_argument("eig_hermitian: non-finite entries");
  Rvec values;
  Cmat vectors;
  eig_ascending(a, values, vectors);
  EigenDecomposition d;
  d.eigenvalues = values.reverse();
  d.eigenvectors = vectors.rowwise().reverse();
  normalize_phases(d.eigenvectors);
  return d;
}

PsdSplit psd_split(const Cmat& x) {
  if (!x.allFinite())
    throw std::invalid_argument("psd_split: non-finite entries");
  Rvec lam;
  Cmat q;
  eig_ascending(x, lam, q);
  const Eigen::Index n = x.rows();

  Eigen::Index neg = 0;
  while (neg < n && lam(neg) < 0.0) ++neg;
  const Eigen::Index pos_start = neg;
  Eigen::Index pos = 0;
  for (Eigen::Index i = pos_start; i < n; ++i)
    if (lam(i) > 0.0) ++pos;

  PsdSplit out;
  // Reconstruct the smaller spectral side and obtain the other from
  // x = positive - negative_flipped, which keeps the pair exactly consistent
  // with x instead of stacking two reconstruction errors.
  if (neg == 0) {
    out.positive = symmetrize(x);
    out.negative_flipped = Cmat::Zero(n, n);
  } else if (pos == 0) {
    out.negative_flipped = symmetrize(-x);
    out.positive = Cmat::Zero(n, n);
  } else if (neg <= pos) {
    const Cmat b = q.leftCols(neg) * (-lam.head(neg)).cwiseSqrt().asDiagonal();
    out.negative_flipped = symmetrize(b * b.adjoint());
    out.positive = symmetrize(x) + out.negative_flipped;
  } else {
    Cmat b(n, pos);
    Eigen::Index col = 0;
    for (Eigen::Index i = pos_start; i < n; ++i)
      if (lam(i) > 0.0) b.col(col++) = std::sqrt(lam(i)) * q.col(i);
    out.positive = symmetrize(b * b.adjoint());
    out.negative_flipped = out.positive - symmetrize(x);
  }
  return out;
}

Cmat psd_project(const Cmat& x) {
  if (!x.allFinite())
    throw std::invalid_argument("psd_project: non-finite entries");
  return psd_split(x).positive;
}

int numerical_rank(const Cmat& w, double rel_threshold) {
  if (!(rel_threshold > 0.0 && rel_threshold < 1.0))
    throw std::invalid_argument("numerical_rank: rel_threshold must be in (0, 1)");
  if (!w.allFinite())
    throw std::invalid_argument("numerical_rank: non-finite entries");
  Rvec lam;
  eigvals_ascending(w, lam);
  const double lam_max = lam(lam.size() - 1);
  if (lam_max <= 0.0) return 0;
  const double cut = rel_threshold * lam_max;
  int count = 0;
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    if (lam(i) >= cut) ++count;
  return count;
}

std::pair<double, Cvec> second_eigpair(const Cmat& w) {
  if (w.rows() < 2)
    throw std::invalid_argument("second_eigpair: dim must be >= 2");
  EigenDecomposition d = eig_hermitian(w);
  return {d.eigenvalues(1), d.eigenvectors.col(1)};
}

}  // namespace mmfbeam
