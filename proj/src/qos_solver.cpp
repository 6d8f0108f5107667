// SPDX-License-Identifier: Apache-2.0
//
// mmfbeam: max-min fair multicast beamforming via SDP-ADMM
// Copyright (C) 2026 the mmfbeam authors

#include "mmfbeam/qos_solver.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace mmfbeam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<HermitianMatrix> check_channels(const ChannelSet& channels) {
  if (channels.num_ues < 1 || channels.num_antennas < 1)
    throw std::invalid_argument("QosSolver: empty channel set");
  if (static_cast<int>(channels.snr_matrices.size()) != channels.num_ues)
    throw std::invalid_argument("QosSolver: channel set missing SNR matrices");
  return channels.snr_matrices;
}

}  // namespace

QosSolver::QosSolver(const ChannelSet& channels, const QosSolverConfig& config,
                     double power_budget, std::optional<Cmat> warm_w)
    : map_(check_channels(channels)), config_(config) {
  if (!(config.rho > 0.0) || !(config.mu > 0.0))
    throw std::invalid_argument("QosSolver: rho and mu must be positive");
  if (config.inner_iters < 1 || config.max_outer_iters < 1)
    throw std::invalid_argument("QosSolver: iteration counts must be positive");
  if (!(config.eps_dual > 0.0) || !(config.eps_prim > 0.0))
    throw std::invalid_argument("QosSolver: stopping tolerances must be positive");

  const Eigen::Index n = map_.dim();
  const Eigen::Index k = map_.num_ues();

  // mu > 0 makes rho H H^H + mu I positive definite; the factorization is
  // computed once and reused for every inner iteration.
  Rmat normal = config.rho * map_.gram();
  normal.diagonal().array() += config.mu;
  normal_llt_.compute(normal);
  if (normal_llt_.info() != Eigen::Success)
    throw std::runtime_error("QosSolver: factorization of the normal system failed");

  const double diag = power_budget / static_cast<double>(n);
  if (warm_w) {
    if (warm_w->rows() != n || warm_w->cols() != n)
      throw std::invalid_argument("QosSolver: warm start dimension mismatch");
    state_.w = *warm_w;
  } else {
    state_.w = diag * Cmat::Identity(n, n);
  }
  state_.s = diag * Cmat::Identity(n, n);
  state_.y = Rvec::Zero(k);
  state_.z = Rvec::Zero(k);
  state_.g = Rvec::Zero(k);
}

void QosSolver::set_w(const Cmat& w) {
  if (w.rows() != map_.dim() || w.cols() != map_.dim())
    throw std::invalid_argument("QosSolver::set_w: dimension mismatch");
  state_.w = w;
}

void QosSolver::reset_inner_duals() {
  state_.y.setZero();
  state_.z.setZero();
  state_.g.setZero();
}

Rvec QosSolver::solve_normal_system(const Rvec& rhs) const {
  return normal_llt_.solve(rhs);
}

void QosSolver::inner_y_update(const Rvec& b) {
  for (int t = 0; t < config_.inner_iters; ++t) {
    state_.y = normal_llt_.solve(b + config_.mu * (state_.z - state_.g));
    state_.z = (state_.y + state_.g).cwiseMax(0.0);
    state_.g += state_.y - state_.z;
  }
}

QosIterationStats QosSolver::outer_iteration(const Rvec& gamma, const Cmat& lambda) {
  if (gamma.size() != map_.num_ues())
    throw std::invalid_argument("QosSolver: gamma dimension mismatch");

  // b is independent of the inner iterations; computed once per y-update.
  const Rvec b = gamma - config_.rho * map_.apply(state_.s - lambda + state_.w);
  if (config_.reset_inner_each_outer) reset_inner_duals();
  inner_y_update(b);

  const Cmat x = lambda - map_.apply_adjoint(state_.y) - state_.w;
  const PsdSplit split = psd_split(x);
  // S = X_+ and W_new = W + H^H(y) + S - Lambda = S - X = -X_-.
  const double trace_prev = state_.w.trace().real();
  const double trace_new = split.negative_flipped.trace().real();
  const double s_change = (split.positive - state_.s).norm();
  const double s_norm = split.positive.norm();

  QosIterationStats stats;
  stats.trace_w = trace_new;
  stats.dual_residual = trace_new > 0.0 ? std::abs(trace_new - trace_prev) / trace_new : kInf;
  stats.primal_residual = s_norm > 0.0 ? s_change / s_norm : kInf;
  stats.dual_objective = state_.y.dot(gamma);

  state_.s = split.positive;
  state_.w = split.negative_flipped;
  return stats;
}

QosSolution QosSolver::solve(const Rvec& gamma, const PenaltyMatrix& lambda) {
  if ((gamma.array() < 0.0).any())
    throw std::invalid_argument("QosSolver::solve: gamma must be componentwise nonnegative");
  const Cmat lam = lambda.assembled();
  if (lam.rows() != map_.dim())
    throw std::invalid_argument("QosSolver::solve: penalty dimension mismatch");

  QosSolution sol;
  QosIterationStats stats;
  int it = 0;
  for (it = 1; it <= config_.max_outer_iters; ++it) {
    stats = outer_iteration(gamma, lam);
    if (observer_) observer_(it, state_, stats);
    if (trace_) {
      *trace_ << it << ',' << stats.dual_residual << ',' << stats.primal_residual << ','
              << stats.trace_w << ',' << stats.dual_objective << '\n';
    }
    if (stats.dual_residual < config_.eps_dual && stats.primal_residual < config_.eps_prim) {
      sol.converged = true;
      break;
    }
  }
  sol.outer_iters_used = std::min(it, config_.max_outer_iters);
  sol.w = state_.w;
  sol.objective_trace = state_.w.trace().real();
  sol.dual_objective = state_.y.dot(gamma);
  sol.final_dual_residual = stats.dual_residual;
  sol.final_primal_residual = stats.primal_residual;
  return sol;
}

QosSolution QosSolver::solve(double gamma_common, const PenaltyMatrix& lambda) {
  return solve(Rvec::Constant(map_.num_ues(), gamma_common), lambda);
}

QosSolution solve_qos(const ChannelSet& channels, const Rvec& gamma, const PenaltyMatrix& lambda,
                      const QosSolverConfig& config, std::optional<Cmat> warm_w,
                      double power_budget) {
  QosSolver solver(channels, config, power_budget, std::move(warm_w));
  return solver.solve(gamma, lambda);
}

Rvec snr_of(const Cmat& w, const ChannelSet& channels) {
  MeasurementMap map(channels.snr_matrices);
  Rvec snr = map.apply(w);
  for (Eigen::Index k = 0; k < snr.size(); ++k) {
    if (snr(k) < -1e-9)
      throw std::runtime_error("snr_of: negative SNR indicates a corrupted precoder");
    if (snr(k) < 0.0) snr(k) = 0.0;
  }
  return snr;
}

Rvec se_of(const Rvec& snr) {
  return (1.0 + snr.array()).log() / std::log(2.0);
}

}  // namespace mmfbeam
