// SPDX-License-Identifier: Apache-2.0
//
// mmfbeam: max-min fair multicast beamforming via SDP-ADMM
// Copyright (C) 2026 the mmfbeam authors

#ifndef MMFBEAM_QOS_SOLVER_HPP
#define MMFBEAM_QOS_SOLVER_HPP

#include <Eigen/Cholesky>
#include <functional>
#include <iosfwd>
#include <optional>

#include "mmfbeam/channel.hpp"
#include "mmfbeam/measurement_map.hpp"
#include "mmfbeam/penalty.hpp"

namespace mmfbeam {

struct QosSolverConfig {
  double rho = 1.0;        // outer ADMM penalty
  double mu = 1e5;         // inner ADMM penalty
  int inner_iters = 50;    // fixed inner iteration count T
  double eps_dual = 1e-5;  // relative trace-change stop
  double eps_prim = 1e-4;  // relative S-change stop
  int max_outer_iters = 1000;
  bool reset_inner_each_outer = false;  // ablation: zero (y, z, g) per outer iteration
};

/// ADMM iterates. w is the scaled dual of the dual-SDP equality constraint
/// and converges to the primal precoding covariance; s stays PSD and z stays
/// componentwise nonnegative by construction of their updates.
struct SolverState {
  Cmat w;
  Cmat s;
  Rvec y;
  Rvec z;
  Rvec g;
};

struct QosIterationStats {
  double dual_residual = 0.0;   // |tr(W_i - W_{i-1})| / tr(W_i)
  double primal_residual = 0.0; // ||S_i - S_{i-1}||_F / ||S_i||_F
  double trace_w = 0.0;
  double dual_objective = 0.0;  // y . gamma
};

struct QosSolution {
  Cmat w;
  double objective_trace = 0.0;
  double dual_objective = 0.0;
  int outer_iters_used = 0;
  bool converged = false;
  double final_dual_residual = 0.0;
  double final_primal_residual = 0.0;
};

using IterationObserver =
    std::function<void(int iter, const SolverState& state, const QosIterationStats& stats)>;

/// Dual-SDP nested ADMM for the penalized QoS problem
///   min <Lambda, W>  s.t.  H(W) >= gamma,  W PSD.
/// The K x K normal matrix (rho H H^H + mu I) is factored once at
/// construction; iterate state persists across solve() calls so bisection
/// sweeps warm-start both W and the inner dual variables.
class QosSolver {
 public:
  QosSolver(const ChannelSet& channels, const QosSolverConfig& config, double power_budget,
            std::optional<Cmat> warm_w = std::nullopt);

  /// Runs outer iterations until both stopping conditions hold or the
  /// iteration cap is reached. Non-convergence is reported, not fatal.
  QosSolution solve(const Rvec& gamma, const PenaltyMatrix& lambda);
  QosSolution solve(double gamma_common, const PenaltyMatrix& lambda);

  /// One outer iteration: inner y-update, PSD projection S-update, scaled
  /// dual W-update. Exposed for white-box tests.
  QosIterationStats outer_iteration(const Rvec& gamma, const Cmat& lambda);

  /// T fixed inner iterations over (y, z, g) for a precomputed b-term.
  void inner_y_update(const Rvec& b);

  /// Applies (rho H H^H + mu I)^-1 through the cached factorization.
  Rvec solve_normal_system(const Rvec& rhs) const;

  void scale_w(double factor) { state_.w *= factor; }
  void set_w(const Cmat& w);
  void reset_inner_duals();

  SolverState& state() { return state_; }
  const SolverState& state() const { return state_; }
  const MeasurementMap& map() const { return map_; }
  const QosSolverConfig& config() const { return config_; }

  void set_observer(IterationObserver observer) { observer_ = std::move(observer); }
  /// Per-iteration CSV trace (iter, residuals, tr(W), dual objective).
  void set_trace(std::ostream* trace) { trace_ = trace; }

 private:
  MeasurementMap map_;
  QosSolverConfig config_;
  Eigen::LLT<Rmat> normal_llt_;
  SolverState state_;
  IterationObserver observer_;
  std::ostream* trace_ = nullptr;
};

/// One-shot convenience wrapper around QosSolver.
QosSolution solve_qos(const ChannelSet& channels, const Rvec& gamma, const PenaltyMatrix& lambda,
                      const QosSolverConfig& config, std::optional<Cmat> warm_w,
                      double power_budget);

/// Per-UE SNR of a precoding covariance: snr_k = tr(H_k W). Values below
/// -1e-9 indicate numerical corruption and throw; small negatives clamp to 0.
Rvec snr_of(const Cmat& w, const ChannelSet& channels);

/// Componentwise spectral efficiency log2(1 + snr).
Rvec se_of(const Rvec& snr);

}  // namespace mmfbeam

#endif  // MMFBEAM_QOS_SOLVER_HPP
