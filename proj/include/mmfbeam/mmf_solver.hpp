// SPDX-License-Identifier: Apache-2.0
//
// mmfbeam: max-min fair multicast beamforming via SDP-ADMM
// Copyright (C) 2026 the mmfbeam authors

#ifndef MMFBEAM_MMF_SOLVER_HPP
#define MMFBEAM_MMF_SOLVER_HPP

#include <vector>

#include "mmfbeam/qos_solver.hpp"

namespace mmfbeam {

struct MmfConfig {
  double power_budget = 40.0;       // P_T in watts
  double bisection_tol = 0.1;       // epsilon on the gamma interval
  double elimination_kappa = 0.9;   // lower-bound shrink for re-bisection
  double penalty_weight = 5.0;      // c in Lambda = c I + sum zeta_r U_r
  int max_elimination_rounds = 0;   // 0 selects N - 1
  double rank1_threshold = 1e-3;    // lambda_2 / lambda_1 below this is rank 1
  bool reset_duals_each_solve = false;  // zero (y, z, g) before every QoS solve
  bool collect_diagnostics = false;
  QosSolverConfig qos;
};

struct BisectionStep {
  int phase = 0;  // 0 = initial bisection, r >= 1 = elimination round r
  double gamma = 0.0;
  double trace_w = 0.0;
  bool feasible = false;
  int outer_iters = 0;
  bool converged = false;
};

struct RoundDiagnostics {
  int round = 0;
  int rank_before = 0;
  Rvec spectrum_before;  // eigenvalues of W entering the round, descending
  double zeta = 0.0;
  double gamma_lo = 0.0;
  double gamma_up = 0.0;
  // Energy fractions u^H W u / tr(W) measured in this round's solution, for
  // the direction penalized this round and the worst over all rounds so far.
  double direction_carry = -1.0;
  double max_prior_carry = -1.0;
};

struct MmfDiagnostics {
  std::vector<BisectionStep> steps;
  std::vector<RoundDiagnostics> rounds;
};

struct MmfResult {
  Cvec beamformer;             // ||w||^2 = P_T (zero only for degenerate channels)
  double minimum_snr = 0.0;    // recomputed from raw channels
  Rvec per_ue_snr;
  Rvec per_ue_se;
  double min_se = 0.0;
  double sdr_upper_bound_se = 0.0;  // relaxation bound from the initial bisection
  double gamma_up_phase1 = 0.0;     // raw surviving upper endpoint of that bisection
  Cmat relaxed_w;              // converged relaxed solution of the initial bisection
  int elimination_rounds = 0;
  long total_outer_iterations = 0;
  int qos_solves = 0;
  int qos_solves_converged = 0;
  bool feasible = false;       // initial bisection found a feasible target
  bool truncated = false;      // round budget exhausted with rank > 1
  double wall_time_seconds = 0.0;
  std::vector<double> per_round_gammas;
  MmfDiagnostics diagnostics;  // populated when collect_diagnostics is set
};

/// min_k P_T ||h_k||^2 / sigma_k^2; zero for an all-zero channel.
double gamma_upper_bound(const ChannelSet& channels, double power_budget);

struct BisectionOutcome {
  bool found = false;   // a feasible midpoint was encountered
  double gamma = 0.0;   // last feasible target
  Cmat w;               // solution at that target
  double gamma_lo = 0.0;
  double gamma_up = 0.0;
  int solves = 0;
  int solves_converged = 0;
  long outer_iterations = 0;
};

/// Bisection over the common SNR target on [lo, up]: a midpoint is feasible
/// when the converged trace stays within the power budget. Runs exactly
/// ceil(log2((up - lo) / tol)) iterations; each solve warm-starts from the
/// previous solution scaled by gamma_c / gamma_prev. gamma_prev persists
/// across calls through the in/out argument (negative means no previous
/// solve yet).
BisectionOutcome bisection_qos(QosSolver& solver, double gamma_lo, double gamma_up,
                               const PenaltyMatrix& lambda, const MmfConfig& config,
                               double* gamma_prev, int phase,
                               std::vector<BisectionStep>* step_log);

/// Appends (lambda_2(W), u_2(W) u_2(W)^H) to the penalty. W must have
/// numerical rank >= 2 at the configured threshold.
void eliminate_round(const Cmat& current_w, PenaltyMatrix& lambda, double rank1_threshold);

/// Algorithm: initial bisection on [0, gamma_up] with Lambda = c I, then
/// successive elimination rounds re-bisecting on [kappa gamma_c, gamma_c]
/// until the solution is numerically rank 1, then rank-1 extraction at full
/// power with all SNRs recomputed from the raw channels.
MmfResult mmf_solve(const ChannelSet& channels, const MmfConfig& config);

}  // namespace mmfbeam

#endif  // MMFBEAM_MMF_SOLVER_HPP
