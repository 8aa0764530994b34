#pragma once

#include "mnpf/potential.hpp"
#include "mnpf/solver.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace mnpf {

/// Explicit-Euler discretization of the continuous-time best-response flow
///   d/dtau pi_i^tau(s) = gamma_weight(s) (br_i(s; pi_i, mixed opponents) - pi_i^tau(s)),
/// where br_i is the one-stage deviation against the exact Q of the current
/// profile with opponents mixed toward uniform by theta.
struct FlowConfig {
  double h = 0.05;      // Euler step; h * gamma_weight(s) must be <= 1
  double theta = 0.0;   // opponent exploration mixing inside the inclusion
  double eta = 1.0;     // lower bound on the per-state rate weights
  Vec gamma_weights;    // per state, in [eta, 1]; empty = all ones
  double horizon = 0.0; // in flow time tau
  TieRule tie_rule = TieRule::lowest_index;
  std::vector<double> event_deltas;  // NE(delta) entry/exit tracking
  bool check_invariants = true;
};

struct FlowSample {
  double tau = 0.0;
  PolicyProfile profile;
  double phi_mu = std::numeric_limits<double>::quiet_NaN();
  double nash_gap = 0.0;
};

struct NeEvent {
  double tau = 0.0;
  double delta = 0.0;
  bool entered = false;  // false = exited
};

struct FlowLog {
  std::vector<FlowSample> samples;
  std::vector<NeEvent> events;
  std::int64_t violation_count = 0;
  std::vector<std::string> violations;
};

// One Euler step from `profile`; preserves the simplex exactly (convex
// combination). Throws if h * gamma_weight(s) exceeds 1.
PolicyProfile flow_step(const MarkovGame& game, const PolicyProfile& profile,
                        const FlowConfig& config);

// Integrates the flow over [0, horizon], logging the profile, Phi(mu, .)
// when a potential is attached, the Nash gap, and NE(delta) events.
FlowLog run_flow(const MarkovGame& game, const PolicyProfile& start,
                 const FlowConfig& config, const Potential* phi = nullptr,
                 const SolverOptions& opts = {});

struct PhiDecayViolation {
  double tau = 0.0;
  double delta_phi = 0.0;
  double gap = 0.0;
};

struct PhiDecayReport {
  double gap_threshold = 0.0;
  double per_step_slack = 0.0;
  std::int64_t intervals_checked = 0;
  std::vector<PhiDecayViolation> violations;
  bool pass = true;
};

// Scans consecutive log samples: wherever the Nash gap exceeds
// `gap_threshold`, the Phi(mu, .) series must not decrease by more than
// `per_step_slack` across the step. Throws if the log carries no Phi series.
PhiDecayReport check_phi_decay(const FlowLog& log, double gap_threshold,
                               double per_step_slack = 1e-6);

/// Constants of the decay analysis for one game:
///   D = 1/(1-gamma) sup_pi max_s d_mu^pi(s)/mu(s)   (bracketed below/above)
///   Theta = D N sqrt(2|S|) / eta
/// d_lower maximizes the ratio statistic over sampled profiles and, when
/// enumerable, all deterministic profiles; d_upper = 1/((1-gamma) min_s mu(s)).
struct TheoremConstants {
  double d_lower = 0.0;
  double d_upper = 0.0;
  double chosen_d = 0.0;  // defaults to the conservative d_upper
  double big_theta = 0.0;
  double theta_max = 0.0;
  bool theta_clipped = false;
  double lambda = 0.0;
  double eta = 1.0;
  bool mu_has_zero = false;  // d_upper undefined (reported as +inf)
  std::int64_t policies_checked = 0;
  bool enumerated_all = false;
};

TheoremConstants theorem_constants(const MarkovGame& game, double eta, double lambda,
                                   long policy_samples, std::uint64_t seed);

/// Grid estimate of Gamma(delta) = max over delta-equilibria of the distance
/// to the exact equilibrium set, and the minimum pairwise distance d* between
/// the listed equilibria (+inf when only one is given).
struct GammaReport {
  std::vector<double> deltas;
  std::vector<double> gamma_hat;        // per delta; lower bound at mesh resolution
  std::vector<long> qualifying_points;  // grid points with gap <= delta
  double d_star = std::numeric_limits<double>::infinity();
  double spacing = 0.0;
  long grid_size = 0;
};

GammaReport gamma_of_delta(const MarkovGame& game, const std::vector<double>& deltas,
                           const std::vector<PolicyProfile>& ne_zero,
                           const std::vector<PolicyProfile>& grid, double spacing,
                           const SolverOptions& opts = {});

}  // namespace mnpf
