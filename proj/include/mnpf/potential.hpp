#pragma once

#include "mnpf/solver.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace mnpf {

/// A bounded function Phi(s, pi) over states and policy profiles. A potential
/// with closeness parameter kappa changes under any unilateral deviation
/// pi_i -> pi_i' by the deviating player's own value change, up to
/// kappa * ||pi_i' - pi_i||_2, uniformly over states:
///
///   |(Phi(s, pi_i', pi_{-i}) - Phi(s, pi)) - (V_i(s, pi_i', pi_{-i}) - V_i(s, pi))|
///       <= kappa * ||pi_i' - pi_i||_2.
///
/// kappa = 0 is the exact (identical-interest) potential case.
struct Potential {
  enum class Kind { zero, identical_interest, custom };

  Kind kind = Kind::custom;
  double bound = 0.0;  // declared sup over (s, pi) of |Phi(s, pi)|
  std::function<Vec(const MarkovGame&, const PolicyProfile&)> eval_states;

  double eval_state(const MarkovGame& game, const PolicyProfile& profile,
                    int s) const {
    return eval_states(game, profile)[s];
  }

  // mu-weighted aggregate Phi(mu, pi) = sum_s mu(s) Phi(s, pi).
  double eval_mu(const MarkovGame& game, const PolicyProfile& profile) const {
    return game.mu.dot(eval_states(game, profile));
  }
};

struct KappaWitness {
  int player = 0;
  int state = 0;
  PolicyProfile base;
  Mat deviated;  // player's alternative policy
  double ratio = 0.0;
};

/// Closeness estimate for a potential. kappa_lower is the largest sampled
/// deviation ratio (a sound lower bound on the minimal valid kappa);
/// certified_upper is present only for kinds with an analytic certificate.
struct KappaEstimate {
  double kappa_lower = 0.0;
  std::optional<double> certified_upper;
  long num_samples = 0;
  std::optional<KappaWitness> worst;
};

struct CertifiedPotential {
  Potential phi;
  KappaEstimate kappa;
};

// Phi == 0, which is a valid potential for every game with closeness
// parameter r_max / (1-gamma)^2.
CertifiedPotential zero_potential(const MarkovGame& game);

// Requires identical reward tables across players (checked entrywise;
// throws GameError naming the first mismatch). Phi(s, pi) is the common
// value function, an exact potential: certified kappa = 0.
CertifiedPotential identical_interest_potential(const MarkovGame& game);

// Samples unilateral deviations (player, state, profiles drawn from flat
// Dirichlet rows) and returns the largest ratio
// |dPhi(s) - dV_i(s)| / ||pi_i' - pi_i||_2 with its witness. Degenerate
// draws (deviation norm <= 1e-8) are resampled.
KappaEstimate estimate_kappa(const MarkovGame& game, const Potential& phi,
                             long num_samples, std::uint64_t seed);

// A kappa-potential game is an alpha-potential game with
// alpha <= kappa * sqrt(2 |S|).
double alpha_from_kappa(double kappa, int num_states);

// Per-state optimum of the common value over joint policies (value iteration
// on the joint-action MDP). Requires identical rewards.
Vec joint_optimum_values(const MarkovGame& game, const SolverOptions& opts = {});

/// Oracle supplying sup_pi Phi(s, pi) per state. `exact` is available for
/// the zero and identical-interest kinds; `grid` scans a policy mesh and
/// yields a lower bound on the sup.
struct MaximizerOracle {
  enum class Kind { exact, grid };
  Kind kind = Kind::exact;
  double grid_spacing = 0.25;
};

struct MaximizerCheckReport {
  Vec sup_phi;      // per state
  Vec phi_at_star;  // per state
  double epsilon = 0.0;
  double max_shortfall = 0.0;  // max_s (sup_phi - phi_at_star)
  bool hypothesis_holds = false;
  std::vector<int> violating_states;
  double implied_bound = 0.0;  // kappa sqrt(2|S|) + epsilon
  double measured_gap = 0.0;   // nash_gap(pi*)
  bool oracle_exact = false;
  bool bound_checked = false;  // hypothesis held under an exact oracle
  bool bound_holds = false;
};

// Checks whether pi* is an epsilon-approximate maximizer of Phi(s, .) in
// every state; when it is (under an exact oracle), its Nash gap must be at
// most kappa sqrt(2|S|) + epsilon.
MaximizerCheckReport check_approx_maximizer(const MarkovGame& game,
                                            const Potential& phi, double kappa,
                                            const PolicyProfile& pi_star, double epsilon,
                                            const MaximizerOracle& oracle,
                                            const SolverOptions& opts = {});

struct DerivativeSample {
  double h = 0.0;
  double d_phi = 0.0;    // central difference of Phi(mu, .) along the direction
  double d_value = 0.0;  // same for V_i(mu, .)
  double gap = 0.0;
  double slack = 0.0;  // finite-difference truncation allowance
  bool pass = false;
};

struct DerivativeCheckReport {
  std::vector<DerivativeSample> samples;
  double direction_norm = 0.0;
  double kappa_bound = 0.0;  // kappa * ||v||_2
  double extrapolated_d_phi = 0.0;
  double extrapolated_d_value = 0.0;
  double extrapolated_gap = 0.0;
  bool pass = false;
};

// Central finite differences of Phi(mu, .) and V_i(mu, .) along a per-state
// zero-sum direction for `player`. The gap must stay within
// kappa ||v|| plus an O(h) slack of 10 h ||v|| r_max / (1-gamma)^3.
// Throws if pi_i +- h v leaves the simplex for some h.
DerivativeCheckReport directional_derivative_check(
    const MarkovGame& game, const Potential& phi, double kappa, int player,
    const PolicyProfile& profile, const Mat& direction,
    const std::vector<double>& h_list = {1e-2, 1e-3, 1e-4});

}  // namespace mnpf
