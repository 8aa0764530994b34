#include "mnpf/flow.hpp"

#include "mnpf/learner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mnpf {

namespace {

Vec rate_weights(const MarkovGame& game, const FlowConfig& config) {
  if (config.gamma_weights.size() == 0) return Vec::Ones(game.num_states);
  if (config.gamma_weights.size() != game.num_states)
    throw std::invalid_argument("rate weight length does not match state count");
  for (int s = 0; s < game.num_states; ++s) {
    const double w = config.gamma_weights[s];
    if (w < config.eta - 1e-12 || w > 1.0 + 1e-12)
      throw std::invalid_argument("rate weight outside [eta, 1] at state " +
                                  std::to_string(s));
  }
  return config.gamma_weights;
}

}  // namespace

PolicyProfile flow_step(const MarkovGame& game, const PolicyProfile& profile,
                        const FlowConfig& config) {
  const Vec weights = rate_weights(game, config);
  for (int s = 0; s < game.num_states; ++s) {
    if (config.h * weights[s] > 1.0 + 1e-12)
      throw std::invalid_argument("h * rate weight exceeds 1 at state " +
                                  std::to_string(s));
  }

  PolicyProfile next = profile;
  for (int i = 0; i < game.num_players; ++i) {
    // Q of the current profile with the opponents theta-mixed; the player's
    // own continuation stays unmixed.
    const PolicyProfile mixed = mix_opponents(game, profile, i, config.theta);
    const Mat q = player_q_values(game, mixed, i);
    for (int s = 0; s < game.num_states; ++s) {
      const Vec br = one_stage_br(q.row(s).transpose(), config.tie_rule);
      next.pi[i].row(s) += config.h * weights[s] *
                           (br.transpose() - profile.pi[i].row(s));
    }
  }
  return next;
}

FlowLog run_flow(const MarkovGame& game, const PolicyProfile& start,
                 const FlowConfig& config, const Potential* phi,
                 const SolverOptions& opts) {
  validate_profile(game, start);
  if (config.h <= 0.0) throw std::invalid_argument("h must be positive");

  FlowLog log;
  const long steps = static_cast<long>(std::ceil(config.horizon / config.h));
  const double speed_bound =
      config.h * 2.0 * game.num_players * std::sqrt(game.num_states) + 1e-12;

  PolicyProfile current = start;
  std::vector<bool> inside(config.event_deltas.size(), false);

  auto log_sample = [&](double tau) {
    FlowSample sample;
    sample.tau = tau;
    sample.profile = current;
    sample.nash_gap = nash_gap(game, current, opts).epsilon;
    if (phi) sample.phi_mu = phi->eval_mu(game, current);
    for (std::size_t k = 0; k < config.event_deltas.size(); ++k) {
      const bool now = sample.nash_gap <= config.event_deltas[k];
      if (now != inside[k]) log.events.push_back({tau, config.event_deltas[k], now});
      inside[k] = now;
    }
    log.samples.push_back(std::move(sample));
  };

  log_sample(0.0);
  for (long k = 1; k <= steps; ++k) {
    PolicyProfile next = flow_step(game, current, config);
    if (config.check_invariants) {
      const double moved = PolicyProfile::distance(next, current);
      bool simplex_ok = true;
      for (int i = 0; i < game.num_players; ++i) {
        for (int s = 0; s < game.num_states; ++s) {
          if (std::abs(next.pi[i].row(s).sum() - 1.0) > 1e-12 ||
              next.pi[i].row(s).minCoeff() < -1e-12)
            simplex_ok = false;
        }
      }
      if (!simplex_ok || moved > speed_bound) {
        ++log.violation_count;
        if (log.violations.size() < 20) {
          std::ostringstream os;
          os << "tau=" << k * config.h
             << (simplex_ok ? ": step exceeds the speed bound" : ": simplex violated");
          log.violations.push_back(os.str());
        }
      }
    }
    current = std::move(next);
    log_sample(k * config.h);
  }
  return log;
}

PhiDecayReport check_phi_decay(const FlowLog& log, double gap_threshold,
                               double per_step_slack) {
  PhiDecayReport report;
  report.gap_threshold = gap_threshold;
  report.per_step_slack = per_step_slack;
  if (log.samples.size() < 2) return report;
  for (const FlowSample& sample : log.samples) {
    if (std::isnan(sample.phi_mu))
      throw std::invalid_argument("flow log carries no potential series");
  }
  for (std::size_t k = 0; k + 1 < log.samples.size(); ++k) {
    const FlowSample& a = log.samples[k];
    const FlowSample& b = log.samples[k + 1];
    if (a.nash_gap <= gap_threshold) continue;  // inside the target set
    ++report.intervals_checked;
    const double delta_phi = b.phi_mu - a.phi_mu;
    if (delta_phi < -per_step_slack) {
      report.violations.push_back({a.tau, delta_phi, a.nash_gap});
    }
  }
  report.pass = report.violations.empty();
  return report;
}

namespace {

double occupancy_ratio(const MarkovGame& game, const PolicyProfile& profile) {
  const Vec d = occupancy(game, profile).d;
  double worst = 0.0;
  for (int s = 0; s < game.num_states; ++s) {
    if (game.mu[s] > 0.0) worst = std::max(worst, d[s] / game.mu[s]);
  }
  return worst / (1.0 - game.gamma);
}

}  // namespace

TheoremConstants theorem_constants(const MarkovGame& game, double eta, double lambda,
                                   long policy_samples, std::uint64_t seed) {
  if (!(eta > 0.0 && eta <= 1.0))
    throw std::invalid_argument("eta must lie in (0, 1]");
  if (lambda <= 0.0) throw std::invalid_argument("lambda must be positive");

  TheoremConstants constants;
  constants.eta = eta;
  constants.lambda = lambda;

  const double mu_min = game.mu.minCoeff();
  constants.mu_has_zero = mu_min == 0.0;
  constants.d_upper = constants.mu_has_zero
                          ? std::numeric_limits<double>::infinity()
                          : 1.0 / ((1.0 - game.gamma) * mu_min);

  // Lower bracket: the ratio statistic over sampled profiles plus, when the
  // count is manageable, every deterministic profile.
  Rng rng(seed);
  constants.d_lower = occupancy_ratio(game, uniform_policy(game));
  for (long k = 0; k < policy_samples; ++k) {
    constants.d_lower =
        std::max(constants.d_lower, occupancy_ratio(game, random_policy(game, rng)));
    ++constants.policies_checked;
  }

  double det_count = 1.0;
  for (int i = 0; i < game.num_players; ++i)
    det_count *= std::pow(static_cast<double>(game.num_actions[i]), game.num_states);
  if (det_count <= 20000.0) {
    std::vector<std::vector<int>> actions(game.num_players,
                                          std::vector<int>(game.num_states, 0));
    while (true) {
      constants.d_lower = std::max(
          constants.d_lower,
          occupancy_ratio(game, deterministic_policy(game, actions)));
      ++constants.policies_checked;
      int i = 0, s = 0;
      bool done = true;
      for (i = 0; i < game.num_players && done; ++i) {
        for (s = 0; s < game.num_states && done; ++s) {
          if (++actions[i][s] < game.num_actions[i]) {
            done = false;
          } else {
            actions[i][s] = 0;
          }
        }
      }
      if (done) break;
    }
    constants.enumerated_all = true;
  }

  constants.chosen_d = constants.mu_has_zero ? constants.d_lower : constants.d_upper;
  constants.big_theta = constants.chosen_d * game.num_players *
                        std::sqrt(2.0 * game.num_states) / eta;
  const ThetaBound bound = theta_bound(game, lambda, constants.chosen_d);
  constants.theta_max = bound.value;
  constants.theta_clipped = bound.clipped;
  return constants;
}

GammaReport gamma_of_delta(const MarkovGame& game, const std::vector<double>& deltas,
                           const std::vector<PolicyProfile>& ne_zero,
                           const std::vector<PolicyProfile>& grid, double spacing,
                           const SolverOptions& opts) {
  if (ne_zero.empty()) throw std::invalid_argument("equilibrium list is empty");
  if (grid.empty()) throw std::invalid_argument("policy grid is empty");

  GammaReport report;
  report.deltas = deltas;
  report.spacing = spacing;
  report.grid_size = static_cast<long>(grid.size());
  for (std::size_t k = 0; k < ne_zero.size(); ++k) {
    for (std::size_t l = k + 1; l < ne_zero.size(); ++l) {
      report.d_star =
          std::min(report.d_star, PolicyProfile::distance(ne_zero[k], ne_zero[l]));
    }
  }

  std::vector<double> gaps(grid.size());
  std::vector<double> dists(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    gaps[g] = nash_gap(game, grid[g], opts).epsilon;
    double nearest = std::numeric_limits<double>::infinity();
    for (const PolicyProfile& star : ne_zero)
      nearest = std::min(nearest, PolicyProfile::distance(grid[g], star));
    dists[g] = nearest;
  }

  for (double delta : deltas) {
    double worst = 0.0;
    long count = 0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      if (gaps[g] <= delta + opts.gap_tol) {
        worst = std::max(worst, dists[g]);
        ++count;
      }
    }
    report.gamma_hat.push_back(worst);
    report.qualifying_points.push_back(count);
  }
  return report;
}

}  // namespace mnpf
