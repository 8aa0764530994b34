#include "mnpf/potential.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mnpf {

namespace {

void require_identical_rewards(const MarkovGame& game) {
  for (int i = 1; i < game.num_players; ++i) {
    for (int s = 0; s < game.num_states; ++s) {
      for (int a = 0; a < game.joint.size(); ++a) {
        if (game.rewards[i](s, a) != game.rewards[0](s, a))
          throw GameError("rewards differ between players 0 and " + std::to_string(i) +
                          " at (s=" + std::to_string(s) + ", a=" + std::to_string(a) +
                          ")");
      }
    }
  }
}

}  // namespace

CertifiedPotential zero_potential(const MarkovGame& game) {
  CertifiedPotential cert;
  cert.phi.kind = Potential::Kind::zero;
  cert.phi.bound = 0.0;
  cert.phi.eval_states = [](const MarkovGame& g, const PolicyProfile&) {
    return Vec::Zero(g.num_states).eval();
  };
  cert.kappa.certified_upper =
      game.r_max / ((1.0 - game.gamma) * (1.0 - game.gamma));
  return cert;
}

CertifiedPotential identical_interest_potential(const MarkovGame& game) {
  require_identical_rewards(game);
  CertifiedPotential cert;
  cert.phi.kind = Potential::Kind::identical_interest;
  cert.phi.bound = game.value_bound();
  cert.phi.eval_states = [](const MarkovGame& g, const PolicyProfile& p) {
    return player_state_values(g, p, 0);
  };
  cert.kappa.certified_upper = 0.0;
  return cert;
}

KappaEstimate estimate_kappa(const MarkovGame& game, const Potential& phi,
                             long num_samples, std::uint64_t seed) {
  if (num_samples < 1) throw std::invalid_argument("num_samples must be >= 1");
  Rng rng(seed);
  KappaEstimate estimate;
  for (long k = 0; k < num_samples; ++k) {
    const int player = rng.uniform_int(game.num_players);
    const int state = rng.uniform_int(game.num_states);

    PolicyProfile base = random_policy(game, rng);
    Mat deviated(game.num_states, game.num_actions[player]);
    double dist = 0.0;
    do {
      for (int s = 0; s < game.num_states; ++s)
        deviated.row(s) = rng.dirichlet(game.num_actions[player]).transpose();
      dist = (deviated - base.pi[player]).norm();
    } while (dist <= 1e-8);

    PolicyProfile alt = base;
    alt.pi[player] = deviated;

    const double d_phi = phi.eval_state(game, alt, state) -
                         phi.eval_state(game, base, state);
    const double d_value = player_state_values(game, alt, player)[state] -
                           player_state_values(game, base, player)[state];
    const double ratio = std::abs(d_phi - d_value) / dist;

    ++estimate.num_samples;
    if (!estimate.worst || ratio > estimate.kappa_lower) {
      estimate.kappa_lower = ratio;
      estimate.worst = KappaWitness{player, state, base, deviated, ratio};
    }
  }
  return estimate;
}

double alpha_from_kappa(double kappa, int num_states) {
  if (kappa < 0.0) throw std::invalid_argument("kappa must be nonnegative");
  if (num_states < 1) throw std::invalid_argument("state count must be >= 1");
  return kappa * std::sqrt(2.0 * num_states);
}

Vec joint_optimum_values(const MarkovGame& game, const SolverOptions& opts) {
  require_identical_rewards(game);
  const int n = game.num_states;
  const int ja = game.joint.size();
  const double stop =
      game.gamma > 0.0 ? opts.value_tol * (1.0 - game.gamma) / (2.0 * game.gamma)
                       : std::numeric_limits<double>::infinity();
  Vec v = Vec::Zero(n);
  std::vector<int> greedy(n, 0);
  while (true) {
    Vec next(n);
    for (int s = 0; s < n; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < ja; ++a) {
        const double q = game.rewards[0](s, a) +
                         game.gamma * game.transitions.row(game.row(s, a)).dot(v);
        if (q > best) {
          best = q;
          greedy[s] = a;
        }
      }
      next[s] = best;
    }
    const double change = (next - v).cwiseAbs().maxCoeff();
    v = next;
    if (change <= stop) break;
  }
  // Exact value of the greedy joint policy removes the iteration truncation.
  Mat p(n, n);
  Vec r(n);
  for (int s = 0; s < n; ++s) {
    p.row(s) = game.transitions.row(game.row(s, greedy[s]));
    r[s] = game.rewards[0](s, greedy[s]);
  }
  Mat a = Mat::Identity(n, n) - game.gamma * p;
  return a.partialPivLu().solve(r);
}

MaximizerCheckReport check_approx_maximizer(const MarkovGame& game,
                                            const Potential& phi, double kappa,
                                            const PolicyProfile& pi_star, double epsilon,
                                            const MaximizerOracle& oracle,
                                            const SolverOptions& opts) {
  MaximizerCheckReport report;
  report.epsilon = epsilon;

  if (oracle.kind == MaximizerOracle::Kind::exact) {
    switch (phi.kind) {
      case Potential::Kind::zero:
        report.sup_phi = Vec::Zero(game.num_states);
        break;
      case Potential::Kind::identical_interest:
        report.sup_phi = joint_optimum_values(game, opts);
        break;
      case Potential::Kind::custom:
        throw GameError("exact maximizer oracle unavailable for a custom potential");
    }
    report.oracle_exact = true;
  } else {
    const auto grid = simplex_grid(game, oracle.grid_spacing);
    report.sup_phi = Vec::Constant(game.num_states,
                                   -std::numeric_limits<double>::infinity());
    for (const PolicyProfile& point : grid)
      report.sup_phi = report.sup_phi.cwiseMax(phi.eval_states(game, point));
    report.oracle_exact = false;  // grid sup is only a lower bound
  }

  report.phi_at_star = phi.eval_states(game, pi_star);
  report.hypothesis_holds = true;
  for (int s = 0; s < game.num_states; ++s) {
    const double shortfall = report.sup_phi[s] - report.phi_at_star[s];
    report.max_shortfall = std::max(report.max_shortfall, shortfall);
    if (shortfall > epsilon + 1e-9) {
      report.hypothesis_holds = false;
      report.violating_states.push_back(s);
    }
  }

  report.implied_bound = alpha_from_kappa(kappa, game.num_states) + epsilon;
  report.measured_gap = nash_gap(game, pi_star, opts).epsilon;
  report.bound_checked = report.hypothesis_holds && report.oracle_exact;
  report.bound_holds =
      !report.bound_checked || report.measured_gap <= report.implied_bound + 1e-6;
  return report;
}

DerivativeCheckReport directional_derivative_check(
    const MarkovGame& game, const Potential& phi, double kappa, int player,
    const PolicyProfile& profile, const Mat& direction,
    const std::vector<double>& h_list) {
  if (direction.rows() != game.num_states ||
      direction.cols() != game.num_actions[player])
    throw std::invalid_argument("direction shape mismatch");
  for (int s = 0; s < game.num_states; ++s) {
    if (std::abs(direction.row(s).sum()) > 1e-12)
      throw std::invalid_argument("direction must sum to zero per state");
  }

  DerivativeCheckReport report;
  report.direction_norm = direction.norm();
  report.kappa_bound = kappa * report.direction_norm;

  auto shifted = [&](double h) {
    PolicyProfile moved = profile;
    moved.pi[player] += h * direction;
    for (int s = 0; s < game.num_states; ++s) {
      if (moved.pi[player].row(s).minCoeff() < -1e-12)
        throw std::invalid_argument("direction leaves the simplex at step h=" +
                                    std::to_string(h));
    }
    return moved;
  };

  const double slack_rate = 10.0 * report.direction_norm * game.r_max /
                            std::pow(1.0 - game.gamma, 3);
  for (double h : h_list) {
    const PolicyProfile up = shifted(h);
    const PolicyProfile down = shifted(-h);
    DerivativeSample sample;
    sample.h = h;
    sample.d_phi = (phi.eval_mu(game, up) - phi.eval_mu(game, down)) / (2.0 * h);
    sample.d_value = (game.mu.dot(player_state_values(game, up, player)) -
                      game.mu.dot(player_state_values(game, down, player))) /
                     (2.0 * h);
    sample.gap = std::abs(sample.d_phi - sample.d_value);
    sample.slack = slack_rate * h;
    sample.pass = sample.gap <= report.kappa_bound + sample.slack + 1e-12;
    report.samples.push_back(sample);
  }

  // Richardson step from the two smallest h (central differences are O(h^2)).
  if (report.samples.size() >= 2) {
    const auto& s1 = report.samples[report.samples.size() - 2];
    const auto& s2 = report.samples[report.samples.size() - 1];
    const double w = s1.h * s1.h - s2.h * s2.h;
    report.extrapolated_d_phi = (s1.h * s1.h * s2.d_phi - s2.h * s2.h * s1.d_phi) / w;
    report.extrapolated_d_value =
        (s1.h * s1.h * s2.d_value - s2.h * s2.h * s1.d_value) / w;
  } else if (!report.samples.empty()) {
    report.extrapolated_d_phi = report.samples.back().d_phi;
    report.extrapolated_d_value = report.samples.back().d_value;
  }
  report.extrapolated_gap =
      std::abs(report.extrapolated_d_phi - report.extrapolated_d_value);
  report.pass = true;
  for (const auto& sample : report.samples) report.pass = report.pass && sample.pass;
  return report;
}

}  // namespace mnpf
