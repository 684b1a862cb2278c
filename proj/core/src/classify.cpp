#include "scorebounds/classify.hpp"

#include <array>
#include <cmath>

namespace scorebounds {

namespace {

void check_interval(const BoundInterval& interval) {
  if (!interval.feasible) {
    throw validation_error("no classification possible: empty feasible set");
  }
  if (!(interval.lo <= interval.hi)) {
    throw validation_error("malformed interval: lower exceeds upper");
  }
}

}  // namespace

Decision classify_abstain(const BoundInterval& interval) {
  check_interval(interval);
  Decision d;
  if (interval.lo > 0.0) {
    d.outcome = Action::One;
  } else if (interval.hi < 0.0) {
    d.outcome = Action::Zero;
  } else {
    d.outcome = Action::Abstain;
  }
  return d;
}

Decision classify_random(const BoundInterval& interval, int r_bit) {
  check_interval(interval);
  if (r_bit != 0 && r_bit != 1) {
    throw validation_error("randomization bit must be 0 or 1");
  }
  Decision d;
  if (interval.lo > 0.0) {
    d.outcome = Action::One;
  } else if (interval.hi < 0.0) {
    d.outcome = Action::Zero;
  } else {
    d.outcome = r_bit ? Action::One : Action::Zero;
    d.draw_used = r_bit;
  }
  return d;
}

double worst_case_loss(Action action, const BoundInterval& interval,
                       const CostTriple& costs) {
  check_interval(interval);
  if (action == Action::Abstain) return costs.c_abstain;
  const bool pos_admissible = interval.hi >= 0.0;
  const bool neg_admissible = interval.lo <= 0.0;
  const bool match_pos = action == Action::One;
  double worst = -1.0;
  if (pos_admissible) {
    worst = std::max(worst, match_pos ? costs.c_base : costs.c_wrong);
  }
  if (neg_admissible) {
    worst = std::max(worst, match_pos ? costs.c_wrong : costs.c_base);
  }
  return worst;
}

Action minimax_action(const BoundInterval& interval, const CostTriple& costs) {
  if (!(costs.c_base >= 0.0 && costs.c_base < costs.c_abstain &&
        costs.c_abstain < costs.c_wrong)) {
    throw validation_error(
        "cost ordering C_b < C_abstain < C is required for the "
        "abstention rule to be minimax");
  }
  constexpr std::array<Action, 3> order = {Action::Abstain, Action::One,
                                           Action::Zero};
  Action best = Action::Abstain;
  double best_loss = worst_case_loss(Action::Abstain, interval, costs);
  for (Action a : order) {
    const double l = worst_case_loss(a, interval, costs);
    if (l < best_loss) {
      best = a;
      best_loss = l;
    }
  }
  return best;
}

double max_regret(double p, const CostTriple& costs) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw validation_error("classification probability must lie in [0,1]");
  }
  if (!(costs.c_base >= 0.0 && costs.c_base < costs.c_wrong)) {
    throw validation_error("cost ordering C_b < C is required");
  }
  return (costs.c_wrong - costs.c_base) * std::max(p, 1.0 - p);
}

double minimax_regret_prob(const CostTriple& costs) {
  double best_p = 0.0;
  double best = max_regret(0.0, costs);
  for (int i = 1; i <= 10000; ++i) {
    const double p = static_cast<double>(i) / 10000.0;
    const double r = max_regret(p, costs);
    if (r < best) {
      best = r;
      best_p = p;
    }
  }
  return best_p;
}

double misclassification_bound(double alpha, double p_lo_err, double p_up_err,
                               double m_l, double m_u, double eps,
                               bool randomized, bool random_design,
                               bool independent_device, double p_straddle) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw validation_error("alpha must lie strictly in (0,1)");
  }
  if (p_lo_err < 0.0 || p_up_err < 0.0 || m_l < 0.0 || m_u < 0.0 ||
      eps < 0.0 || p_straddle < 0.0) {
    throw validation_error("misclassification-bound inputs must be "
                           "nonnegative");
  }
  const double k = randomized ? 0.5 : 1.0;
  double bound = alpha + k * (p_lo_err + p_up_err);
  if (random_design) bound += k * (m_l + m_u) * eps;
  if (randomized && independent_device) bound += 0.5 * p_straddle;
  return bound;
}

}  // namespace scorebounds
