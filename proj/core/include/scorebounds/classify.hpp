#pragma once

#include <optional>

#include "scorebounds/bounds.hpp"

namespace scorebounds {

/// Losses of the three-way decision problem: C_b for a correct call,
/// C_abstain for declining, C for a wrong call.
struct CostTriple {
  double c_base = 0.0;
  double c_abstain = 1.0;
  double c_wrong = 2.0;
};

enum class Action { Zero, One, Abstain };

struct Decision {
  Action outcome = Action::Abstain;
  std::optional<int> draw_used;
};

/// One iff lower > 0, Zero iff upper < 0, Abstain otherwise (exact zero
/// endpoints abstain).
Decision classify_abstain(const BoundInterval& interval);

/// Same signed cases; on a straddle the caller-supplied fair bit decides.
/// The bit is never drawn internally so one draw can be shared across
/// classifiers.
Decision classify_random(const BoundInterval& interval, int r_bit);

/// Worst case over the signs of the index admitted by the interval.
double worst_case_loss(Action action, const BoundInterval& interval,
                       const CostTriple& costs);

/// Brute-force argmin of worst_case_loss, ties toward Abstain. Requires
/// the abstention ordering C_b < C_abstain < C.
Action minimax_action(const BoundInterval& interval, const CostTriple& costs);

/// Regret of classifying One with probability p when the state is
/// adversarial: (C - C_b) * max(p, 1 - p).
double max_regret(double p, const CostTriple& costs);

/// argmin of max_regret over the p-grid {0, 1e-4, ..., 1}; equals 0.5.
double minimax_regret_prob(const CostTriple& costs);

/// Upper bound on the misclassification probability of the plug-in rule.
/// Fixed design: alpha + k*(p_lo_err + p_up_err); a random design adds
/// k*(m_l + m_u)*eps. k is 0.5 under random classification, 1 otherwise.
/// With an independent randomization device, 0.5 * p_straddle is added
/// instead of halving nothing (only meaningful when randomized).
double misclassification_bound(double alpha, double p_lo_err, double p_up_err,
                               double m_l, double m_u, double eps,
                               bool randomized, bool random_design,
                               bool independent_device = false,
                               double p_straddle = 0.0);

}  // namespace scorebounds
