#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "scorebounds/types.hpp"

namespace scorebounds {

enum class Variant {
  None,
  FiniteFixed,
  FiniteRandom,
  AsympFixed,
  AsympRandom,
  ClusterFiniteFixed,
  ClusterFiniteRandom,
  ClusterAsymp,
};

std::string variant_name(Variant v);

/// Per-group half-widths s(x_j, alpha) of the rectangular confidence region
/// for g_0. Variant None carries s = 0 everywhere (treat estimates as truth).
struct HalfWidths {
  double alpha = 0.0;
  Variant variant = Variant::None;
  std::vector<double> s;
};

/// s = 0 for every group: reproduces the "sample" columns with no
/// sampling-uncertainty adjustment.
HalfWidths halfwidth_none(std::size_t J);

/// Hoeffding, fixed design: s_j = p(x_j) * sqrt(log(2J/alpha) / (2 n_j)).
HalfWidths halfwidth_finite_fixed(const GroupedData& grouped, double alpha);

/// Hoeffding, random design: uniform s = sqrt(log(2J/alpha) / (2n)).
HalfWidths halfwidth_finite_random(std::size_t J, std::size_t n, double alpha);

/// Bonferroni normal, fixed design:
/// s_j = sqrt(n_j) * sigma_hat_j / n * z_{1 - alpha/(2J)}.
HalfWidths halfwidth_asymp_fixed(const GroupedData& grouped, double alpha);

/// Bonferroni normal, random design:
/// s_j = s_hat_j / sqrt(n) * z_{1 - alpha/(2J)}, with the 1/n-divisor
/// variance as stored by estimate_g.
HalfWidths halfwidth_asymp_random(const GroupedData& grouped, double alpha);

/// Clustered Hoeffding. Fixed design uses within-group cluster weight
/// shares; random design uses whole-sample cluster shares (uniform s).
HalfWidths halfwidth_cluster_finite(const GroupedData& grouped, double alpha,
                                    Design design);

/// Clustered Bonferroni, using the upper-bound variance built from
/// cluster-level sums of w*(Y-tau). Numerically identical between the
/// fixed and random design routes.
HalfWidths halfwidth_cluster_asymp(const GroupedData& grouped, double alpha,
                                   Design design);

}  // namespace scorebounds
