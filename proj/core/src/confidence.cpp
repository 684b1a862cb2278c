#include "scorebounds/confidence.hpp"

#include <cmath>
#include <stdexcept>

#include "scorebounds/stats.hpp"

namespace scorebounds {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::domain_error("alpha must lie strictly in (0,1)");
  }
}

void check_cluster_stats(const GroupedData& grouped) {
  if (grouped.cluster_ids.empty()) {
    throw std::logic_error("cluster statistics are missing: run "
                           "estimate_g_clustered first");
  }
  for (const auto& g : grouped.groups) {
    double gamma_sum = 0.0;
    for (const auto& c : g.clusters) gamma_sum += c.gamma;
    // The weight shares of a group sum to one once the clustered
    // estimator has filled them; zero means it never ran.
    if (g.clusters.empty() || !(gamma_sum > 0.5)) {
      throw std::logic_error("cluster statistics are missing: run "
                             "estimate_g_clustered first");
    }
  }
}

}  // namespace

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::None: return "none";
    case Variant::FiniteFixed: return "finite-fixed";
    case Variant::FiniteRandom: return "finite-random";
    case Variant::AsympFixed: return "asymptotic-fixed";
    case Variant::AsympRandom: return "asymptotic-random";
    case Variant::ClusterFiniteFixed: return "cluster-finite-fixed";
    case Variant::ClusterFiniteRandom: return "cluster-finite-random";
    case Variant::ClusterAsymp: return "cluster-asymptotic";
  }
  return "unknown";
}

HalfWidths halfwidth_none(std::size_t J) {
  return HalfWidths{0.0, Variant::None, std::vector<double>(J, 0.0)};
}

HalfWidths halfwidth_finite_fixed(const GroupedData& grouped, double alpha) {
  check_alpha(alpha);
  const double J = static_cast<double>(grouped.J());
  const double log_term = std::log(2.0 * J / alpha);
  HalfWidths hw{alpha, Variant::FiniteFixed, {}};
  hw.s.reserve(grouped.J());
  for (const auto& g : grouped.groups) {
    const double t_j = std::sqrt(log_term / (2.0 * static_cast<double>(g.n_j)));
    hw.s.push_back(g.mass * t_j);
  }
  return hw;
}

HalfWidths halfwidth_finite_random(std::size_t J, std::size_t n,
                                   double alpha) {
  check_alpha(alpha);
  if (n < 1) throw std::domain_error("n must be at least 1");
  const double t = std::sqrt(std::log(2.0 * static_cast<double>(J) / alpha) /
                             (2.0 * static_cast<double>(n)));
  return HalfWidths{alpha, Variant::FiniteRandom, std::vector<double>(J, t)};
}

HalfWidths halfwidth_asymp_fixed(const GroupedData& grouped, double alpha) {
  check_alpha(alpha);
  const double J = static_cast<double>(grouped.J());
  const double z = inv_norm_cdf(1.0 - alpha / (2.0 * J));
  const double n = static_cast<double>(grouped.n);
  HalfWidths hw{alpha, Variant::AsympFixed, {}};
  hw.s.reserve(grouped.J());
  for (const auto& g : grouped.groups) {
    const double sigma = std::sqrt(g.sigma2_hat);
    hw.s.push_back(std::sqrt(static_cast<double>(g.n_j)) * sigma / n * z);
  }
  return hw;
}

HalfWidths halfwidth_asymp_random(const GroupedData& grouped, double alpha) {
  check_alpha(alpha);
  const double J = static_cast<double>(grouped.J());
  const double z = inv_norm_cdf(1.0 - alpha / (2.0 * J));
  const double sqrt_n = std::sqrt(static_cast<double>(grouped.n));
  HalfWidths hw{alpha, Variant::AsympRandom, {}};
  hw.s.reserve(grouped.J());
  for (const auto& g : grouped.groups) {
    hw.s.push_back(std::sqrt(std::max(0.0, g.s2_hat)) / sqrt_n * z);
  }
  return hw;
}

HalfWidths halfwidth_cluster_finite(const GroupedData& grouped, double alpha,
                                    Design design) {
  check_alpha(alpha);
  check_cluster_stats(grouped);
  const double J = static_cast<double>(grouped.J());
  const double log_term = std::log(2.0 * J / alpha);
  HalfWidths hw{alpha,
                design == Design::Fixed ? Variant::ClusterFiniteFixed
                                        : Variant::ClusterFiniteRandom,
                {}};
  hw.s.reserve(grouped.J());
  if (design == Design::Fixed) {
    for (const auto& g : grouped.groups) {
      double gamma_sq = 0.0;
      for (const auto& c : g.clusters) gamma_sq += c.gamma * c.gamma;
      hw.s.push_back(g.mass * std::sqrt(gamma_sq / 2.0 * log_term));
    }
  } else {
    double gamma_sq = 0.0;
    for (double gc : grouped.cluster_gamma) gamma_sq += gc * gc;
    const double t = std::sqrt(gamma_sq / 2.0 * log_term);
    hw.s.assign(grouped.J(), t);
  }
  return hw;
}

HalfWidths halfwidth_cluster_asymp(const GroupedData& grouped, double alpha,
                                   Design design) {
  check_alpha(alpha);
  check_cluster_stats(grouped);
  const double J = static_cast<double>(grouped.J());
  const double z = inv_norm_cdf(1.0 - alpha / (2.0 * J));
  HalfWidths hw{alpha, Variant::ClusterAsymp, {}};
  hw.s.reserve(grouped.J());
  for (const auto& g : grouped.groups) {
    double ups_sq = 0.0;  // sum over clusters of Upsilon_{j,c}^2
    for (const auto& c : g.clusters) ups_sq += c.upsilon * c.upsilon;
    if (design == Design::Fixed) {
      // V_{1,j} = N_j^{-1} sum_c Upsilon^2;  s = sqrt(N_j) sqrt(V_{1,j}) / N
      const double v1 = ups_sq / g.weight_sum;
      hw.s.push_back(std::sqrt(g.weight_sum) * std::sqrt(v1) / grouped.N * z);
    } else {
      // V_{1,j} = N^{-1} sum_c Upsilon^2;  s = sqrt(V_{1,j} / N)
      const double v1 = ups_sq / grouped.N;
      hw.s.push_back(std::sqrt(v1 / grouped.N) * z);
    }
  }
  return hw;
}

}  // namespace scorebounds
