#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace scorebounds {

/// Raised when user-supplied data or flags violate a documented precondition.
class validation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised on numerical breakdown inside the solver (cycling guard exceeded,
/// unbounded ray despite finite boxes).
class internal_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Design { Fixed, Random };

struct Observation {
  int y = 0;                    // binary outcome
  std::vector<double> x;        // discrete covariates
  double weight = 1.0;          // survey sampling weight
  std::optional<std::string> cluster;
  std::vector<double> v_lo;     // interval-covariate lower endpoints
  std::vector<double> v_hi;     // interval-covariate upper endpoints
};

struct Dataset {
  std::vector<Observation> obs;
  std::size_t q = 0;    // discrete covariate dimension
  std::size_t q_v = 0;  // interval covariate dimension
  Design design = Design::Random;
  double tau = 0.5;
  std::vector<std::string> covariate_names;
  std::vector<std::string> interval_names;
  bool has_weights = false;
  bool has_clusters = false;

  std::size_t n() const { return obs.size(); }
};

/// Per-cluster statistics of one support point (fixed design: within-group;
/// random design the shares live on GroupedData).
struct ClusterStat {
  std::size_t cluster_index = 0;  // into GroupedData::cluster_ids
  double upsilon = 0.0;     // sum of w * (y - tau) over the cluster's rows
  double gamma = 0.0;       // weight share of the cluster within the group
  double weight_sum = 0.0;  // sum of w
  double wy_sum = 0.0;      // sum of w * y
  std::size_t count = 0;
};

struct GroupSummary {
  std::vector<double> x;     // support point
  std::vector<double> v_lo;  // interval endpoints (empty when q_v == 0)
  std::vector<double> v_hi;
  std::size_t n_j = 0;
  double mass = 0.0;        // p(x_j)
  double g_hat = 0.0;
  double ybar = 0.0;        // unweighted group mean of Y
  double sigma2_hat = 0.0;  // ybar * (1 - ybar)
  double s2_hat = 0.0;      // 1/n-divisor variance of (Y - tau) * 1{X = x_j}
  double weight_sum = 0.0;  // N_j
  double y_sum = 0.0;
  double wy_sum = 0.0;
  std::vector<ClusterStat> clusters;  // populated by the clustered estimator
};

struct GroupedData {
  std::vector<GroupSummary> groups;
  std::size_t n = 0;  // total observations
  double N = 0.0;     // total weight
  double tau = 0.5;
  Design design = Design::Random;
  std::size_t q = 0;
  std::size_t q_v = 0;
  // Random-design cluster shares gamma_c = N^{-1} sum of w over cluster c,
  // aligned with cluster_ids. Populated by the clustered estimator.
  std::vector<std::string> cluster_ids;
  std::vector<double> cluster_gamma;

  std::size_t J() const { return groups.size(); }
};

}  // namespace scorebounds
