#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scorebounds/bounds.hpp"
#include "scorebounds/classify.hpp"
#include "scorebounds/data.hpp"

namespace scorebounds {

enum class Scenario {
  AppendixB,  // quantile-binned correlated normals, 25 cells
  KlsHomo,    // GPA x internship grid, sigma = 0.5
  KlsHetero,  // same grid, sigma = 0.2 [1 + (GPA/3 + TI)^2]
};

struct DGPSpec {
  Scenario scenario = Scenario::AppendixB;
  std::size_t n = 1000;
  std::uint64_t seed = 1;
  double tau = 0.5;
};

struct SupportPoint {
  std::vector<double> x;
  double prob = 0.0;   // population cell probability
  double sigma = 0.0;  // noise scale at the cell
  double index = 0.0;  // x'beta0
};

/// Analytic description of a DGP: cell signs and the population LPs solved
/// with exact signs and zero half-widths.
struct PopulationInfo {
  std::vector<SupportPoint> support;
  std::vector<GroupSign> signs;
  std::vector<BoundInterval> cell_bounds;  // r = x_j per support point
  BoundInterval target_bounds;             // r = e_target
  BoundsSpec spec;                         // box and pinned normalization
  std::size_t target_index = 0;            // coefficient the tables track
  std::vector<double> beta0;
};

PopulationInfo population_oracle(const DGPSpec& dgp);

Dataset gen_appendix_b(std::size_t n, std::uint64_t seed, double tau = 0.5);

Dataset gen_kls(std::size_t n, std::uint64_t seed, bool heteroskedastic,
                double tau = 0.5);

Dataset gen_dataset(const DGPSpec& dgp, std::uint64_t rep);

/// Labels consecutive observations with clusters of the given size.
void assign_clusters(Dataset& ds, std::size_t cluster_size);

struct BoundsReport {
  std::size_t n = 0;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  Variant variant = Variant::None;
  double alpha = 0.0;
  double mean_lo = 0.0;
  double mean_hi = 0.0;
  double sd_lo = 0.0;
  double sd_hi = 0.0;
  double coverage = 0.0;    // estimated interval contains population interval
  double g_coverage = 0.0;  // confidence rectangle contains the g0 vector
  std::size_t infeasible = 0;
  double pop_lo = 0.0;
  double pop_hi = 0.0;
  double runtime_seconds = 0.0;
};

/// cluster_size = 0 means iid; otherwise consecutive blocks share a
/// cluster and the clustered estimators are used. `design` only matters
/// for Variant::ClusterAsymp, whose two design routes share one enum tag.
BoundsReport run_bounds_experiment(const DGPSpec& dgp, std::size_t reps,
                                   double alpha, Variant variant,
                                   std::size_t cluster_size = 0,
                                   Design design = Design::Fixed);

enum class ClassRule { Abstain, Random, SampleFrequency };

std::string rule_name(ClassRule rule);

struct ClassReport {
  std::size_t n = 0;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  ClassRule rule = ClassRule::Abstain;
  double alpha = 0.0;
  double avg_pointwise = 0.0;  // mean disagreement over reps x cells
  double all_uniform = 0.0;    // share of reps with any disagreement
  double runtime_seconds = 0.0;
};

/// Oracle decisions use the population cell intervals; sample decisions
/// re-estimate per replication with fixed-design asymptotic half-widths.
/// The random rules share one fair bit per (rep, cell) between oracle and
/// sample.
ClassReport run_classification_experiment(const DGPSpec& dgp,
                                          std::size_t reps, double alpha,
                                          ClassRule rule);

/// Bivariate standard normal rectangle probability with correlation rho.
double binormal_rect(double a1, double b1, double a2, double b2, double rho);

/// Worker cap: SCOREBOUNDS_THREADS if set, else hardware concurrency.
std::size_t thread_budget();

}  // namespace scorebounds
