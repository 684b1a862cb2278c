#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "scorebounds/types.hpp"

namespace scorebounds {

/// Column mapping for CSV ingestion. Empty covariate list means "all columns
/// that are not y/w/cluster and not part of a *_lo/*_hi pair".
struct CsvSchema {
  std::string outcome = "y";
  std::string weight = "w";
  std::string cluster = "cluster";
  std::vector<std::string> covariates;  // explicit selection, optional
  double tau = 0.5;
  Design design = Design::Random;
};

Dataset ingest_csv(std::istream& in, const CsvSchema& schema = {});
Dataset ingest_csv_file(const std::string& path, const CsvSchema& schema = {});

/// Canonical decimal form of a covariate value used as the grouping key:
/// round-half-even to 12 significant digits, with -0 normalized to 0.
std::string canonical_decimal(double v);

/// Group observations by exact support point (canonicalized decimal key)
/// and compute counts, masses and group Y statistics.
GroupedData group(const Dataset& dataset);

/// Unbiased estimator of g_0(x_j) for unit-weight i.i.d. data. Updates
/// g_hat, sigma2_hat and s2_hat on each group and returns the g_hat vector.
std::vector<double> estimate_g(GroupedData& grouped, double tau, Design design);

/// Clustered / survey-weighted estimator of g_0(x_j). Requires cluster ids
/// (singleton clusters when the source column was absent) and positive
/// weights. Fills per-cluster Upsilon and gamma statistics.
std::vector<double> estimate_g_clustered(GroupedData& grouped, double tau,
                                         Design design);

}  // namespace scorebounds
