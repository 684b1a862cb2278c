#include "scorebounds/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <unordered_map>

namespace scorebounds {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_finite(const std::string& field, std::size_t row,
                    const std::string& column) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &pos);
  } catch (const std::exception&) {
    throw validation_error("row " + std::to_string(row) + ": column '" +
                           column + "' is not numeric: '" + field + "'");
  }
  if (pos != field.size() || !std::isfinite(v)) {
    throw validation_error("row " + std::to_string(row) + ": column '" +
                           column + "' is not a finite number: '" + field +
                           "'");
  }
  return v;
}

}  // namespace

std::string canonical_decimal(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  std::string s(buf);
  if (s == "-0") s = "0";
  return s;
}

Dataset ingest_csv(std::istream& in, const CsvSchema& schema) {
  if (!(schema.tau > 0.0 && schema.tau < 1.0)) {
    throw validation_error("tau must lie strictly between 0 and 1");
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw validation_error("empty input: header row required");
  }
  const std::vector<std::string> raw_header = split_csv_line(line);
  std::vector<std::string> header;
  header.reserve(raw_header.size());
  for (const auto& h : raw_header) header.push_back(trim(h));

  int y_col = -1, w_col = -1, cluster_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == schema.outcome) y_col = static_cast<int>(i);
    if (header[i] == schema.weight) w_col = static_cast<int>(i);
    if (header[i] == schema.cluster) cluster_col = static_cast<int>(i);
  }
  if (y_col < 0) {
    throw validation_error("outcome column '" + schema.outcome +
                           "' not found in header");
  }

  // Interval covariates arrive as paired <name>_lo / <name>_hi columns.
  std::vector<std::string> interval_names;
  std::vector<std::pair<int, int>> interval_cols;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string& h = header[i];
    if (h.size() > 3 && h.ends_with("_lo")) {
      const std::string base = h.substr(0, h.size() - 3);
      auto hi = std::find(header.begin(), header.end(), base + "_hi");
      if (hi != header.end()) {
        interval_names.push_back(base);
        interval_cols.emplace_back(static_cast<int>(i),
                                   static_cast<int>(hi - header.begin()));
      }
    }
  }

  std::vector<std::string> covariate_names;
  std::vector<int> covariate_cols;
  auto is_interval_col = [&](int c) {
    for (auto [lo, hi] : interval_cols)
      if (c == lo || c == hi) return true;
    return false;
  };
  if (!schema.covariates.empty()) {
    for (const auto& name : schema.covariates) {
      auto it = std::find(header.begin(), header.end(), name);
      if (it == header.end()) {
        throw validation_error("covariate column '" + name +
                               "' not found in header");
      }
      covariate_names.push_back(name);
      covariate_cols.push_back(static_cast<int>(it - header.begin()));
    }
  } else {
    for (std::size_t i = 0; i < header.size(); ++i) {
      const int c = static_cast<int>(i);
      if (c == y_col || c == w_col || c == cluster_col || is_interval_col(c))
        continue;
      covariate_names.push_back(header[i]);
      covariate_cols.push_back(c);
    }
  }
  if (covariate_names.empty() && interval_names.empty()) {
    throw validation_error("no covariate columns found");
  }

  Dataset ds;
  ds.q = covariate_names.size();
  ds.q_v = interval_names.size();
  ds.tau = schema.tau;
  ds.design = schema.design;
  ds.covariate_names = covariate_names;
  ds.interval_names = interval_names;
  ds.has_weights = w_col >= 0;
  ds.has_clusters = cluster_col >= 0;

  std::size_t row = 1;  // header was row 1
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw validation_error("row " + std::to_string(row) + ": expected " +
                             std::to_string(header.size()) + " fields, got " +
                             std::to_string(fields.size()));
    }
    Observation o;
    const double yv = parse_finite(trim(fields[y_col]), row, schema.outcome);
    if (yv != 0.0 && yv != 1.0) {
      throw validation_error("row " + std::to_string(row) +
                             ": outcome must be 0 or 1, got '" +
                             trim(fields[y_col]) + "'");
    }
    o.y = static_cast<int>(yv);
    if (w_col >= 0) {
      o.weight = parse_finite(trim(fields[w_col]), row, schema.weight);
      if (!(o.weight > 0.0)) {
        throw validation_error("row " + std::to_string(row) +
                               ": weight must be positive");
      }
    }
    if (cluster_col >= 0) {
      const std::string c = trim(fields[cluster_col]);
      if (c.empty()) {
        throw validation_error("row " + std::to_string(row) +
                               ": missing cluster id");
      }
      o.cluster = c;
    } else {
      o.cluster = "row:" + std::to_string(row);
    }
    o.x.reserve(ds.q);
    for (std::size_t k = 0; k < covariate_cols.size(); ++k) {
      o.x.push_back(parse_finite(trim(fields[covariate_cols[k]]), row,
                                 covariate_names[k]));
    }
    for (std::size_t k = 0; k < interval_cols.size(); ++k) {
      const double lo = parse_finite(trim(fields[interval_cols[k].first]), row,
                                     interval_names[k] + "_lo");
      const double hi = parse_finite(trim(fields[interval_cols[k].second]),
                                     row, interval_names[k] + "_hi");
      if (lo > hi) {
        throw validation_error("row " + std::to_string(row) + ": interval '" +
                               interval_names[k] + "' has lo > hi");
      }
      o.v_lo.push_back(lo);
      o.v_hi.push_back(hi);
    }
    ds.obs.push_back(std::move(o));
  }
  if (ds.obs.empty()) {
    throw validation_error("no data rows");
  }
  return ds;
}

Dataset ingest_csv_file(const std::string& path, const CsvSchema& schema) {
  std::ifstream f(path);
  if (!f) throw validation_error("cannot open file: " + path);
  return ingest_csv(f, schema);
}

GroupedData group(const Dataset& dataset) {
  if (dataset.obs.empty()) throw validation_error("dataset is empty");

  GroupedData gd;
  gd.n = dataset.n();
  gd.tau = dataset.tau;
  gd.design = dataset.design;
  gd.q = dataset.q;
  gd.q_v = dataset.q_v;

  std::unordered_map<std::string, std::size_t> group_of;
  std::unordered_map<std::string, std::size_t> cluster_of;
  // per-group map cluster index -> position in GroupSummary::clusters
  std::vector<std::unordered_map<std::size_t, std::size_t>> cpos;

  for (const auto& o : dataset.obs) {
    if (o.x.size() != dataset.q || o.v_lo.size() != dataset.q_v) {
      throw validation_error("observation dimension mismatch");
    }
    std::string key;
    for (double v : o.x) {
      key += canonical_decimal(v);
      key += '|';
    }
    for (std::size_t k = 0; k < o.v_lo.size(); ++k) {
      key += canonical_decimal(o.v_lo[k]);
      key += '|';
      key += canonical_decimal(o.v_hi[k]);
      key += '|';
    }
    auto [it, inserted] = group_of.try_emplace(key, gd.groups.size());
    if (inserted) {
      GroupSummary g;
      g.x = o.x;
      g.v_lo = o.v_lo;
      g.v_hi = o.v_hi;
      gd.groups.push_back(std::move(g));
      cpos.emplace_back();
    }
    GroupSummary& g = gd.groups[it->second];
    g.n_j += 1;
    g.weight_sum += o.weight;
    g.y_sum += o.y;
    g.wy_sum += o.weight * o.y;
    gd.N += o.weight;

    std::size_t ci;
    if (o.cluster) {
      auto [cit, cins] =
          cluster_of.try_emplace(*o.cluster, gd.cluster_ids.size());
      if (cins) {
        gd.cluster_ids.push_back(*o.cluster);
        gd.cluster_gamma.push_back(0.0);
      }
      ci = cit->second;
    } else {
      // singleton cluster per row
      ci = gd.cluster_ids.size();
      gd.cluster_ids.push_back("row:" + std::to_string(ci));
      gd.cluster_gamma.push_back(0.0);
    }
    gd.cluster_gamma[ci] += o.weight;

    auto [pit, pins] = cpos[it->second].try_emplace(ci, g.clusters.size());
    if (pins) {
      ClusterStat cs;
      cs.cluster_index = ci;
      g.clusters.push_back(cs);
    }
    ClusterStat& cs = g.clusters[pit->second];
    cs.count += 1;
    cs.weight_sum += o.weight;
    cs.wy_sum += o.weight * o.y;
  }

  for (auto& g : gd.groups) {
    g.mass = g.weight_sum / gd.N;
    g.ybar = g.y_sum / static_cast<double>(g.n_j);
  }
  for (double& gc : gd.cluster_gamma) gc /= gd.N;
  return gd;
}

std::vector<double> estimate_g(GroupedData& grouped, double tau,
                               Design design) {
  if (!(tau > 0.0 && tau < 1.0)) {
    throw validation_error("tau must lie strictly between 0 and 1");
  }
  const double n = static_cast<double>(grouped.n);
  std::vector<double> out;
  out.reserve(grouped.J());
  for (auto& g : grouped.groups) {
    const double nj = static_cast<double>(g.n_j);
    const double t_sum = g.y_sum - nj * tau;  // sum of (Y - tau) in the group
    if (design == Design::Fixed) {
      g.g_hat = (t_sum / nj) * g.mass;
    } else {
      g.g_hat = t_sum / n;
    }
    g.sigma2_hat = g.ybar * (1.0 - g.ybar);
    // 1/n-divisor variance of (Y - tau) * 1{X = x_j} over the whole sample:
    // sum of squares Q = (1-2tau)*sum(Y) + n_j*tau^2, centered by t_sum/n.
    const double q_sum = (1.0 - 2.0 * tau) * g.y_sum + nj * tau * tau;
    g.s2_hat = (q_sum - t_sum * t_sum / n) / n;
    out.push_back(g.g_hat);
  }
  return out;
}

std::vector<double> estimate_g_clustered(GroupedData& grouped, double tau,
                                         Design design) {
  if (!(tau > 0.0 && tau < 1.0)) {
    throw validation_error("tau must lie strictly between 0 and 1");
  }
  if (grouped.cluster_ids.empty()) {
    throw validation_error("cluster statistics require cluster ids");
  }
  std::vector<double> out;
  out.reserve(grouped.J());
  for (auto& g : grouped.groups) {
    double upsilon_sum = 0.0;
    for (auto& cs : g.clusters) {
      if (!(cs.weight_sum > 0.0)) {
        throw validation_error("nonpositive cluster weight");
      }
      cs.upsilon = cs.wy_sum - tau * cs.weight_sum;
      cs.gamma = cs.weight_sum / g.weight_sum;  // gamma_{j,c}
      upsilon_sum += cs.upsilon;
    }
    // Fixed design: (sum_c Upsilon_{j,c}) / (sum_j N_j); random design:
    // N^{-1} sum_c Upsilon_{j,c}. The denominators coincide.
    g.g_hat = upsilon_sum / grouped.N;
    (void)design;
    out.push_back(g.g_hat);
  }
  return out;
}

}  // namespace scorebounds
