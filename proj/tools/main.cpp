// Command line front end: bounds, classify, simulate, report.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "scorebounds/bounds.hpp"
#include "scorebounds/classify.hpp"
#include "scorebounds/confidence.hpp"
#include "scorebounds/data.hpp"
#include "scorebounds/montecarlo.hpp"
#include "scorebounds/rng.hpp"

using nlohmann::json;
namespace sb = scorebounds;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitInternal = 3;

sb::Design parse_design(const std::string& s) {
  if (s == "fixed") return sb::Design::Fixed;
  if (s == "random") return sb::Design::Random;
  throw sb::validation_error("--design must be 'fixed' or 'random'");
}

sb::Variant pick_variant(const std::string& inference, sb::Design design,
                         bool clustered) {
  if (inference == "none") return sb::Variant::None;
  if (inference == "finite") {
    if (clustered) {
      return design == sb::Design::Fixed ? sb::Variant::ClusterFiniteFixed
                                         : sb::Variant::ClusterFiniteRandom;
    }
    return design == sb::Design::Fixed ? sb::Variant::FiniteFixed
                                       : sb::Variant::FiniteRandom;
  }
  if (inference == "asymptotic") {
    if (clustered) return sb::Variant::ClusterAsymp;
    return design == sb::Design::Fixed ? sb::Variant::AsympFixed
                                       : sb::Variant::AsympRandom;
  }
  throw sb::validation_error(
      "--inference must be 'none', 'finite' or 'asymptotic'");
}

void emit(const json& j, const std::string& output_path, bool table,
          const std::string& table_text) {
  if (table) std::cout << table_text;
  const std::string body = j.dump(2) + "\n";
  if (output_path.empty()) {
    if (!table) std::cout << body;
  } else {
    std::ofstream out(output_path);
    if (!out) {
      throw sb::validation_error("cannot write output file: " + output_path);
    }
    out << body;
  }
}

struct Pipeline {
  sb::GroupedData grouped;
  std::vector<double> g_hat;
  sb::HalfWidths hw;
  std::vector<sb::GroupSign> signs;
  std::vector<sb::LPRow> rows;
  std::vector<std::string> var_names;  // covariates then interval deltas
  sb::BoundsSpec spec;
};

struct InferenceConfig {
  std::string inference = "asymptotic";
  std::string design = "fixed";
  bool clustered = false;
  double tau = 0.5;
  double alpha = 0.05;
  double epsilon = 0.0;
  double box = 10.0;
  std::string normalize;  // pinned coefficient, default first covariate
};

Pipeline run_pipeline(const sb::Dataset& ds, const InferenceConfig& cfg) {
  if (cfg.clustered && !ds.has_clusters) {
    throw sb::validation_error(
        "--clustered requires a 'cluster' column in the data");
  }
  Pipeline p;
  p.grouped = sb::group(ds);
  const sb::Design design = parse_design(cfg.design);
  const sb::Variant variant = pick_variant(cfg.inference, design,
                                           cfg.clustered);
  const bool cluster_est = cfg.clustered;
  p.g_hat = cluster_est
                ? sb::estimate_g_clustered(p.grouped, cfg.tau, design)
                : sb::estimate_g(p.grouped, cfg.tau, design);
  switch (variant) {
    case sb::Variant::None:
      p.hw = sb::halfwidth_none(p.grouped.J());
      break;
    case sb::Variant::FiniteFixed:
      p.hw = sb::halfwidth_finite_fixed(p.grouped, cfg.alpha);
      break;
    case sb::Variant::FiniteRandom:
      p.hw = sb::halfwidth_finite_random(p.grouped.J(), p.grouped.n,
                                         cfg.alpha);
      break;
    case sb::Variant::AsympFixed:
      p.hw = sb::halfwidth_asymp_fixed(p.grouped, cfg.alpha);
      break;
    case sb::Variant::AsympRandom:
      p.hw = sb::halfwidth_asymp_random(p.grouped, cfg.alpha);
      break;
    case sb::Variant::ClusterFiniteFixed:
    case sb::Variant::ClusterFiniteRandom:
      p.hw = sb::halfwidth_cluster_finite(p.grouped, cfg.alpha, design);
      break;
    case sb::Variant::ClusterAsymp:
      p.hw = sb::halfwidth_cluster_asymp(p.grouped, cfg.alpha, design);
      break;
  }
  p.signs = sb::screen(p.g_hat, p.hw);

  const std::size_t q = ds.q;
  const std::size_t qv = ds.q_v;
  p.var_names = ds.covariate_names;
  for (const auto& nm : ds.interval_names) p.var_names.push_back(nm);

  std::string pin_name = cfg.normalize.empty()
                             ? (q > 0 ? ds.covariate_names.front()
                                      : ds.interval_names.front())
                             : cfg.normalize;
  std::size_t pin = p.var_names.size();
  for (std::size_t k = 0; k < p.var_names.size(); ++k) {
    if (p.var_names[k] == pin_name) pin = k;
  }
  if (pin == p.var_names.size()) {
    throw sb::validation_error("--normalize column '" + pin_name +
                               "' is not a covariate");
  }
  p.spec = sb::default_spec(q + qv, pin, 1.0, cfg.box);
  // Interval-covariate coefficients are sign-restricted to be nonnegative.
  for (std::size_t k = q; k < q + qv; ++k) {
    p.spec.lo[k] = std::max(0.0, p.spec.lo[k]);
  }
  p.spec.epsilon = cfg.epsilon;
  p.rows = qv > 0
               ? sb::build_constraints_interval(p.grouped, p.signs,
                                                cfg.epsilon)
               : sb::build_constraints(p.grouped, p.signs, cfg.epsilon);
  return p;
}

json screening_json(const Pipeline& p) {
  std::size_t pos = 0, neg = 0, skip = 0;
  for (auto s : p.signs) {
    if (s == sb::GroupSign::Positive) ++pos;
    else if (s == sb::GroupSign::Negative) ++neg;
    else ++skip;
  }
  return json{{"positive", pos}, {"negative", neg}, {"skipped", skip}};
}

json interval_json(const sb::BoundInterval& bi) {
  json j;
  j["feasible"] = bi.feasible;
  if (bi.feasible) {
    j["lower"] = bi.lo;
    j["upper"] = bi.hi;
    j["lower_box_binding"] = bi.lo_box_binding;
    j["upper_box_binding"] = bi.hi_box_binding;
  }
  return j;
}

std::string decision_text(sb::Action a) {
  switch (a) {
    case sb::Action::One: return "1";
    case sb::Action::Zero: return "0";
    case sb::Action::Abstain: return "abstain";
  }
  return "?";
}

// ---------------------------------------------------------------- bounds

struct BoundsArgs {
  std::string data;
  InferenceConfig cfg;
  std::string target;
  std::string output;
  std::string format = "json";
};

int cmd_bounds(const BoundsArgs& a) {
  sb::CsvSchema schema;
  schema.tau = a.cfg.tau;
  schema.design = parse_design(a.cfg.design);
  const sb::Dataset ds = sb::ingest_csv_file(a.data, schema);
  const Pipeline p = run_pipeline(ds, a.cfg);

  std::size_t target = p.var_names.size();
  for (std::size_t k = 0; k < p.var_names.size(); ++k) {
    if (p.var_names[k] == a.target) target = k;
  }
  if (target == p.var_names.size()) {
    throw sb::validation_error("--target column '" + a.target +
                               "' is not a covariate");
  }
  sb::BoundsSpec spec = p.spec;
  spec.r.assign(p.var_names.size(), 0.0);
  spec.r[target] = 1.0;
  const sb::BoundInterval bi = sb::bound_interval(p.rows, spec);

  json j;
  j["command"] = "bounds";
  j["config"] = {{"data", a.data},         {"tau", a.cfg.tau},
                 {"alpha", a.cfg.alpha},   {"design", a.cfg.design},
                 {"inference", a.cfg.inference},
                 {"clustered", a.cfg.clustered},
                 {"target", a.target},     {"epsilon", a.cfg.epsilon},
                 {"box", a.cfg.box},
                 {"normalize", a.cfg.normalize.empty() ? p.var_names.front()
                                                       : a.cfg.normalize}};
  j["n"] = ds.n();
  j["J"] = p.grouped.J();
  j["screening"] = screening_json(p);
  j["interval"] = interval_json(bi);

  char table[256];
  if (bi.feasible) {
    std::snprintf(table, sizeof(table),
                  "target %-12s  interval [%.6f, %.6f]  J=%zu  n=%zu\n",
                  a.target.c_str(), bi.lo, bi.hi, p.grouped.J(), ds.n());
  } else {
    std::snprintf(table, sizeof(table),
                  "target %-12s  infeasible constraint set\n",
                  a.target.c_str());
  }
  emit(j, a.output, a.format == "table", table);
  return bi.feasible ? kExitOk : kExitInfeasible;
}

// --------------------------------------------------------------- classify

struct ClassifyArgs {
  std::string data;
  std::string query;
  InferenceConfig cfg;
  std::string rule = "abstain";
  std::uint64_t seed = 1;
  std::string output;
  std::string format = "json";
};

int cmd_classify(const ClassifyArgs& a) {
  if (a.rule != "abstain" && a.rule != "random") {
    throw sb::validation_error("--rule must be 'abstain' or 'random'");
  }
  sb::CsvSchema schema;
  schema.tau = a.cfg.tau;
  schema.design = parse_design(a.cfg.design);
  const sb::Dataset ds = sb::ingest_csv_file(a.data, schema);
  const Pipeline p = run_pipeline(ds, a.cfg);

  // Query files reuse the training CSV layout; the y column is a
  // placeholder so the same files can be fed to both commands.
  sb::CsvSchema qschema;
  qschema.tau = a.cfg.tau;
  const sb::Dataset qs = sb::ingest_csv_file(a.query, qschema);
  if (qs.covariate_names != ds.covariate_names ||
      qs.interval_names != ds.interval_names) {
    throw sb::validation_error(
        "query columns do not match the training covariates");
  }

  sb::Rng bits(a.seed);
  json rows = json::array();
  std::string table;
  for (const auto& o : qs.obs) {
    // Interval-covariate queries: the lower endpoint uses v_lo and the
    // upper uses v_hi, matching the sharp bounds for an interval-measured
    // regressor with a nonnegative coefficient.
    sb::BoundsSpec lo_spec = p.spec;
    lo_spec.r = o.x;
    for (double v : o.v_lo) lo_spec.r.push_back(v);
    sb::BoundsSpec hi_spec = p.spec;
    hi_spec.r = o.x;
    for (double v : o.v_hi) hi_spec.r.push_back(v);
    const sb::BoundInterval lo_bi = sb::bound_interval(p.rows, lo_spec);
    const sb::BoundInterval hi_bi = sb::bound_interval(p.rows, hi_spec);
    if (!lo_bi.feasible || !hi_bi.feasible) {
      throw sb::validation_error(
          "no classification possible: empty feasible set");
    }
    sb::BoundInterval bi;
    bi.feasible = true;
    bi.lo = lo_bi.lo;
    bi.hi = hi_bi.hi;
    const int bit = bits.bit();
    const sb::Decision d = a.rule == "abstain"
                               ? sb::classify_abstain(bi)
                               : sb::classify_random(bi, bit);
    json row;
    row["x_star"] = o.x;
    if (!o.v_lo.empty()) {
      row["v_lo"] = o.v_lo;
      row["v_hi"] = o.v_hi;
    }
    row["lower"] = bi.lo;
    row["upper"] = bi.hi;
    row["decision"] = decision_text(d.outcome);
    if (d.draw_used) row["draw_used"] = *d.draw_used;
    rows.push_back(std::move(row));
    char line[128];
    std::snprintf(line, sizeof(line), "[%.6f, %.6f] -> %s\n", bi.lo, bi.hi,
                  decision_text(d.outcome).c_str());
    table += line;
  }
  json j;
  j["command"] = "classify";
  j["config"] = {{"data", a.data},   {"query", a.query}, {"rule", a.rule},
                 {"tau", a.cfg.tau}, {"alpha", a.cfg.alpha},
                 {"design", a.cfg.design},
                 {"inference", a.cfg.inference},
                 {"seed", a.seed}};
  j["results"] = rows;
  emit(j, a.output, a.format == "table", table);
  return kExitOk;
}

// --------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string scenario = "appendixB";
  std::string experiment = "bounds";
  std::string inference = "finite";
  std::string design = "fixed";
  std::string rule = "abstain";
  std::size_t cluster_size = 0;
  std::size_t n = 1000;
  std::size_t reps = 100;
  double alpha = 0.05;
  double tau = 0.5;
  std::uint64_t seed = 1;
  std::string output;
  std::string format = "json";
};

sb::Scenario parse_scenario(const std::string& s) {
  if (s == "appendixB") return sb::Scenario::AppendixB;
  if (s == "kls-homo") return sb::Scenario::KlsHomo;
  if (s == "kls-hetero") return sb::Scenario::KlsHetero;
  throw sb::validation_error(
      "--scenario must be 'appendixB', 'kls-homo' or 'kls-hetero'");
}

int cmd_simulate(const SimulateArgs& a) {
  sb::DGPSpec dgp;
  dgp.scenario = parse_scenario(a.scenario);
  dgp.n = a.n;
  dgp.seed = a.seed;
  dgp.tau = a.tau;

  json j;
  j["command"] = "simulate";
  j["scenario"] = a.scenario;
  j["n"] = a.n;
  j["reps"] = a.reps;
  j["alpha"] = a.alpha;
  j["seed"] = a.seed;
  std::string table;
  char line[256];
  if (a.experiment == "bounds") {
    const sb::Design design = parse_design(a.design);
    const sb::Variant variant =
        pick_variant(a.inference, design, a.cluster_size > 0);
    const sb::BoundsReport r = sb::run_bounds_experiment(
        dgp, a.reps, a.alpha, variant, a.cluster_size, design);
    j["experiment"] = "bounds";
    j["variant"] = sb::variant_name(variant);
    j["design"] = a.design;
    j["cluster_size"] = a.cluster_size;
    j["population_bounds"] = {r.pop_lo, r.pop_hi};
    j["mean_lower"] = r.mean_lo;
    j["mean_upper"] = r.mean_hi;
    j["sd_lower"] = r.sd_lo;
    j["sd_upper"] = r.sd_hi;
    j["coverage"] = r.coverage;
    j["g_coverage"] = r.g_coverage;
    j["infeasible"] = r.infeasible;
    j["metadata"] = {{"runtime_seconds", r.runtime_seconds}};
    std::snprintf(line, sizeof(line),
                  "%-10s n=%-7zu mean [%7.3f, %7.3f]  sd (%6.3f, %6.3f)  "
                  "coverage %.3f\n",
                  sb::variant_name(variant).c_str(), a.n, r.mean_lo,
                  r.mean_hi, r.sd_lo, r.sd_hi, r.coverage);
    table = line;
  } else if (a.experiment == "classification") {
    sb::ClassRule rule;
    if (a.rule == "abstain") rule = sb::ClassRule::Abstain;
    else if (a.rule == "random") rule = sb::ClassRule::Random;
    else if (a.rule == "sample-frequency") rule = sb::ClassRule::SampleFrequency;
    else
      throw sb::validation_error(
          "--rule must be 'abstain', 'random' or 'sample-frequency'");
    const sb::ClassReport r =
        sb::run_classification_experiment(dgp, a.reps, a.alpha, rule);
    j["experiment"] = "classification";
    j["rule"] = a.rule;
    j["avg_pointwise"] = r.avg_pointwise;
    j["all_uniform"] = r.all_uniform;
    j["metadata"] = {{"runtime_seconds", r.runtime_seconds}};
    std::snprintf(line, sizeof(line),
                  "%-16s n=%-7zu avg(pointwise) %.3f  all(uniform) %.3f\n",
                  a.rule.c_str(), a.n, r.avg_pointwise, r.all_uniform);
    table = line;
  } else {
    throw sb::validation_error(
        "--experiment must be 'bounds' or 'classification'");
  }
  emit(j, a.output, a.format == "table", table);
  return kExitOk;
}

// ----------------------------------------------------------------- report

struct ReportArgs {
  std::string input;
};

std::string csv_num(const json& j, const char* key) {
  if (!j.contains(key)) return "";
  return j[key].dump();
}

int cmd_report(const ReportArgs& a) {
  std::ifstream in(a.input);
  if (!in) throw sb::validation_error("cannot open file: " + a.input);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw sb::validation_error(std::string("invalid JSON input: ") +
                               e.what());
  }
  json items = doc.is_array() ? doc : json::array({doc});
  std::cout << "experiment,scenario,variant,rule,n,reps,seed,alpha,"
               "mean_lower,mean_upper,sd_lower,sd_upper,coverage,"
               "g_coverage,avg_pointwise,all_uniform\n";
  for (const auto& item : items) {
    if (!item.is_object() || item.value("command", "") != "simulate") {
      throw sb::validation_error("report input must be simulate output");
    }
    std::cout << item.value("experiment", "") << ','
              << item.value("scenario", "") << ','
              << item.value("variant", "") << ',' << item.value("rule", "")
              << ',' << csv_num(item, "n") << ',' << csv_num(item, "reps")
              << ',' << csv_num(item, "seed") << ','
              << csv_num(item, "alpha") << ','
              << csv_num(item, "mean_lower") << ','
              << csv_num(item, "mean_upper") << ','
              << csv_num(item, "sd_lower") << ','
              << csv_num(item, "sd_upper") << ','
              << csv_num(item, "coverage") << ','
              << csv_num(item, "g_coverage") << ','
              << csv_num(item, "avg_pointwise") << ','
              << csv_num(item, "all_uniform") << '\n';
  }
  return kExitOk;
}

void add_inference_flags(CLI::App* cmd, InferenceConfig& cfg) {
  cmd->add_option("--tau", cfg.tau, "quantile of interest (default 0.5)");
  cmd->add_option("--alpha", cfg.alpha, "confidence level (default 0.05)");
  cmd->add_option("--design", cfg.design, "fixed | random");
  cmd->add_option("--inference", cfg.inference,
                  "none | finite | asymptotic");
  cmd->add_flag("--clustered", cfg.clustered,
                "use cluster-robust half-widths (needs a cluster column)");
  cmd->add_option("--epsilon", cfg.epsilon,
                  "margin on the sign constraints (default 0)");
  cmd->add_option("--box", cfg.box,
                  "half-width of the parameter box (default 10)");
  cmd->add_option("--normalize", cfg.normalize,
                  "coefficient pinned to 1 (default first covariate)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"identified-interval bounds and abstaining classification "
               "for the maximum score binary choice model"};
  app.require_subcommand(1);

  BoundsArgs ba;
  auto* bounds = app.add_subcommand("bounds",
                                    "estimate the identified interval of a "
                                    "coefficient");
  bounds->add_option("--data", ba.data, "training CSV")->required();
  bounds->add_option("--target", ba.target, "coefficient to bound")
      ->required();
  add_inference_flags(bounds, ba.cfg);
  bounds->add_option("--output", ba.output, "JSON output path");
  bounds->add_option("--format", ba.format, "json | table");

  ClassifyArgs ca;
  auto* classify = app.add_subcommand("classify",
                                      "classify query rows from bound "
                                      "intervals");
  classify->add_option("--data", ca.data, "training CSV")->required();
  classify->add_option("--query", ca.query, "query CSV")->required();
  classify->add_option("--rule", ca.rule, "abstain | random");
  classify->add_option("--seed", ca.seed, "seed of the fair-bit stream");
  add_inference_flags(classify, ca.cfg);
  classify->add_option("--output", ca.output, "JSON output path");
  classify->add_option("--format", ca.format, "json | table");

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate",
                                      "replication studies on the built-in "
                                      "designs");
  simulate->add_option("--scenario", sa.scenario,
                       "appendixB | kls-homo | kls-hetero");
  simulate->add_option("--experiment", sa.experiment,
                       "bounds | classification");
  simulate->add_option("--inference", sa.inference, "finite | asymptotic");
  simulate->add_option("--design", sa.design, "fixed | random");
  simulate->add_option("--rule", sa.rule,
                       "abstain | random | sample-frequency");
  simulate->add_option("--cluster-size", sa.cluster_size,
                       "consecutive-block cluster size (0 = iid)");
  simulate->add_option("--n", sa.n, "sample size per replication");
  simulate->add_option("--reps", sa.reps, "number of replications");
  simulate->add_option("--alpha", sa.alpha, "confidence level");
  simulate->add_option("--tau", sa.tau, "quantile of interest");
  simulate->add_option("--seed", sa.seed, "experiment seed");
  simulate->add_option("--output", sa.output, "JSON output path");
  simulate->add_option("--format", sa.format, "json | table");

  ReportArgs ra;
  auto* report = app.add_subcommand("report",
                                    "render simulate JSON as CSV");
  report->add_option("--input", ra.input, "simulate JSON file")->required();

  try {
    app.parse(argc, argv);
    if (bounds->parsed()) return cmd_bounds(ba);
    if (classify->parsed()) return cmd_classify(ca);
    if (simulate->parsed()) return cmd_simulate(sa);
    if (report->parsed()) return cmd_report(ra);
    return kExitValidation;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  } catch (const sb::validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const sb::internal_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
}
