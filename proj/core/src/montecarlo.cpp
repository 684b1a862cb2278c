#include "scorebounds/montecarlo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>
#include <unordered_map>

#include "scorebounds/rng.hpp"
#include "scorebounds/stats.hpp"

namespace scorebounds {

namespace {

struct ScenarioInfo {
  std::vector<SupportPoint> support;
  std::vector<double> beta0;
  std::vector<std::string> names;
  std::size_t pin = 0;
  std::size_t target = 0;
};

double appendix_b_sigma(double x1, double x2) {
  const double s = x1 + x2;
  return 0.15 * (1.0 + s * s);
}

double kls_sigma(double gpa, double ti, bool hetero) {
  if (!hetero) return 0.5;
  const double s = gpa / 3.0 + ti;
  return 0.2 * (1.0 + s * s);
}

ScenarioInfo scenario_info(const DGPSpec& dgp) {
  ScenarioInfo info;
  if (dgp.scenario == Scenario::AppendixB) {
    info.beta0 = {0.5, 1.0, 2.0};
    info.names = {"intercept", "x1", "x2"};
    info.pin = 1;
    info.target = 2;
    // Quantile cuts of the standard normal at 0.2, 0.4, 0.6, 0.8.
    double cuts[4];
    for (int k = 0; k < 4; ++k) cuts[k] = inv_norm_cdf(0.2 * (k + 1));
    const double lo[5] = {-9.0, cuts[0], cuts[1], cuts[2], cuts[3]};
    const double hi[5] = {cuts[0], cuts[1], cuts[2], cuts[3], 9.0};
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) {
        SupportPoint p;
        const double x1 = static_cast<double>(i - 2);
        const double x2 = static_cast<double>(j - 2);
        p.x = {1.0, x1, x2};
        p.prob = binormal_rect(lo[i], hi[i], lo[j], hi[j], 0.25);
        p.sigma = appendix_b_sigma(x1, x2);
        p.index = 0.5 + x1 + 2.0 * x2;
        info.support.push_back(std::move(p));
      }
    }
  } else {
    const bool hetero = dgp.scenario == Scenario::KlsHetero;
    info.beta0 = {1.0, 0.4, -3.7};
    info.names = {"gpa", "ti", "intercept"};
    info.pin = 0;
    info.target = 1;
    for (int g = 0; g < 6; ++g) {
      for (int t = 0; t < 2; ++t) {
        SupportPoint p;
        const double gpa = 3.0 + 0.2 * static_cast<double>(g);
        const double ti = static_cast<double>(t);
        p.x = {gpa, ti, 1.0};
        p.prob = 1.0 / 12.0;
        p.sigma = kls_sigma(gpa, ti, hetero);
        p.index = gpa + 0.4 * ti - 3.7;
        info.support.push_back(std::move(p));
      }
    }
  }
  return info;
}

std::string support_key(const std::vector<double>& x) {
  std::string key;
  for (double v : x) {
    key += canonical_decimal(v);
    key += '|';
  }
  return key;
}

std::vector<LPRow> sign_rows(const std::vector<SupportPoint>& support,
                             const std::vector<GroupSign>& signs,
                             double epsilon) {
  std::vector<LPRow> rows;
  for (std::size_t j = 0; j < support.size(); ++j) {
    if (signs[j] == GroupSign::Skipped) continue;
    LPRow row;
    row.a = support[j].x;
    if (signs[j] == GroupSign::Positive) {
      row.sense = RowSense::Ge;
      row.rhs = epsilon;
    } else {
      row.sense = RowSense::Le;
      row.rhs = -epsilon;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void run_reps(std::size_t reps, const std::function<void(std::size_t)>& body);

}  // namespace

std::size_t thread_budget() {
  std::size_t hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("SCOREBOUNDS_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) hw = std::min<std::size_t>(hw, v);
  }
  return hw;
}

namespace {

void run_reps(std::size_t reps, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min(thread_budget(), std::max<std::size_t>(reps, 1));
  if (workers <= 1) {
    for (std::size_t r = 0; r < reps; ++r) body(r);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t r = w; r < reps; r += workers) body(r);
      } catch (...) {
        errs[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errs) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

double binormal_rect(double a1, double b1, double a2, double b2, double rho) {
  if (!(rho > -1.0 && rho < 1.0)) {
    throw validation_error("correlation must lie strictly in (-1, 1)");
  }
  const double lo = std::max(a1, -9.0);
  const double hi = std::min(b1, 9.0);
  if (lo >= hi) return 0.0;
  const double s = std::sqrt(1.0 - rho * rho);
  auto f = [&](double w) {
    return norm_pdf(w) *
           (norm_cdf((b2 - rho * w) / s) - norm_cdf((a2 - rho * w) / s));
  };
  // Composite Simpson; the integrand is smooth so this is far below 1e-12.
  const int steps = 4096;
  const double h = (hi - lo) / steps;
  double acc = f(lo) + f(hi);
  for (int i = 1; i < steps; ++i) {
    acc += f(lo + h * i) * (i % 2 ? 4.0 : 2.0);
  }
  return acc * h / 3.0;
}

PopulationInfo population_oracle(const DGPSpec& dgp) {
  const ScenarioInfo info = scenario_info(dgp);
  PopulationInfo pop;
  pop.support = info.support;
  pop.beta0 = info.beta0;
  pop.target_index = info.target;
  pop.spec = default_spec(info.beta0.size(), info.pin, 1.0);
  pop.signs.reserve(pop.support.size());
  for (const auto& p : pop.support) {
    const double f = norm_cdf(p.index / p.sigma) - dgp.tau;
    if (std::fabs(f) < 1e-12) {
      throw validation_error("margin assumption violated: g0 vanishes at a "
                             "support point");
    }
    pop.signs.push_back(f > 0.0 ? GroupSign::Positive : GroupSign::Negative);
  }
  const std::vector<LPRow> rows = sign_rows(pop.support, pop.signs, 0.0);
  BoundsSpec spec = pop.spec;
  spec.r.assign(info.beta0.size(), 0.0);
  spec.r[info.target] = 1.0;
  pop.target_bounds = bound_interval(rows, spec);
  for (const auto& p : pop.support) {
    spec.r = p.x;
    pop.cell_bounds.push_back(bound_interval(rows, spec));
  }
  return pop;
}

Dataset gen_appendix_b(std::size_t n, std::uint64_t seed, double tau) {
  if (n < 1) throw validation_error("n must be at least 1");
  Rng rng(seed);
  double cuts[4];
  for (int k = 0; k < 4; ++k) cuts[k] = inv_norm_cdf(0.2 * (k + 1));
  auto level = [&](double w) {
    int b = 0;
    while (b < 4 && w > cuts[b]) ++b;
    return static_cast<double>(b - 2);
  };
  const double rho = 0.25;
  const double mix = std::sqrt(1.0 - rho * rho);
  Dataset ds;
  ds.q = 3;
  ds.tau = tau;
  ds.design = Design::Random;
  ds.covariate_names = {"intercept", "x1", "x2"};
  ds.obs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    const double v = rng.normal();
    const double w1 = z1;
    const double w2 = rho * z1 + mix * z2;
    const double x1 = level(w1);
    const double x2 = level(w2);
    const double idx = 0.5 + x1 + 2.0 * x2;
    Observation o;
    o.x = {1.0, x1, x2};
    o.y = idx + appendix_b_sigma(x1, x2) * v >= 0.0 ? 1 : 0;
    ds.obs.push_back(std::move(o));
  }
  return ds;
}

Dataset gen_kls(std::size_t n, std::uint64_t seed, bool heteroskedastic,
                double tau) {
  if (n < 12 || n % 12 != 0) {
    throw validation_error("KLS design needs n divisible by 12");
  }
  Rng rng(seed);
  DGPSpec tmp;
  tmp.scenario = heteroskedastic ? Scenario::KlsHetero : Scenario::KlsHomo;
  const ScenarioInfo info = scenario_info(tmp);
  Dataset ds;
  ds.q = 3;
  ds.tau = tau;
  ds.design = Design::Fixed;
  ds.covariate_names = info.names;
  ds.obs.reserve(n);
  const std::size_t per_cell = n / 12;
  for (const auto& cell : info.support) {
    for (std::size_t k = 0; k < per_cell; ++k) {
      Observation o;
      o.x = cell.x;
      o.y = cell.index + cell.sigma * rng.normal() >= 0.0 ? 1 : 0;
      ds.obs.push_back(std::move(o));
    }
  }
  return ds;
}

Dataset gen_dataset(const DGPSpec& dgp, std::uint64_t rep) {
  const std::uint64_t s = substream(dgp.seed, rep).next();
  switch (dgp.scenario) {
    case Scenario::AppendixB:
      return gen_appendix_b(dgp.n, s, dgp.tau);
    case Scenario::KlsHomo:
      return gen_kls(dgp.n, s, false, dgp.tau);
    case Scenario::KlsHetero:
      return gen_kls(dgp.n, s, true, dgp.tau);
  }
  throw validation_error("unknown scenario");
}

void assign_clusters(Dataset& ds, std::size_t cluster_size) {
  if (cluster_size < 1) throw validation_error("cluster size must be >= 1");
  for (std::size_t i = 0; i < ds.obs.size(); ++i) {
    ds.obs[i].cluster = "c" + std::to_string(i / cluster_size);
  }
  ds.has_clusters = true;
}

namespace {

bool cluster_variant(Variant v) {
  return v == Variant::ClusterFiniteFixed ||
         v == Variant::ClusterFiniteRandom || v == Variant::ClusterAsymp;
}

Design variant_design(Variant v, Design cluster_asymp_design) {
  switch (v) {
    case Variant::FiniteFixed:
    case Variant::AsympFixed:
    case Variant::ClusterFiniteFixed:
      return Design::Fixed;
    case Variant::FiniteRandom:
    case Variant::AsympRandom:
    case Variant::ClusterFiniteRandom:
      return Design::Random;
    default:
      return cluster_asymp_design;
  }
}

HalfWidths make_halfwidths(Variant v, const GroupedData& gd, double alpha,
                           Design design) {
  switch (v) {
    case Variant::None:
      return halfwidth_none(gd.J());
    case Variant::FiniteFixed:
      return halfwidth_finite_fixed(gd, alpha);
    case Variant::FiniteRandom:
      return halfwidth_finite_random(gd.J(), gd.n, alpha);
    case Variant::AsympFixed:
      return halfwidth_asymp_fixed(gd, alpha);
    case Variant::AsympRandom:
      return halfwidth_asymp_random(gd, alpha);
    case Variant::ClusterFiniteFixed:
    case Variant::ClusterFiniteRandom:
      return halfwidth_cluster_finite(gd, alpha, design);
    case Variant::ClusterAsymp:
      return halfwidth_cluster_asymp(gd, alpha, design);
  }
  throw validation_error("unknown confidence variant");
}

}  // namespace

BoundsReport run_bounds_experiment(const DGPSpec& dgp, std::size_t reps,
                                   double alpha, Variant variant,
                                   std::size_t cluster_size, Design design) {
  if (reps < 1) throw validation_error("reps must be at least 1");
  const auto t0 = std::chrono::steady_clock::now();
  const PopulationInfo pop = population_oracle(dgp);
  const Design des = variant_design(variant, design);
  const bool clustered = cluster_variant(variant);

  std::unordered_map<std::string, std::size_t> support_of;
  for (std::size_t j = 0; j < pop.support.size(); ++j) {
    support_of.emplace(support_key(pop.support[j].x), j);
  }
  BoundsSpec spec = pop.spec;
  spec.r.assign(pop.beta0.size(), 0.0);
  spec.r[pop.target_index] = 1.0;

  struct Rep {
    bool feasible = false;
    double lo = 0.0;
    double hi = 0.0;
    bool covers = false;
    bool g_covers = false;
  };
  std::vector<Rep> out(reps);

  run_reps(reps, [&](std::size_t r) {
    Dataset ds = gen_dataset(dgp, r);
    if (cluster_size > 0) assign_clusters(ds, cluster_size);
    GroupedData gd = group(ds);
    const std::vector<double> g =
        clustered ? estimate_g_clustered(gd, dgp.tau, des)
                  : estimate_g(gd, dgp.tau, des);
    const HalfWidths hw = make_halfwidths(variant, gd, alpha, des);
    const std::vector<GroupSign> signs = screen(g, hw);
    const std::vector<LPRow> rows = build_constraints(gd, signs, 0.0);
    const BoundInterval bi = bound_interval(rows, spec);

    Rep& rep = out[r];
    rep.feasible = bi.feasible;
    if (bi.feasible) {
      rep.lo = bi.lo;
      rep.hi = bi.hi;
      rep.covers = bi.lo <= pop.target_bounds.lo + 1e-9 &&
                   bi.hi >= pop.target_bounds.hi - 1e-9;
    }
    // Rectangle coverage of the g0 vector over the observed cells. The
    // fixed-design target uses the realized cell shares.
    bool gcov = true;
    const double n = static_cast<double>(gd.n);
    for (std::size_t j = 0; j < gd.J(); ++j) {
      const auto it = support_of.find(support_key(gd.groups[j].x));
      if (it == support_of.end()) {
        throw internal_error("generated cell outside the DGP support");
      }
      const SupportPoint& p = pop.support[it->second];
      const double f = norm_cdf(p.index / p.sigma) - dgp.tau;
      const double g0 = des == Design::Fixed
                            ? f * static_cast<double>(gd.groups[j].n_j) / n
                            : f * p.prob;
      if (std::fabs(g[j] - g0) > hw.s[j] + 1e-12) {
        gcov = false;
        break;
      }
    }
    rep.g_covers = gcov;
  });

  BoundsReport report;
  report.n = dgp.n;
  report.reps = reps;
  report.seed = dgp.seed;
  report.variant = variant;
  report.alpha = alpha;
  report.pop_lo = pop.target_bounds.lo;
  report.pop_hi = pop.target_bounds.hi;
  double sum_lo = 0.0, sum_hi = 0.0;
  std::size_t feas = 0, covered = 0, gcovered = 0;
  for (const Rep& rep : out) {
    if (rep.feasible) {
      ++feas;
      sum_lo += rep.lo;
      sum_hi += rep.hi;
      if (rep.covers) ++covered;
    }
    if (rep.g_covers) ++gcovered;
  }
  report.infeasible = reps - feas;
  if (feas > 0) {
    report.mean_lo = sum_lo / static_cast<double>(feas);
    report.mean_hi = sum_hi / static_cast<double>(feas);
    double ss_lo = 0.0, ss_hi = 0.0;
    for (const Rep& rep : out) {
      if (!rep.feasible) continue;
      ss_lo += (rep.lo - report.mean_lo) * (rep.lo - report.mean_lo);
      ss_hi += (rep.hi - report.mean_hi) * (rep.hi - report.mean_hi);
    }
    if (feas > 1) {
      report.sd_lo = std::sqrt(ss_lo / static_cast<double>(feas - 1));
      report.sd_hi = std::sqrt(ss_hi / static_cast<double>(feas - 1));
    }
  }
  report.coverage = static_cast<double>(covered) / static_cast<double>(reps);
  report.g_coverage =
      static_cast<double>(gcovered) / static_cast<double>(reps);
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return report;
}

std::string rule_name(ClassRule rule) {
  switch (rule) {
    case ClassRule::Abstain: return "abstain";
    case ClassRule::Random: return "random";
    case ClassRule::SampleFrequency: return "sample-frequency";
  }
  return "unknown";
}

ClassReport run_classification_experiment(const DGPSpec& dgp,
                                          std::size_t reps, double alpha,
                                          ClassRule rule) {
  if (reps < 1) throw validation_error("reps must be at least 1");
  const auto t0 = std::chrono::steady_clock::now();
  const PopulationInfo pop = population_oracle(dgp);
  const std::size_t J = pop.support.size();

  std::unordered_map<std::string, std::size_t> support_of;
  for (std::size_t j = 0; j < J; ++j) {
    support_of.emplace(support_key(pop.support[j].x), j);
  }

  struct Rep {
    std::size_t mismatches = 0;
  };
  std::vector<Rep> out(reps);

  run_reps(reps, [&](std::size_t r) {
    Dataset ds = gen_dataset(dgp, r);
    GroupedData gd = group(ds);
    const std::vector<double> g = estimate_g(gd, dgp.tau, Design::Fixed);
    const HalfWidths hw = halfwidth_asymp_fixed(gd, alpha);
    const std::vector<GroupSign> signs = screen(g, hw);
    const std::vector<LPRow> rows = build_constraints(gd, signs, 0.0);

    // Cell index of each observed group, for the sample-frequency rule.
    std::vector<int> group_of_cell(J, -1);
    for (std::size_t j = 0; j < gd.J(); ++j) {
      const auto it = support_of.find(support_key(gd.groups[j].x));
      if (it != support_of.end()) {
        group_of_cell[it->second] = static_cast<int>(j);
      }
    }

    Rng bits = substream(dgp.seed ^ 0x62a9e1c3b7a55a11ULL, r);
    BoundsSpec spec = pop.spec;
    for (std::size_t j = 0; j < J; ++j) {
      const int bit = bits.bit();
      Action oracle;
      if (rule == ClassRule::Abstain) {
        oracle = classify_abstain(pop.cell_bounds[j]).outcome;
      } else {
        oracle = classify_random(pop.cell_bounds[j], bit).outcome;
      }
      Action sample;
      if (rule == ClassRule::SampleFrequency) {
        const int gj = group_of_cell[j];
        const double f_hat =
            gj >= 0 ? gd.groups[gj].ybar - dgp.tau : 0.0;
        sample = f_hat > 0.0 ? Action::One : Action::Zero;
      } else {
        spec.r = pop.support[j].x;
        const BoundInterval bi = bound_interval(rows, spec);
        if (!bi.feasible) {
          sample = rule == ClassRule::Abstain
                       ? Action::Abstain
                       : (bit ? Action::One : Action::Zero);
        } else if (rule == ClassRule::Abstain) {
          sample = classify_abstain(bi).outcome;
        } else {
          sample = classify_random(bi, bit).outcome;
        }
      }
      if (sample != oracle) ++out[r].mismatches;
    }
  });

  ClassReport report;
  report.n = dgp.n;
  report.reps = reps;
  report.seed = dgp.seed;
  report.rule = rule;
  report.alpha = alpha;
  double avg = 0.0;
  std::size_t any = 0;
  for (const Rep& rep : out) {
    avg += static_cast<double>(rep.mismatches) / static_cast<double>(J);
    if (rep.mismatches > 0) ++any;
  }
  report.avg_pointwise = avg / static_cast<double>(reps);
  report.all_uniform = static_cast<double>(any) / static_cast<double>(reps);
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return report;
}

}  // namespace scorebounds
