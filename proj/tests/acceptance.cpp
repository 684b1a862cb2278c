// Acceptance gate: one pass/fail line per criterion. Run with no argument
// for the full gate or with a criterion number (1-8) for a single check.
//
// Known-red sub-checks are reported honestly (they fail) with the analysis
// that explains why the published target is unattainable under this
// synthetic design; see the notes printed next to each.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "scorebounds/bounds.hpp"
#include "scorebounds/classify.hpp"
#include "scorebounds/confidence.hpp"
#include "scorebounds/data.hpp"
#include "scorebounds/lp.hpp"
#include "scorebounds/montecarlo.hpp"
#include "scorebounds/rng.hpp"

namespace sb = scorebounds;

namespace {

struct Criterion {
  bool ok = true;
  void check(bool cond, const std::string& what, const std::string& note = "") {
    std::printf("  %-4s %s%s%s\n", cond ? "ok" : "FAIL", what.c_str(),
                note.empty() ? "" : "  -- ", note.c_str());
    ok = ok && cond;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

bool within(double x, double target, double tol) {
  return std::abs(x - target) <= tol;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

// ---------------------------------------------------------------------
// 1. Population bounds of the quantile-binned design: [1.5, 3.0] +- 1e-9.
bool criterion1() {
  Criterion c;
  const auto t0 = std::chrono::steady_clock::now();
  sb::DGPSpec dgp;
  dgp.scenario = sb::Scenario::AppendixB;
  const auto pop = sb::population_oracle(dgp);
  const double elapsed = seconds_since(t0);
  c.check(pop.target_bounds.feasible, "population LP feasible");
  c.check(within(pop.target_bounds.lo, 1.5, 1e-9),
          "lower bound = 1.5 +- 1e-9 (got " + fmt(pop.target_bounds.lo) + ")");
  c.check(within(pop.target_bounds.hi, 3.0, 1e-9),
          "upper bound = 3.0 +- 1e-9 (got " + fmt(pop.target_bounds.hi) + ")");
  c.check(elapsed < 1.0, "runtime < 1 s (" + fmt(elapsed) + " s)");
  return c.ok;
}

// ---------------------------------------------------------------------
// 2. Finite-sample inference table, 100 reps (Hoeffding, random design).
bool criterion2() {
  Criterion c;
  const auto t0 = std::chrono::steady_clock::now();
  sb::DGPSpec dgp;
  dgp.scenario = sb::Scenario::AppendixB;
  dgp.seed = 1;

  dgp.n = 25000;
  const auto big =
      sb::run_bounds_experiment(dgp, 100, 0.05, sb::Variant::FiniteRandom);
  c.check(within(big.mean_lo, 1.5, 5e-4) && within(big.mean_hi, 3.0, 5e-4),
          "n=25000 mean bounds (1.500, 3.000), got (" + fmt(big.mean_lo) +
              ", " + fmt(big.mean_hi) + ")");
  c.check(big.sd_lo == 0.0 && big.sd_hi == 0.0,
          "n=25000 stds exactly (0.000, 0.000)");
  c.check(big.coverage == 1.0, "n=25000 coverage exactly 1.000");

  dgp.n = 5000;
  const auto mid =
      sb::run_bounds_experiment(dgp, 100, 0.05, sb::Variant::FiniteRandom);
  c.check(within(mid.mean_lo, -1.038, 0.15),
          "n=5000 mean lower = -1.038 +- 0.15 (got " + fmt(mid.mean_lo) + ")");
  c.check(mid.mean_hi == 10.0,
          "n=5000 mean upper = 10.000, box-binding (got " + fmt(mid.mean_hi) +
              ")");
  const double elapsed = seconds_since(t0);
  c.check(elapsed < 300.0, "runtime < 5 min (" + fmt(elapsed) + " s)");
  return c.ok;
}

// ---------------------------------------------------------------------
// 3. Asymptotic inference table, 1000 reps (Bonferroni normal, fixed design).
bool criterion3() {
  Criterion c;
  const auto t0 = std::chrono::steady_clock::now();
  sb::DGPSpec dgp;
  dgp.scenario = sb::Scenario::AppendixB;
  dgp.seed = 1;

  dgp.n = 1000;
  const auto small =
      sb::run_bounds_experiment(dgp, 1000, 0.05, sb::Variant::AsympFixed);
  c.check(within(small.mean_lo, 1.5, 0.01) && within(small.mean_hi, 3.0, 0.01),
          "n=1000 mean bounds (1.500, 3.000), got (" + fmt(small.mean_lo) +
              ", " + fmt(small.mean_hi) + ")");
  c.check(within(small.sd_lo, 0.016, 0.01),
          "n=1000 lower-std = 0.016 +- 0.01 (got " + fmt(small.sd_lo) + ")",
          "known red: this synthetic design reaches exact screening one "
          "table row earlier, so the one-deviant-rep regime behind the "
          "published 0.016 does not occur at n=1000 here");

  dgp.n = 2000;
  const auto big =
      sb::run_bounds_experiment(dgp, 1000, 0.05, sb::Variant::AsympFixed);
  c.check(big.sd_lo == 0.0 && big.sd_hi == 0.0,
          "n=2000 stds exactly (0.000, 0.000)");
  c.check(big.coverage == 1.0, "n=2000 coverage exactly 1.000");
  const double elapsed = seconds_since(t0);
  c.check(elapsed < 600.0, "runtime < 10 min (" + fmt(elapsed) + " s)");
  return c.ok;
}

// ---------------------------------------------------------------------
// 4. Classification disagreement table, 1000 reps on the grid design.
bool criterion4() {
  Criterion c;
  const auto t0 = std::chrono::steady_clock::now();
  const std::string equal_cell_note =
      "known red: with equal cells (n_j = 240) the four near-marginal "
      "cells sit at |phi - 0.5| = 0.079 against a screening threshold of "
      "0.093 and drop out with prob ~0.65 each, inflating disagreement; "
      "the published numbers come from the source design's unequal cells "
      "(110-347), which is not reproducible from the printed information";
  sb::DGPSpec dgp;
  dgp.scenario = sb::Scenario::KlsHomo;
  dgp.seed = 1;

  dgp.n = 2880;
  const auto a_n = sb::run_classification_experiment(dgp, 1000, 0.05,
                                                     sb::ClassRule::Abstain);
  const auto b_n = sb::run_classification_experiment(dgp, 1000, 0.05,
                                                     sb::ClassRule::Random);
  const auto c_n = sb::run_classification_experiment(
      dgp, 1000, 0.05, sb::ClassRule::SampleFrequency);
  dgp.n = 8640;
  const auto a_3n = sb::run_classification_experiment(dgp, 1000, 0.05,
                                                      sb::ClassRule::Abstain);
  const auto c_3n = sb::run_classification_experiment(
      dgp, 1000, 0.05, sb::ClassRule::SampleFrequency);

  c.check(within(a_n.avg_pointwise, 0.058, 0.02),
          "panel A avg at n = 0.058 +- 0.02 (got " + fmt(a_n.avg_pointwise) +
              ")",
          equal_cell_note);
  c.check(within(a_3n.avg_pointwise, 0.003, 0.01),
          "panel A avg at 3n = 0.003 +- 0.01 (got " +
              fmt(a_3n.avg_pointwise) + ")",
          "known red: same equal-cell mechanism; at n_j = 720 each "
          "marginal cell still drops with prob ~0.07, predicting ~0.024");
  c.check(within(a_n.all_uniform, 0.608, 0.06),
          "panel A uniform at n = 0.608 +- 0.06 (got " +
              fmt(a_n.all_uniform) + ")",
          "known red: same equal-cell mechanism as the panel A average");
  c.check(within(b_n.avg_pointwise, 0.027, 0.015),
          "panel B avg at n = 0.027 +- 0.015 (got " + fmt(b_n.avg_pointwise) +
              ")",
          "known red: the random rule halves the abstention-driven "
          "disagreement of panel A, inheriting the equal-cell inflation");
  c.check(within(c_n.avg_pointwise, 0.127, 0.02) &&
              within(c_3n.avg_pointwise, 0.127, 0.02),
          "panel C avg flat at 0.127 +- 0.02 across n (got " +
              fmt(c_n.avg_pointwise) + ", " + fmt(c_3n.avg_pointwise) + ")");
  const double elapsed = seconds_since(t0);
  c.check(elapsed < 1200.0, "runtime < 20 min (" + fmt(elapsed) + " s)");
  return c.ok;
}

// ---------------------------------------------------------------------
// 5. Coverage of the confidence rectangle and the estimated interval.
bool criterion5() {
  Criterion c;
  const std::size_t reps = 500;
  const double thr = 0.95 - 3.0 * std::sqrt(0.95 * 0.05 / reps);
  struct Combo {
    const char* label;
    sb::Variant variant;
    std::size_t cluster_size;
    sb::Design design;
    const char* note;
  };
  const Combo combos[] = {
      {"finite/fixed/iid", sb::Variant::FiniteFixed, 0, sb::Design::Fixed, ""},
      {"finite/random/iid", sb::Variant::FiniteRandom, 0, sb::Design::Random,
       ""},
      {"asymptotic/fixed/iid", sb::Variant::AsympFixed, 0, sb::Design::Fixed,
       "known red (g-coverage): the plug-in fixed-design sigma_hat is "
       "ybar(1-ybar), which is exactly zero in cells with a unanimous "
       "outcome, so those coordinates get zero-width bands that almost "
       "surely miss g0; interval coverage is unaffected"},
      {"asymptotic/random/iid", sb::Variant::AsympRandom, 0,
       sb::Design::Random,
       "borderline: plug-in variance undercoverage of a few percent at "
       "these n; sits near the 3-MCSE floor"},
      {"finite/fixed/cluster5", sb::Variant::ClusterFiniteFixed, 5,
       sb::Design::Fixed, ""},
      {"finite/random/cluster5", sb::Variant::ClusterFiniteRandom, 5,
       sb::Design::Random, ""},
      {"asymptotic/fixed/cluster5", sb::Variant::ClusterAsymp, 5,
       sb::Design::Fixed, ""},
      {"asymptotic/random/cluster5", sb::Variant::ClusterAsymp, 5,
       sb::Design::Random,
       "borderline at n=1000 (known red): the plug-in cluster variance "
       "undercovers by a few percent in small samples; recovers by n=5000"},
  };
  for (const auto& combo : combos) {
    for (std::size_t n : {std::size_t{1000}, std::size_t{5000}}) {
      sb::DGPSpec dgp;
      dgp.scenario = sb::Scenario::AppendixB;
      dgp.n = n;
      dgp.seed = 1;
      const auto r = sb::run_bounds_experiment(
          dgp, reps, 0.05, combo.variant, combo.cluster_size, combo.design);
      const std::string tag =
          std::string(combo.label) + " n=" + std::to_string(n);
      c.check(r.coverage >= thr,
              tag + " interval coverage " + fmt(r.coverage) + " >= " +
                  fmt(thr));
      c.check(r.g_coverage >= thr,
              tag + " g-rectangle coverage " + fmt(r.g_coverage) + " >= " +
                  fmt(thr),
              combo.note);
    }
  }
  return c.ok;
}

// ---------------------------------------------------------------------
// 6. Decision-theory oracles on an exhaustive grid.
bool criterion6() {
  Criterion c;
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> pts = {-2.0, -1.0, -0.5, -0.1, 0.0,
                                   0.1,  0.5,  1.0,  2.0};
  std::size_t combos = 0, mismatches = 0;
  for (double cb : {0.0, 0.2}) {
    for (double ca : {0.5, 1.0}) {
      for (double cw : {1.5, 2.0, 3.0}) {
        const sb::CostTriple costs{cb, ca, cw};
        for (double lo : pts) {
          for (double hi : pts) {
            if (lo > hi) continue;
            ++combos;
            sb::BoundInterval bi;
            bi.feasible = true;
            bi.lo = lo;
            bi.hi = hi;
            if (sb::minimax_action(bi, costs) !=
                sb::classify_abstain(bi).outcome) {
              ++mismatches;
            }
          }
        }
      }
    }
  }
  c.check(combos >= 500,
          "grid size >= 500 (" + std::to_string(combos) + " combos)");
  c.check(mismatches == 0, "classify_abstain = brute-force minimax action, "
                           "zero mismatches");
  bool regret_ok = true;
  for (double cb : {0.0, 0.1, 0.5}) {
    for (double cw : {1.0, 2.0, 4.0}) {
      if (cw <= cb) continue;
      regret_ok = regret_ok &&
                  sb::minimax_regret_prob({cb, 0.5 * (cb + cw), cw}) == 0.5;
    }
  }
  c.check(regret_ok, "minimax_regret_prob = 0.5 for all valid cost pairs");
  const double elapsed = seconds_since(t0);
  c.check(elapsed < 1.0, "runtime < 1 s (" + fmt(elapsed) + " s)");
  return c.ok;
}

// ---------------------------------------------------------------------
// 7. LP solver vs grid enumeration.
bool criterion7() {
  Criterion c;
  std::size_t false_infeasible = 0, value_misses = 0, compared = 0;
  sb::Rng rng(424242);
  const struct {
    std::size_t q;
    double step;
    std::size_t cases;
  } plans[] = {{1, 1e-3, 80}, {2, 1e-2, 80}, {3, 0.05, 40}};
  for (const auto& plan : plans) {
    for (std::size_t rep = 0; rep < plan.cases; ++rep) {
      sb::LinearProgram lp;
      lp.c.resize(plan.q);
      lp.lo.assign(plan.q, -1.0);
      lp.hi.assign(plan.q, 1.0);
      for (auto& v : lp.c) v = -2.0 + 4.0 * rng.uniform();
      const std::size_t m = rng.next() % 5;
      for (std::size_t i = 0; i < m; ++i) {
        sb::LPRow row;
        row.a.resize(plan.q);
        for (auto& v : row.a) v = -2.0 + 4.0 * rng.uniform();
        row.sense = rng.bit() ? sb::RowSense::Ge : sb::RowSense::Le;
        row.rhs = -1.0 + 2.0 * rng.uniform();
        lp.rows.push_back(std::move(row));
      }
      // Grid oracle.
      bool grid_feasible = false;
      double grid_best = 0.0;
      std::vector<std::size_t> counts(plan.q,
                                      static_cast<std::size_t>(
                                          std::round(2.0 / plan.step)) +
                                          1);
      std::vector<std::size_t> idx(plan.q, 0);
      while (true) {
        double obj = 0.0;
        bool ok = true;
        std::vector<double> x(plan.q);
        for (std::size_t k = 0; k < plan.q; ++k)
          x[k] = -1.0 + plan.step * idx[k];
        for (const auto& row : lp.rows) {
          double lhs = 0.0;
          for (std::size_t k = 0; k < plan.q; ++k) lhs += row.a[k] * x[k];
          if (row.sense == sb::RowSense::Ge && lhs < row.rhs) ok = false;
          if (row.sense == sb::RowSense::Le && lhs > row.rhs) ok = false;
          if (!ok) break;
        }
        if (ok) {
          for (std::size_t k = 0; k < plan.q; ++k) obj += lp.c[k] * x[k];
          if (!grid_feasible || obj < grid_best) {
            grid_feasible = true;
            grid_best = obj;
          }
        }
        std::size_t k = 0;
        while (k < plan.q && ++idx[k] == counts[k]) idx[k++] = 0;
        if (k == plan.q) break;
      }
      const auto res = sb::solve_lp(lp);
      if (grid_feasible) {
        if (res.status != sb::LPStatus::Optimal) {
          ++false_infeasible;
          continue;
        }
        ++compared;
        double lip = 1.0;
        for (double ck : lp.c) lip += std::abs(ck);
        const double tol = plan.step * lip * static_cast<double>(plan.q) * 10;
        if (res.value > grid_best + 1e-9 || res.value < grid_best - tol) {
          ++value_misses;
        }
      }
    }
  }
  c.check(false_infeasible == 0, "zero false infeasibility verdicts");
  c.check(value_misses == 0,
          "value agreement within grid-step tolerance on " +
              std::to_string(compared) + " solved cases");
  c.check(compared >= 150, "grid oracle exercised most of the 200 cases");
  return c.ok;
}

// ---------------------------------------------------------------------
// 8. Exact reduction identities.
bool criterion8() {
  Criterion c;
  const double rel4ulp = 4.0 * std::numeric_limits<double>::epsilon();
  auto close_ulp = [&](double a, double b) {
    return std::abs(a - b) <=
           rel4ulp * std::max({std::abs(a), std::abs(b), 1e-300});
  };

  const auto ds = sb::gen_appendix_b(3000, 5);

  // (a) singleton unit-weight clusters reproduce the iid half-widths.
  {
    auto gd_iid = sb::group(ds);
    auto gd_cl = sb::group(ds);
    sb::estimate_g(gd_iid, 0.5, sb::Design::Fixed);
    sb::estimate_g_clustered(gd_cl, 0.5, sb::Design::Fixed);
    const auto hf = sb::halfwidth_finite_fixed(gd_iid, 0.05);
    const auto hc = sb::halfwidth_cluster_finite(gd_cl, 0.05,
                                                 sb::Design::Fixed);
    const auto hr = sb::halfwidth_finite_random(gd_iid.J(), gd_iid.n, 0.05);
    const auto hcr = sb::halfwidth_cluster_finite(gd_cl, 0.05,
                                                  sb::Design::Random);
    bool ok = true;
    for (std::size_t j = 0; j < gd_iid.J(); ++j) {
      // Equal in exact arithmetic; the clustered path accumulates one
      // squared share per observation, so rounding grows with n (observed
      // ~1e2 ulp at n = 3000). 1e-12 relative bounds that accumulation.
      ok = ok && std::abs(hf.s[j] - hc.s[j]) <= 1e-12 * hf.s[j] &&
           std::abs(hr.s[j] - hcr.s[j]) <= 1e-12 * hr.s[j];
    }
    c.check(ok, "cluster -> iid half-width equality under singleton "
                "unit-weight clusters (rel 1e-12, see accumulation note)");
  }

  // (b) fixed-design and random-design ghat coincide with unit weights.
  {
    auto gd_f = sb::group(ds);
    auto gd_r = sb::group(ds);
    const auto gf = sb::estimate_g(gd_f, 0.5, sb::Design::Fixed);
    const auto gr = sb::estimate_g(gd_r, 0.5, sb::Design::Random);
    bool ok = true;
    for (std::size_t j = 0; j < gf.size(); ++j)
      ok = ok && close_ulp(gf[j], gr[j]);
    c.check(ok, "fixed-design vs random-design ghat equality (<= 4 ulp)");
  }

  // (c) interval builder with v_lo = v_hi produces the identical LP.
  {
    sb::Dataset iv = ds;
    sb::Dataset ex = ds;
    iv.q_v = 1;
    iv.interval_names = {"x2iv"};
    for (auto& o : iv.obs) {
      o.v_lo.push_back(o.x.back());
      o.v_hi.push_back(o.x.back());
      o.x.pop_back();
    }
    iv.q = ds.q - 1;
    iv.covariate_names.pop_back();
    auto gd_iv = sb::group(iv);
    auto gd_ex = sb::group(ex);
    sb::estimate_g(gd_ex, 0.5, sb::Design::Fixed);
    const auto g_iv = sb::estimate_g(gd_iv, 0.5, sb::Design::Fixed);
    const auto hw_iv = sb::halfwidth_finite_fixed(gd_iv, 0.05);
    const auto signs = sb::screen(g_iv, hw_iv);
    const auto rows_iv = sb::build_constraints_interval(gd_iv, signs, 0.0);
    const auto rows_ex = sb::build_constraints(gd_ex, signs, 0.0);
    bool ok = rows_iv.size() == rows_ex.size();
    for (std::size_t i = 0; ok && i < rows_iv.size(); ++i) {
      ok = rows_iv[i].a == rows_ex[i].a &&
           rows_iv[i].sense == rows_ex[i].sense &&
           rows_iv[i].rhs == rows_ex[i].rhs;
    }
    c.check(ok, "interval builder with v_lo = v_hi emits the bitwise "
                "identical LP rows");
  }

  // (d) clustered asymptotic half-widths agree between design routes.
  {
    sb::Dataset cl = ds;
    sb::assign_clusters(cl, 5);
    auto gd = sb::group(cl);
    sb::estimate_g_clustered(gd, 0.5, sb::Design::Fixed);
    const auto hf = sb::halfwidth_cluster_asymp(gd, 0.05, sb::Design::Fixed);
    const auto hr = sb::halfwidth_cluster_asymp(gd, 0.05, sb::Design::Random);
    bool ok = true;
    for (std::size_t j = 0; j < gd.J(); ++j)
      ok = ok && close_ulp(hf.s[j], hr.s[j]);
    c.check(ok, "cluster asymptotic fixed = random half-widths (<= 4 ulp)");
  }
  return c.ok;
}

}  // namespace

int main(int argc, char** argv) {
  using Fn = bool (*)();
  const Fn criteria[] = {criterion1, criterion2, criterion3, criterion4,
                         criterion5, criterion6, criterion7, criterion8};
  const char* names[] = {
      "population-bound reproduction",
      "finite-sample inference table",
      "asymptotic inference table",
      "classification disagreement table",
      "coverage property suite",
      "decision-theory oracles",
      "LP oracle equivalence",
      "reduction identities",
  };
  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > 8) {
      std::fprintf(stderr, "usage: %s [criterion 1-8]\n", argv[0]);
      return 2;
    }
  }
  bool all_ok = true;
  for (int i = 1; i <= 8; ++i) {
    if (only != 0 && i != only) continue;
    std::printf("criterion %d (%s):\n", i, names[i - 1]);
    const bool ok = criteria[i - 1]();
    std::printf("criterion %d: %s\n", i, ok ? "PASS" : "FAIL");
    all_ok = all_ok && ok;
  }
  return all_ok ? 0 : 1;
}
