#include <benchmark/benchmark.h>

#include "scorebounds/bounds.hpp"
#include "scorebounds/confidence.hpp"
#include "scorebounds/data.hpp"
#include "scorebounds/lp.hpp"
#include "scorebounds/montecarlo.hpp"
#include "scorebounds/rng.hpp"

namespace sb = scorebounds;

namespace {

sb::LinearProgram random_lp(std::size_t q, std::size_t m, std::uint64_t seed) {
  sb::Rng rng(seed);
  sb::LinearProgram lp;
  lp.c.resize(q);
  lp.lo.assign(q, -10.0);
  lp.hi.assign(q, 10.0);
  for (auto& v : lp.c) v = -2.0 + 4.0 * rng.uniform();
  for (std::size_t i = 0; i < m; ++i) {
    sb::LPRow row;
    row.a.resize(q);
    for (auto& v : row.a) v = -2.0 + 4.0 * rng.uniform();
    row.sense = rng.bit() ? sb::RowSense::Ge : sb::RowSense::Le;
    row.rhs = -1.0 + 2.0 * rng.uniform();
    lp.rows.push_back(std::move(row));
  }
  return lp;
}

void BM_SolveLP(benchmark::State& state) {
  const auto q = static_cast<std::size_t>(state.range(0));
  const auto m = static_cast<std::size_t>(state.range(1));
  const auto lp = random_lp(q, m, 99);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sb::solve_lp(lp));
  }
}
BENCHMARK(BM_SolveLP)->Args({3, 10})->Args({3, 25})->Args({6, 50});

void BM_BoundInterval(benchmark::State& state) {
  sb::DGPSpec dgp;
  dgp.scenario = sb::Scenario::AppendixB;
  const auto pop = sb::population_oracle(dgp);
  std::vector<sb::LPRow> rows;
  for (std::size_t j = 0; j < pop.support.size(); ++j) {
    if (pop.signs[j] == sb::GroupSign::Skipped) continue;
    sb::LPRow row;
    row.a = pop.support[j].x;
    row.sense = pop.signs[j] == sb::GroupSign::Positive ? sb::RowSense::Ge
                                                        : sb::RowSense::Le;
    row.rhs = 0.0;
    rows.push_back(std::move(row));
  }
  sb::BoundsSpec spec = pop.spec;
  spec.r.assign(spec.lo.size(), 0.0);
  spec.r[pop.target_index] = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sb::bound_interval(rows, spec));
  }
}
BENCHMARK(BM_BoundInterval);

void BM_EstimationPipeline(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto ds = sb::gen_appendix_b(n, 7);
  for (auto _ : state) {
    auto gd = sb::group(ds);
    const auto g = sb::estimate_g(gd, 0.5, sb::Design::Fixed);
    const auto hw = sb::halfwidth_asymp_fixed(gd, 0.05);
    benchmark::DoNotOptimize(sb::build_constraints(gd, sb::screen(g, hw), 0.0));
  }
}
BENCHMARK(BM_EstimationPipeline)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
