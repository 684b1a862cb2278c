#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "scorebounds/data.hpp"

namespace sb = scorebounds;

namespace {

sb::Dataset from_string(const std::string& text,
                        const sb::CsvSchema& schema = {}) {
  std::istringstream in(text);
  return sb::ingest_csv(in, schema);
}

// Two support points, four unit-weight observations each, tau = 0.5.
// Cell A: y = 1,1,0,0.  Cell B: y = 1,1,1,0.
sb::Dataset two_cell_dataset() {
  return from_string(
      "y,x1,x2\n"
      "1,1,0\n1,1,0\n0,1,0\n0,1,0\n"
      "1,2,1\n1,2,1\n1,2,1\n0,2,1\n");
}

}  // namespace

TEST_CASE("csv ingestion reads reserved and covariate columns") {
  const auto ds = from_string(
      "y,w,cluster,x1,x2,inc_lo,inc_hi\n"
      "1,2.0,a,1.5,0,10,20\n"
      "0,1.0,b,2.5,1,10,10\n");
  CHECK(ds.n() == 2);
  CHECK(ds.q == 2);
  CHECK(ds.q_v == 1);
  CHECK(ds.covariate_names == std::vector<std::string>{"x1", "x2"});
  CHECK(ds.interval_names == std::vector<std::string>{"inc"});
  CHECK(ds.has_weights);
  CHECK(ds.has_clusters);
  CHECK(ds.obs[0].y == 1);
  CHECK(ds.obs[0].weight == 2.0);
  CHECK(ds.obs[0].cluster == "a");
  CHECK(ds.obs[0].x == std::vector<double>{1.5, 0.0});
  CHECK(ds.obs[0].v_lo == std::vector<double>{10.0});
  CHECK(ds.obs[0].v_hi == std::vector<double>{20.0});
  CHECK(ds.obs[1].v_lo == ds.obs[1].v_hi);
}

TEST_CASE("csv ingestion rejects malformed input") {
  CHECK_THROWS_AS(from_string(""), sb::validation_error);
  CHECK_THROWS_AS(from_string("x1,x2\n1,2\n"), sb::validation_error);
  CHECK_THROWS_AS(from_string("y,x1\n2,1\n"), sb::validation_error);
  CHECK_THROWS_AS(from_string("y,x1\n0.5,1\n"), sb::validation_error);
  CHECK_THROWS_AS(from_string("y,x1\n1,nan\n"), sb::validation_error);
  CHECK_THROWS_AS(from_string("y,x1\n1,foo\n"), sb::validation_error);
  CHECK_THROWS_AS(from_string("y,x1\n1,2,3\n"), sb::validation_error);
  CHECK_THROWS_AS(from_string("y,w,x1\n1,-1,2\n"), sb::validation_error);
  CHECK_THROWS_AS(from_string("y,w,x1\n1,0,2\n"), sb::validation_error);
  CHECK_THROWS_AS(from_string("y,cluster,x1\n1,,2\n"), sb::validation_error);
  CHECK_THROWS_AS(from_string("y,x1,a_lo,a_hi\n1,1,3,2\n"),
                  sb::validation_error);
  CHECK_THROWS_AS(from_string("y\n1\n"), sb::validation_error);
  CHECK_THROWS_AS(from_string("y,x1\n"), sb::validation_error);
  sb::CsvSchema bad_tau;
  bad_tau.tau = 0.0;
  CHECK_THROWS_AS(from_string("y,x1\n1,2\n", bad_tau), sb::validation_error);
  sb::CsvSchema missing_cov;
  missing_cov.covariates = {"zz"};
  CHECK_THROWS_AS(from_string("y,x1\n1,2\n", missing_cov),
                  sb::validation_error);
}

TEST_CASE("explicit covariate selection keeps order and drops the rest") {
  sb::CsvSchema schema;
  schema.covariates = {"x2", "x1"};
  const auto ds = from_string("y,x1,x2,junk\n1,1,2,9\n", schema);
  CHECK(ds.q == 2);
  CHECK(ds.covariate_names == std::vector<std::string>{"x2", "x1"});
  CHECK(ds.obs[0].x == std::vector<double>{2.0, 1.0});
}

TEST_CASE("canonical decimal normalizes -0 and 12-digit rounding") {
  CHECK(sb::canonical_decimal(-0.0) == "0");
  CHECK(sb::canonical_decimal(0.0) == "0");
  CHECK(sb::canonical_decimal(0.1) == "0.1");
  CHECK(sb::canonical_decimal(1.0) == "1");
  // Differences beyond 12 significant digits collapse to one key.
  CHECK(sb::canonical_decimal(1.0000000000000002) ==
        sb::canonical_decimal(1.0));
  CHECK(sb::canonical_decimal(1.000000001) != sb::canonical_decimal(1.0));
}

TEST_CASE("grouping merges support points and accumulates statistics") {
  auto ds = two_cell_dataset();
  auto gd = sb::group(ds);
  REQUIRE(gd.J() == 2);
  CHECK(gd.n == 8);
  CHECK(gd.N == doctest::Approx(8.0));
  const auto& a = gd.groups[0];
  const auto& b = gd.groups[1];
  CHECK(a.x == std::vector<double>{1.0, 0.0});
  CHECK(b.x == std::vector<double>{2.0, 1.0});
  CHECK(a.n_j == 4);
  CHECK(b.n_j == 4);
  CHECK(a.mass == doctest::Approx(0.5));
  CHECK(a.y_sum == doctest::Approx(2.0));
  CHECK(b.y_sum == doctest::Approx(3.0));
}

TEST_CASE("grouping merges keys equal after canonicalization") {
  auto ds = from_string("y,x1\n1,1\n0,1.0000000000000002\n1,-0\n0,0\n");
  auto gd = sb::group(ds);
  CHECK(gd.J() == 2);  // {1, 1+ulp} merge, {-0, 0} merge
}

TEST_CASE("estimate_g matches hand-computed values (frozen oracle)") {
  auto ds = two_cell_dataset();

  SUBCASE("fixed design") {
    auto gd = sb::group(ds);
    auto g = sb::estimate_g(gd, 0.5, sb::Design::Fixed);
    REQUIRE(g.size() == 2);
    // g_A = ((2 - 4*0.5)/4) * 0.5 = 0 ; g_B = ((3 - 2)/4) * 0.5 = 0.125
    CHECK(g[0] == doctest::Approx(0.0));
    CHECK(g[1] == doctest::Approx(0.125));
    CHECK(gd.groups[0].ybar == doctest::Approx(0.5));
    CHECK(gd.groups[1].ybar == doctest::Approx(0.75));
    CHECK(gd.groups[0].sigma2_hat == doctest::Approx(0.25));
    CHECK(gd.groups[1].sigma2_hat == doctest::Approx(0.1875));
    // s2_hat = (Q - T^2/n)/n with T = sum y - n_j tau,
    // Q = (1 - 2 tau) sum y + n_j tau^2.
    CHECK(gd.groups[0].s2_hat == doctest::Approx(0.125));
    CHECK(gd.groups[1].s2_hat == doctest::Approx(0.109375));
  }

  SUBCASE("random design") {
    auto gd = sb::group(ds);
    auto g = sb::estimate_g(gd, 0.5, sb::Design::Random);
    // g_j = (sum y - n_j tau)/n
    CHECK(g[0] == doctest::Approx(0.0));
    CHECK(g[1] == doctest::Approx(0.125));
  }

  SUBCASE("nondefault tau") {
    auto gd = sb::group(ds);
    auto g = sb::estimate_g(gd, 0.25, sb::Design::Random);
    // g_B = (3 - 4*0.25)/8 = 0.25
    CHECK(g[1] == doctest::Approx(0.25));
  }
}

TEST_CASE("clustered estimator reduces to iid under singleton clusters") {
  auto ds = two_cell_dataset();
  for (auto design : {sb::Design::Fixed, sb::Design::Random}) {
    auto gd1 = sb::group(ds);
    auto gd2 = sb::group(ds);
    auto g_iid = sb::estimate_g(gd1, 0.5, design);
    auto g_cl = sb::estimate_g_clustered(gd2, 0.5, design);
    REQUIRE(g_iid.size() == g_cl.size());
    for (std::size_t j = 0; j < g_iid.size(); ++j) {
      CHECK(g_cl[j] == doctest::Approx(g_iid[j]).epsilon(1e-15));
    }
  }
}

TEST_CASE("clustered estimator matches hand-computed values") {
  // Cell A: (y,w,c) = (1,1,c1),(1,2,c1),(0,1,c2),(0,2,c2)
  // Cell B: (1,1,c2),(1,1,c3),(1,2,c3),(0,2,c1); tau = 0.5, N = 12.
  auto ds = from_string(
      "y,w,cluster,x1\n"
      "1,1,c1,0\n1,2,c1,0\n0,1,c2,0\n0,2,c2,0\n"
      "1,1,c2,1\n1,1,c3,1\n1,2,c3,1\n0,2,c1,1\n");
  auto gd = sb::group(ds);
  auto g = sb::estimate_g_clustered(gd, 0.5, sb::Design::Fixed);
  REQUIRE(g.size() == 2);
  // ghat_j = sum_c Upsilon_{j,c} / N; A: (1.5 - 1.5)/12, B: (0.5+1.5-1)/12
  CHECK(g[0] == doctest::Approx(0.0));
  CHECK(g[1] == doctest::Approx(0.08333333333333333));
  const auto& a = gd.groups[0];
  REQUIRE(a.clusters.size() == 2);
  double gamma_sq = 0.0;
  for (const auto& c : a.clusters) gamma_sq += c.gamma * c.gamma;
  CHECK(gamma_sq == doctest::Approx(0.5));  // (3/6)^2 + (3/6)^2
  CHECK(gd.cluster_gamma.size() == 3);
}
