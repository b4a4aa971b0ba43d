#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "hyperanf/engine.hpp"
#include "hyperanf/graph.hpp"
#include "hyperanf/oracle.hpp"
#include "hyperanf/stats.hpp"

using namespace hyperanf;

namespace {
const std::vector<double> kPath3Nf{3.0, 5.0, 6.0};
}

TEST_CASE("cdf from nf") {
  SECTION("3-path") {
    const DistanceCdf cdf = cdf_from_nf(kPath3Nf);
    REQUIRE(cdf.values.size() == 3);
    CHECK(cdf.values[0] == Catch::Approx(0.5));
    CHECK(cdf.values[1] == Catch::Approx(5.0 / 6.0));
    CHECK(cdf.values[2] == 1.0);
  }
  SECTION("final value is exactly one") {
    const Graph g = gen_uniform_random(200, 4, 3);
    const DistanceCdf cdf = cdf_from_nf(exact_nf(g).as_doubles());
    CHECK(cdf.values.back() == 1.0);
    for (std::size_t t = 1; t < cdf.values.size(); ++t)
      CHECK(cdf.values[t] >= cdf.values[t - 1]);
  }
  SECTION("constant nf (arcless graph)") {
    const DistanceCdf cdf = cdf_from_nf(std::vector<double>{7.0, 7.0});
    CHECK(cdf.values == std::vector<double>{1.0, 1.0});
  }
  SECTION("errors") {
    CHECK_THROWS_AS(cdf_from_nf(std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(cdf_from_nf(std::vector<double>{0.0, 0.0}),
                    std::invalid_argument);
  }
}

TEST_CASE("distribution from cdf") {
  SECTION("3-path: hand-derived moments") {
    const auto dist = distribution_from_cdf(cdf_from_nf(kPath3Nf));
    REQUIRE(dist.density.size() == 3);
    CHECK(dist.density[0] == Catch::Approx(0.5));
    CHECK(dist.density[1] == Catch::Approx(1.0 / 3.0));
    CHECK(dist.density[2] == Catch::Approx(1.0 / 6.0));
    CHECK(dist.mean == Catch::Approx(2.0 / 3.0));
    CHECK(dist.variance == Catch::Approx(5.0 / 9.0));
    CHECK(dist.spid == Catch::Approx(5.0 / 6.0));
  }
  SECTION("all mass at distance zero") {
    const auto dist = distribution_from_cdf(cdf_from_nf(std::vector<double>{9.0}));
    CHECK(dist.mean == 0.0);
    CHECK(dist.variance == 0.0);
    CHECK(dist.spid == 0.0);
  }
  SECTION("density is non-negative and sums to one") {
    const Graph g = gen_uniform_random(300, 5, 8);
    const auto dist =
        distribution_from_cdf(cdf_from_nf(exact_nf(g).as_doubles()));
    double total = 0.0;
    for (double h : dist.density) {
      CHECK(h >= 0.0);
      total += h;
    }
    CHECK(std::abs(total - 1.0) <= 1e-12);
  }
}

TEST_CASE("effective diameter") {
  SECTION("3-path, alpha 0.9") {
    CHECK(effective_diameter(kPath3Nf, 0.9, false) == 2.0);
    CHECK(effective_diameter(kPath3Nf, 0.9, true) == Catch::Approx(1.4));
  }
  SECTION("alpha 1 reaches the diameter") {
    CHECK(effective_diameter(kPath3Nf, 1.0, false) == 2.0);
  }
  SECTION("alpha below H(0) gives 0") {
    CHECK(effective_diameter(kPath3Nf, 0.4, false) == 0.0);
    CHECK(effective_diameter(kPath3Nf, 0.4, true) == 0.0);
  }
  SECTION("plateau after the crossing: the smallest t wins") {
    const std::vector<double> flat{4.0, 8.0, 8.0, 8.0};
    CHECK(effective_diameter(flat, 0.9, false) == 1.0);
    CHECK(effective_diameter(flat, 0.9, true) == Catch::Approx(0.8));
  }
  SECTION("clique-path with k = 2l^2+5l+2: effective diameter is l+1") {
    for (std::uint64_t l : {3u, 5u}) {
      const std::uint64_t k = 2 * l * l + 5 * l + 2;
      const ExactNf nf = exact_nf(gen_clique_path(k, l));
      CHECK(effective_diameter(nf.as_doubles(), 0.9, false) ==
            static_cast<double>(l + 1));
      // truncating one step before stabilisation collapses it to 1
      std::vector<double> truncated(nf.as_doubles());
      truncated.pop_back();
      CHECK(effective_diameter(truncated, 0.9, false) == 1.0);
    }
  }
  SECTION("errors") {
    CHECK_THROWS_AS(effective_diameter(kPath3Nf, 0.0, false),
                    std::invalid_argument);
    CHECK_THROWS_AS(effective_diameter(kPath3Nf, 1.5, false),
                    std::invalid_argument);
  }
}

TEST_CASE("diameter interval") {
  SECTION("3-path, alpha 0.8, eps 0.05") {
    const auto interval = diameter_interval(kPath3Nf, 0.8, 0.05, 0.05);
    REQUIRE(interval.lo.has_value());
    REQUIRE(interval.hi.has_value());
    CHECK(*interval.lo == 0);
    CHECK(*interval.hi == 2);
    CHECK(interval.confidence == Catch::Approx(0.85));
  }
  SECTION("eps 0 brackets the effective diameter") {
    for (std::uint64_t seed : {1u, 4u, 9u}) {
      const Graph g = gen_uniform_random(300, 4, seed);
      const auto nf = exact_nf(g).as_doubles();
      const double ed = effective_diameter(nf, 0.9, false);
      const auto interval = diameter_interval(nf, 0.9, 0.0, 0.0);
      REQUIRE(interval.hi.has_value());
      CHECK(static_cast<double>(*interval.hi) == ed);
      const double lo =
          interval.lo ? static_cast<double>(*interval.lo) : -1.0;
      CHECK(lo < ed);
      CHECK(interval.confidence == 1.0);
    }
  }
  SECTION("infeasible upper threshold reports hi undefined") {
    const auto interval = diameter_interval(kPath3Nf, 0.9, 0.2, 0.01);
    CHECK_FALSE(interval.hi.has_value());
    CHECK_FALSE(interval.note.empty());
  }
  SECTION("errors") {
    CHECK_THROWS_AS(diameter_interval(kPath3Nf, 0.0, 0.1, 0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS(diameter_interval(kPath3Nf, 0.9, -0.1, 0.1),
                    std::invalid_argument);
  }
}

TEST_CASE("precision calculators reproduce the quoted numbers") {
  SECTION("eta from m") {
    CHECK(precision_from_m(256).eta == Catch::Approx(0.06625));
    CHECK(precision_from_m(128).eta == Catch::Approx(0.0937).epsilon(0.001));
    CHECK_THROWS_AS(precision_from_m(100), std::invalid_argument);
    CHECK_THROWS_AS(precision_from_m(8), std::invalid_argument);
  }
  SECTION("m from eta") {
    CHECK(precision_from_eta(0.0937).m == 128);
    CHECK(precision_from_eta(0.06625).m == 256);
    CHECK_THROWS_AS(precision_from_eta(1.5), std::invalid_argument);
  }
  SECTION("k-sigma confidences") {
    CHECK(PrecisionSpec::ksigma_confidence(2.0) == Catch::Approx(1.0 - 4.0 / 36.0));
    CHECK(PrecisionSpec::ksigma_confidence(3.0) == Catch::Approx(1.0 - 4.0 / 81.0));
    CHECK(precision_from_m(128).ksigma_error(2.0) ==
          Catch::Approx(2.0 * 0.0937).epsilon(0.001));
  }
  SECTION("chebyshev and vp confidences") {
    const auto spec = precision_from_m(256);
    CHECK(spec.chebyshev_confidence(0.1) ==
          Catch::Approx(1.0 - spec.eta * spec.eta / 0.01));
    CHECK(spec.vp_confidence(0.1) ==
          Catch::Approx(1.0 - 4.0 * spec.eta * spec.eta / 0.09));
    CHECK(spec.chebyshev_confidence(0.001) == 0.0);
  }
  SECTION("memory for a billion nodes at eta = 9.37%") {
    const auto spec = precision_from_eta(0.0937);
    CHECK(spec.memory_gib(1'000'000'000) == Catch::Approx(74.5).epsilon(0.001));
  }
  SECTION("from epsilon and delta") {
    const auto spec = precision_from_error(0.1, 0.1);
    CHECK(spec.eta <= 0.1 * std::sqrt(0.1) + 1e-12);
    CHECK(spec.chebyshev_confidence(0.1) >= 0.9);
    CHECK(spec.epsilon.value() == 0.1);
  }
}

TEST_CASE("aggregate runs") {
  const Graph g = gen_uniform_random(200, 6, 31);
  SECTION("identical runs have zero dispersion") {
    const NfEstimate run = [&] {
      EngineConfig cfg;
      cfg.bucket_bits = 6;
      cfg.seed = 5;
      return estimate_nf(g, cfg);
    }();
    const auto report = aggregate_runs({run, run, run});
    CHECK(report.stddev.avg_distance == 0.0);
    CHECK(report.stddev.spid == 0.0);
    CHECK(report.stddev.ied == 0.0);
    CHECK(report.mean.spid == Catch::Approx(report.per_run[0].spid));
    REQUIRE(report.mean_nf.size() == run.values.size());
    for (std::size_t t = 0; t < run.values.size(); ++t)
      CHECK(report.mean_nf[t] == Catch::Approx(run.values[t]));
  }
  SECTION("mismatched runs are rejected") {
    EngineConfig cfg;
    cfg.bucket_bits = 6;
    const NfEstimate a = estimate_nf(g, cfg);
    cfg.bucket_bits = 7;
    const NfEstimate b = estimate_nf(g, cfg);
    CHECK_THROWS_AS(aggregate_runs({a, b}), std::invalid_argument);
    CHECK_THROWS_AS(aggregate_runs({a}), std::invalid_argument);
  }
  SECTION("mean over seeds approaches the exact spid") {
    std::vector<NfEstimate> runs;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      EngineConfig cfg;
      cfg.bucket_bits = 7;
      cfg.seed = 100 + seed;
      runs.push_back(estimate_nf(g, cfg));
    }
    const auto report = aggregate_runs(runs);
    const auto exact_dist =
        distribution_from_cdf(cdf_from_nf(exact_nf(g).as_doubles()));
    CHECK(report.mean.spid ==
          Catch::Approx(exact_dist.spid).margin(0.1 * exact_dist.spid + 0.02));
    CHECK(report.stddev.spid > 0.0);
  }
}

TEST_CASE("estimated cdf error is at most doubled nf error, per run") {
  // For each fixed run: if eps = max_t |Nhat/N - 1| then every cdf point is
  // within 2 eps/(1-eps) of the exact cdf, and every density point within
  // twice the max cdf deviation.
  for (std::uint64_t seed : {3u, 7u, 11u, 19u}) {
    const Graph g = gen_uniform_random(400, 5, seed);
    const ExactNf exact = exact_nf(g);
    EngineConfig cfg;
    cfg.bucket_bits = 7;
    cfg.seed = seed * 13 + 1;
    const NfEstimate est = estimate_nf(g, cfg);

    const auto pad = [&](std::size_t t) {
      return t < est.values.size() ? est.values[t] : est.values.back();
    };
    double eps = 0.0;
    for (std::size_t t = 0; t < exact.values.size(); ++t)
      eps = std::max(eps,
                     std::abs(pad(t) / static_cast<double>(exact.values[t]) - 1.0));

    std::vector<double> padded(exact.values.size());
    for (std::size_t t = 0; t < padded.size(); ++t) padded[t] = pad(t);
    const DistanceCdf est_cdf = cdf_from_nf(padded);
    const DistanceCdf exact_cdf = cdf_from_nf(exact.as_doubles());
    double cdf_err = 0.0;
    for (std::size_t t = 0; t < padded.size(); ++t)
      cdf_err = std::max(cdf_err,
                         std::abs(est_cdf.values[t] / exact_cdf.values[t] - 1.0));
    CHECK(cdf_err <= 2.0 * eps / (1.0 - eps) + 1e-12);

    const auto est_dist = distribution_from_cdf(est_cdf);
    const auto exact_dist = distribution_from_cdf(exact_cdf);
    for (std::size_t t = 0; t < padded.size(); ++t) {
      CHECK(std::abs(est_dist.density[t] - exact_dist.density[t]) <=
            2.0 * cdf_err + 1e-12);
    }
  }
}

TEST_CASE("spid separates the two fixture families") {
  // Frozen oracle values; recomputed here to keep the constants honest.
  const auto clique_dist = distribution_from_cdf(
      cdf_from_nf(exact_nf(gen_clique_path(252, 10)).as_doubles()));
  CHECK(clique_dist.spid == Catch::Approx(5.025234).epsilon(1e-4));
  CHECK(clique_dist.spid > 1.0);

  const auto random_dist = distribution_from_cdf(
      cdf_from_nf(exact_nf(gen_uniform_random(1000, 20, 2020)).as_doubles()));
  CHECK(random_dist.spid == Catch::Approx(0.106445).epsilon(1e-3));
  CHECK(random_dist.spid < 1.0);
}
