#include "doctest.h"

#include <cmath>
#include <limits>

#include "sgdavg/solver.hpp"
#include "test_util.hpp"

using namespace sgdavg;
using sgdavg::testing::random_vector;
using sgdavg::testing::vec;

namespace {

// f(w) = (mu/2)||w||^2 with g = mu w + noise * N(0, I).
class QuadraticOracle : public SubgradientOracle {
 public:
  QuadraticOracle(double mu, double noise) : mu_(mu), noise_(noise) {}
  void draw(const WeightVector &w, Rng &rng, WeightVector &g) override {
    g = mu_ * w;
    if (noise_ > 0)
      for (Eigen::Index j = 0; j < g.size(); ++j)
        g[j] += noise_ * standard_normal(rng);
  }

 private:
  double mu_, noise_;
};

class NanOracle : public SubgradientOracle {
 public:
  explicit NanOracle(std::size_t at) : at_(at) {}
  void draw(const WeightVector &w, Rng &, WeightVector &g) override {
    g = w;
    if (++calls_ == at_)
      g[0] = std::numeric_limits<double>::infinity();
    else
      g.setOnes();
  }

 private:
  std::size_t at_, calls_ = 0;
};

ObjectiveFn quadratic(double mu) {
  return [mu](const WeightVector &w) { return 0.5 * mu * w.squaredNorm(); };
}

RunConfig config_for(const StepSchedule &schedule, std::size_t T) {
  RunConfig rc;
  rc.schedule = schedule;
  rc.schemes = {NoAveraging{}};
  rc.total_iterations = T;
  rc.n = 1;
  return rc;
}

} // namespace

TEST_CASE("evaluation times") {
  RunConfig rc;
  rc.total_iterations = 100;
  rc.n = 10;
  rc.evaluations_per_pass = 1;
  CHECK(evaluation_times(rc) == std::vector<std::size_t>{10, 20, 30, 40, 50, 60, 70, 80, 90, 100});
  rc.evaluations_per_pass = 2;
  std::vector<std::size_t> halves;
  for (std::size_t t = 5; t <= 100; t += 5)
    halves.push_back(t);
  CHECK(evaluation_times(rc) == halves);
  rc.total_iterations = 5;
  rc.n = 100;
  rc.evaluations_per_pass = 1;
  CHECK(evaluation_times(rc) == std::vector<std::size_t>{5});
  // More evaluations than steps per pass: no duplicates.
  rc.total_iterations = 6;
  rc.n = 3;
  rc.evaluations_per_pass = 7;
  CHECK(evaluation_times(rc) == std::vector<std::size_t>{1, 2, 3, 4, 5, 6});
}

TEST_CASE("one exact step reaches the minimizer of a quadratic") {
  const WeightVector w0 = vec({3.0, -4.0, 0.5});
  QuadraticOracle oracle(2.0, 0.0);
  // Proposed: w_1 = (1 - mu * 2/(2 mu)) w_0 = 0.
  const RunResult proposed = run(oracle, quadratic(2.0), config_for(make_proposed(2.0), 1), w0);
  CHECK(proposed.final_iterate == WeightVector::Zero(3));
  QuadraticOracle unit(1.0, 0.0);
  const RunResult classical = run(unit, quadratic(1.0), config_for(make_classical(1.0), 1), w0);
  CHECK(classical.final_iterate == WeightVector::Zero(3));
}

TEST_CASE("T = 1 without averaging reports w_1") {
  QuadraticOracle oracle(1.0, 0.5);
  const RunResult r = run(oracle, quadratic(1.0), config_for(make_classical(2.0), 1), vec({1, 1}));
  REQUIRE(r.records.size() == 1);
  CHECK(r.final_points.front() == r.final_iterate);
  CHECK(r.records[0].t == 1);
  CHECK(r.records[0].objective == 0.5 * r.final_iterate.squaredNorm());
  CHECK(r.records[0].iterate_norm == r.final_iterate.norm());
}

TEST_CASE("every scheme sees the same iterate stream") {
  Rng rng = make_stream(4, 4);
  const WeightVector w0 = random_vector(rng, 4, -2, 2);
  RunConfig rc = config_for(make_classical(0.5), 300);
  rc.schemes = {NoAveraging{}, UniformAll{}, PolyWeight{1}, Doubling{}, SuffixHalf{300}};
  rc.seed = 99;

  std::vector<WeightVector> iterates = {w0};
  QuadraticOracle oracle(0.5, 1.0);
  const RunResult r = run(oracle, quadratic(0.5), rc, w0,
                          [&](std::size_t, const WeightVector &w, const WeightVector &) {
                            iterates.push_back(w);
                          });
  REQUIRE(iterates.size() == 301);
  for (std::size_t s = 0; s < rc.schemes.size(); ++s) {
    const WeightVector expected = closed_form_average(iterates, rc.schemes[s]);
    CHECK((r.final_points[s] - expected).norm() <= 1e-12 * (1 + expected.norm()));
  }

  // The stream does not depend on which schemes are attached.
  RunConfig single = rc;
  single.schemes = {Doubling{}};
  QuadraticOracle again(0.5, 1.0);
  CHECK(run(again, quadratic(0.5), single, w0).final_iterate == r.final_iterate);
}

TEST_CASE("runs are deterministic") {
  RunConfig rc = config_for(make_proposed(1.0), 500);
  rc.schemes = {UniformAll{}, PolyWeight{2}};
  rc.n = 50;
  rc.evaluations_per_pass = 3;
  rc.seed = 1234;
  QuadraticOracle a(1.0, 2.0), b(1.0, 2.0);
  const RunResult ra = run(a, quadratic(1.0), rc, vec({1, 2, 3}));
  const RunResult rb = run(b, quadratic(1.0), rc, vec({1, 2, 3}));
  REQUIRE(ra.records.size() == rb.records.size());
  for (std::size_t i = 0; i < ra.records.size(); ++i) {
    CHECK(ra.records[i].objective == rb.records[i].objective);
    CHECK(ra.records[i].t == rb.records[i].t);
  }
  rc.seed = 1235;
  QuadraticOracle c(1.0, 2.0);
  CHECK(run(c, quadratic(1.0), rc, vec({1, 2, 3})).final_iterate != ra.final_iterate);
}

TEST_CASE("records are ordered and carry effective passes") {
  RunConfig rc = config_for(make_classical(1.0), 40);
  rc.schemes = {NoAveraging{}, UniformAll{}};
  rc.n = 8;
  rc.evaluations_per_pass = 2;
  QuadraticOracle oracle(1.0, 1.0);
  const RunResult r = run(oracle, quadratic(1.0), rc, vec({1}));
  REQUIRE(r.records.size() == 2 * 10);
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    CHECK(r.records[i].effective_passes == static_cast<double>(r.records[i].t) / 8.0);
    CHECK(r.records[i].scheme_name == (i % 2 == 0 ? "0" : "1"));
    CHECK(r.records[i].schedule_name == "classical");
    if (i >= 2)
      CHECK(r.records[i].t > r.records[i - 2].t);
  }
}

TEST_CASE("ball projection keeps iterates and averages inside") {
  RunConfig rc = config_for(make_general(0.1, 0.75, 2.0), 2000);
  rc.domain = make_ball(0.3);
  rc.schemes = {NoAveraging{}, UniformAll{}, PolyWeight{1}};
  rc.n = 100;
  QuadraticOracle oracle(0.1, 5.0);
  double worst = 0.0;
  const RunResult r = run(oracle, quadratic(0.1), rc, vec({0.1, 0.1, 0.1}),
                          [&](std::size_t, const WeightVector &w, const WeightVector &) {
                            worst = std::max(worst, w.norm());
                          });
  CHECK(worst <= 0.3 + 1e-12);
  for (const auto &rec : r.records)
    CHECK(rec.iterate_norm <= 0.3 + 1e-12);
}

TEST_CASE("zero-noise quadratic meets the weighted-average bound") {
  // B = mu ||w_0|| bounds ||g_t|| because ||w_t|| never grows.
  for (double mu : {0.05, 1.0, 3.0}) {
    const WeightVector w0 = vec({2.0, -1.0, 0.5});
    const double b2 = mu * mu * w0.squaredNorm();
    for (std::size_t T : {1, 2, 5, 50, 1000}) {
      RunConfig rc = config_for(make_proposed(mu), T);
      rc.schemes = {PolyWeight{1}};
      QuadraticOracle oracle(mu, 0.0);
      const RunResult r = run(oracle, quadratic(mu), rc, w0);
      const double gap = quadratic(mu)(r.final_points.front());
      CHECK(gap <= 2.0 * b2 / (mu * (static_cast<double>(T) + 1.0)));
    }
  }
}

TEST_CASE("divergence aborts with the offending step") {
  NanOracle oracle(7);
  try {
    run(oracle, quadratic(1.0), config_for(make_classical(1.0), 20), vec({1, 1}));
    FAIL("expected divergence");
  } catch (const DivergenceError &e) {
    CHECK(e.t() == 7);
  }
}

TEST_CASE("run validates its inputs") {
  QuadraticOracle oracle(1.0, 0.0);
  RunConfig rc = config_for(make_classical(1.0), 10);
  CHECK_THROWS_AS(run(oracle, quadratic(1.0), rc, vec({NAN})), Error);
  rc.domain = make_ball(1.0);
  CHECK_THROWS_AS(run(oracle, quadratic(1.0), rc, vec({3, 4})), Error);
  rc.domain = WholeSpace{};
  rc.schemes.clear();
  CHECK_THROWS_AS(run(oracle, quadratic(1.0), rc, vec({1})), Error);
  rc = config_for(make_classical(1.0), 0);
  CHECK_THROWS_AS(run(oracle, quadratic(1.0), rc, vec({1})), Error);
}
