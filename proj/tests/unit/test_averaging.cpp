#include "doctest.h"

#include <cmath>

#include "sgdavg/averaging.hpp"
#include "sgdavg/verify.hpp"
#include "test_util.hpp"

using namespace sgdavg;
using sgdavg::testing::random_vector;
using sgdavg::testing::scalars;
using sgdavg::testing::vec;

namespace {

// Brute-force weighted mean of scalar iterates; independent of the library.
double weighted_mean(const std::vector<double> &x, const std::vector<double> &weight) {
  double num = 0.0, den = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    num += weight[t] * x[t];
    den += weight[t];
  }
  return num / den;
}

AveragerState fold(const std::vector<WeightVector> &iterates, const AveragingScheme &scheme) {
  AveragerState state = make_averager_state(static_cast<std::size_t>(iterates.front().size()));
  for (std::size_t t = 0; t < iterates.size(); ++t)
    absorb(state, iterates[t], t, scheme);
  return state;
}

} // namespace

TEST_CASE("rho values for the published schemes") {
  const AveragerState empty = make_averager_state(1);
  CHECK(rho(UniformAll{}, 3, empty) == 0.25);
  CHECK(rho(PolyWeight{1}, 0, empty) == 1.0);
  CHECK(rho(PolyDecay{1}, 3, empty) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(rho(NoAveraging{}, 17, empty) == 1.0);

  // W2 at t = 1: weights 1^2 and 2^2, so rho = 4 / (1 + 4).
  const double expected = 4.0 / (1.0 + 4.0);
  AveragerState state = make_averager_state(1);
  absorb(state, vec({0.0}), 0, PolyWeight{2});
  CHECK(rho(PolyWeight{2}, 1, state) == doctest::Approx(expected).epsilon(1e-15));
  CHECK(expected == 0.8);
  const auto two = scalars({0.0, 1.0});
  CHECK(closed_form_average(two, PolyWeight{2})[0] ==
        doctest::Approx(weighted_mean({0, 1}, {1, 4})).epsilon(1e-15));
}

TEST_CASE("weighted average W follows the online recurrence") {
  const auto w = scalars({0.0, 1.0, 2.0});
  AveragerState state = make_averager_state(1);
  const double expected[] = {0.0, 2.0 / 3.0, 4.0 / 3.0};
  for (std::size_t t = 0; t < 3; ++t) {
    state = update_average(state, w[t], t, PolyWeight{1});
    // 2/((T+1)(T+2)) sum_{s<=T} (s+1) w_s
    double direct = 0.0;
    for (std::size_t s = 0; s <= t; ++s)
      direct += static_cast<double>(s + 1) * w[s][0];
    direct *= 2.0 / static_cast<double>((t + 1) * (t + 2));
    CHECK(state.average[0] == doctest::Approx(direct).epsilon(1e-15));
    CHECK(state.average[0] == doctest::Approx(expected[t]).epsilon(1e-15));
  }
  CHECK(state.cumulative_weight == 6.0);
}

TEST_CASE("first iterate is reported as is for every scheme") {
  const WeightVector w0 = vec({1.5, -2.0, 7.0});
  for (const auto &scheme : all_test_schemes(10)) {
    AveragerState state = make_averager_state(3);
    absorb(state, w0, 0, scheme);
    CHECK(state.average == w0);
    CHECK(state.iterate_index == 1);
  }
}

TEST_CASE("doubling restarts the window at powers of two") {
  // w_0 = 0, then w_1..w_6 = 1..6; the last window opens at t = 4.
  const auto w = scalars({0, 1, 2, 3, 4, 5, 6});
  const AveragerState state = fold(w, Doubling{});
  CHECK(state.average[0] == doctest::Approx(weighted_mean({4, 5, 6}, {1, 1, 1})).epsilon(1e-15));
  CHECK(state.average[0] == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(state.epoch_start == 4);
  CHECK(state.cumulative_weight == 3.0);
  CHECK(closed_form_average(w, Doubling{})[0] == doctest::Approx(5.0).epsilon(1e-15));

  const AveragerState empty = make_averager_state(1);
  for (std::size_t t : {1, 2, 4, 8, 1024})
    CHECK(rho(Doubling{}, t, empty) == 1.0);
  CHECK(rho(Doubling{}, 6, empty) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("suffix averaging uses the second half of the run") {
  // w_0 = 0 then w_1..w_4 = 1..4 with horizon 4: mean of w_3, w_4.
  const auto w = scalars({0, 1, 2, 3, 4});
  const AveragerState state = fold(w, SuffixHalf{4});
  CHECK(state.average[0] == doctest::Approx(weighted_mean({3, 4}, {1, 1})).epsilon(1e-15));
  CHECK(state.average[0] == 3.5);
  CHECK(closed_form_average(w, SuffixHalf{4})[0] == 3.5);

  // Before the window opens the raw iterate is reported.
  AveragerState early = make_averager_state(1);
  for (std::size_t t = 0; t <= 2; ++t) {
    absorb(early, w[t], t, SuffixHalf{4});
    CHECK(early.average == w[t]);
  }
}

TEST_CASE("no averaging reports the latest iterate") {
  Rng rng = make_stream(5, 0);
  AveragerState state = make_averager_state(4);
  for (std::size_t t = 0; t < 50; ++t) {
    const WeightVector w = random_vector(rng, 4, -1, 1);
    absorb(state, w, t, NoAveraging{});
    REQUIRE(state.average == w);
  }
}

TEST_CASE("closed form examples") {
  CHECK(closed_form_average(scalars({0, 1, 2}), PolyWeight{1})[0] ==
        doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  for (const auto &scheme : all_test_schemes(3))
    CHECK(closed_form_average(scalars({7}), scheme)[0] == 7.0);
  CHECK(closed_form_average(scalars({0, 1, 2, 3}), UniformAll{})[0] == 1.5);
  CHECK_THROWS_AS(closed_form_average(std::vector<WeightVector>{}, UniformAll{}), Error);
}

TEST_CASE("polynomial-decay closed-form weights unroll the recurrence") {
  // eta integer: weights proportional to C(t + eta, eta).
  for (int eta : {0, 1, 2, 3}) {
    const auto w = closed_form_weights(12, PolyDecay{eta});
    long double total = 0.0L;
    for (auto x : w)
      total += x;
    CHECK(static_cast<double>(total) == doctest::Approx(1.0).epsilon(1e-15));
    for (std::size_t t = 0; t < w.size(); ++t) {
      double binom = 1.0;
      for (int j = 1; j <= eta; ++j)
        binom *= static_cast<double>(t + static_cast<std::size_t>(j)) / j;
      CHECK(static_cast<double>(w[t] / w[0]) == doctest::Approx(binom).epsilon(1e-13));
    }
  }
}

TEST_CASE("out of order iterates are rejected") {
  AveragerState state = make_averager_state(1);
  CHECK_THROWS_WITH_AS(absorb(state, vec({1}), 1, UniformAll{}), "iterate index mismatch", Error);
  absorb(state, vec({1}), 0, UniformAll{});
  CHECK_THROWS_WITH_AS(absorb(state, vec({1}), 0, UniformAll{}), "iterate index mismatch", Error);
  CHECK_THROWS_AS(absorb(state, vec({1, 2}), 1, UniformAll{}), Error);
}

TEST_CASE("online recurrence agrees with the closed form") {
  const AveragingAgreement agree = check_averaging_agreement(200, 200, 42);
  CHECK(agree.sequences == 200);
  CHECK(agree.max_relative_error <= 1e-10);
}

TEST_CASE("averages stay in the componentwise hull and rho in (0, 1]") {
  Rng rng = make_stream(9, 1);
  for (int seq = 0; seq < 100; ++seq) {
    const std::size_t length = 1 + uniform_index(rng, 150);
    for (const auto &scheme : all_test_schemes(1 + uniform_index(rng, 2 * length))) {
      AveragerState state = make_averager_state(3);
      WeightVector lo = WeightVector::Constant(3, INFINITY), hi = -lo;
      for (std::size_t t = 0; t < length; ++t) {
        const WeightVector w = random_vector(rng, 3, -10, 10);
        const double r = rho(scheme, t, state);
        REQUIRE(r > 0.0);
        REQUIRE(r <= 1.0);
        absorb(state, w, t, scheme);
        lo = lo.cwiseMin(w);
        hi = hi.cwiseMax(w);
        REQUIRE((state.average.array() >= lo.array() - 1e-12).all());
        REQUIRE((state.average.array() <= hi.array() + 1e-12).all());
      }
    }
  }
}

TEST_CASE("scheme equivalences") {
  Rng rng = make_stream(13, 2);
  for (int seq = 0; seq < 100; ++seq) {
    const std::size_t length = 1 + uniform_index(rng, 200);
    std::vector<WeightVector> iterates;
    for (std::size_t t = 0; t < length; ++t)
      iterates.push_back(random_vector(rng, 3, -10, 10));
    const auto uniform = fold(iterates, UniformAll{});
    const auto decay0 = fold(iterates, PolyDecay{0});
    const auto weighted = fold(iterates, PolyWeight{1});
    const auto decay1 = fold(iterates, PolyDecay{1});
    REQUIRE((uniform.average - decay0.average).norm() <= 1e-12);
    REQUIRE((weighted.average - decay1.average).norm() <= 1e-12);
  }
}

TEST_CASE("cumulative weight tracks the absorbed weight sum") {
  const auto w = scalars({1, 2, 3, 4, 5, 6, 7, 8, 9});
  CHECK(fold(w, PolyWeight{2}).cumulative_weight == 1 + 4 + 9 + 16 + 25 + 36 + 49 + 64 + 81);
  CHECK(fold(w, UniformAll{}).cumulative_weight == 9.0);
  CHECK(fold(w, Doubling{}).cumulative_weight == 1.0); // t = 8 reset
  CHECK(fold(w, SuffixHalf{8}).cumulative_weight == 4.0); // t = 5..8
  CHECK(fold(w, NoAveraging{}).cumulative_weight == 1.0);
  // C(t+2, 2) summed over t = 0..8 is C(11, 3).
  CHECK(fold(w, PolyDecay{2}).cumulative_weight == doctest::Approx(165.0).epsilon(1e-15));
}

TEST_CASE("scheme names") {
  for (const std::string name : {"0", "1", "0.5", "D", "W", "W2", "poly:3", "decay:0", "decay:4"})
    CHECK(scheme_name(parse_scheme(name, 100)) == name);
  CHECK(scheme_name(parse_scheme("poly:1", 1)) == "W");
  CHECK(std::get<SuffixHalf>(parse_scheme("0.5", 77)).horizon == 77);
  CHECK_THROWS_AS(parse_scheme("W3", 1), Error);
  CHECK_THROWS_AS(parse_scheme("poly:0", 1), Error);
  CHECK_THROWS_AS(parse_scheme("decay:-1", 1), Error);
  CHECK_THROWS_AS(parse_scheme("decay:1.5", 1), Error);
  CHECK_THROWS_AS(parse_scheme("0.5", 0), Error);
}
