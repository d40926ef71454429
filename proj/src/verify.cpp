#include "sgdavg/verify.hpp"

#include <cmath>

#include "sgdavg/random.hpp"
#include "sgdavg/solver.hpp"

namespace sgdavg {

double telescoping_sum(std::span<const double> a) {
  if (a.empty())
    throw Error("telescoping sum needs a_0");
  long double acc = 0.0L;
  for (std::size_t t = 1; t < a.size(); ++t) {
    const auto tl = static_cast<long double>(t);
    acc += tl * (tl - 1.0L) * a[t - 1] - tl * (tl + 1.0L) * a[t];
  }
  return static_cast<double>(acc);
}

double telescoping_closed_form(std::span<const double> a) {
  if (a.empty())
    throw Error("telescoping sum needs a_0");
  const auto T = static_cast<double>(a.size() - 1);
  return -T * (T + 1.0) * a.back();
}

double telescoping_error(std::span<const double> a) {
  const double closed = telescoping_closed_form(a);
  return std::abs(telescoping_sum(a) - closed) / std::max(1.0, std::abs(closed));
}

NormBoundCheck check_norm_bound(const Dataset &dataset, double lambda,
                                const StepSchedule &schedule, std::size_t total_iterations,
                                std::uint64_t seed, SamplingStrategy sampling) {
  const SvmObjective objective(dataset, lambda);
  SvmOracle oracle(objective, sampling);

  NormBoundCheck check;
  check.feature_bound = max_feature_norm(dataset);
  check.iterate_bound = check.feature_bound / lambda;
  check.subgradient_bound = 4.0 * check.feature_bound * check.feature_bound;

  RunConfig config;
  config.schedule = schedule;
  config.schemes = {NoAveraging{}};
  config.total_iterations = total_iterations;
  config.seed = seed;
  config.n = dataset.size();
  config.evaluations_per_pass = 1;

  long double sum_sq = 0.0L;
  const auto observer = [&](std::size_t, const WeightVector &w, const WeightVector &g) {
    check.max_iterate_norm = std::max(check.max_iterate_norm, w.norm());
    sum_sq += g.squaredNorm();
    ++check.steps;
  };
  const WeightVector w0 = WeightVector::Zero(static_cast<Eigen::Index>(dataset.dimension));
  run(oracle, [](const WeightVector &) { return 0.0; }, config, w0, observer);
  check.mean_squared_subgradient = static_cast<double>(sum_sq / check.steps);
  return check;
}

std::vector<AveragingScheme> all_test_schemes(std::size_t horizon) {
  return {NoAveraging{}, UniformAll{},   SuffixHalf{horizon}, Doubling{},
          PolyWeight{1}, PolyWeight{2},  PolyWeight{3},       PolyDecay{0},
          PolyDecay{1},  PolyDecay{2},   PolyDecay{5}};
}

AveragingAgreement check_averaging_agreement(std::size_t sequences, std::size_t max_length,
                                             std::uint64_t seed) {
  Rng rng = make_stream(seed, 0xa7e);
  AveragingAgreement result;
  for (std::size_t s = 0; s < sequences; ++s) {
    const std::size_t length = 1 + static_cast<std::size_t>(uniform_index(rng, max_length));
    const auto dim = static_cast<Eigen::Index>(1 + uniform_index(rng, 5));
    std::vector<WeightVector> iterates(length, WeightVector(dim));
    for (auto &w : iterates)
      for (Eigen::Index j = 0; j < dim; ++j)
        w[j] = -10.0 + 20.0 * uniform01(rng);

    // Horizons both shorter and longer than the sequence.
    const std::size_t horizon = 1 + static_cast<std::size_t>(uniform_index(rng, 2 * length));
    for (const auto &scheme : all_test_schemes(horizon)) {
      AveragerState state = make_averager_state(static_cast<std::size_t>(dim));
      for (std::size_t t = 0; t < length; ++t)
        absorb(state, iterates[t], t, scheme);
      const WeightVector expected = closed_form_average(iterates, scheme);
      const double err = (state.average - expected).norm() / (1.0 + expected.norm());
      if (err > result.max_relative_error || result.worst_scheme.empty()) {
        result.max_relative_error = std::max(result.max_relative_error, err);
        result.worst_scheme = scheme_name(scheme);
      }
    }
    ++result.sequences;
  }
  return result;
}

} // namespace sgdavg
