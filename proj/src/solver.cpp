#include "sgdavg/solver.hpp"

#include <cmath>

namespace sgdavg {

std::vector<std::size_t> evaluation_times(const RunConfig &config) {
  const std::size_t total = config.total_iterations;
  const std::size_t n = std::max<std::size_t>(config.n, 1);
  const std::size_t per_pass = std::max<std::size_t>(config.evaluations_per_pass, 1);

  std::vector<std::size_t> times;
  for (std::size_t k = 1;; ++k) {
    const std::size_t t = k * n / per_pass;
    if (t >= total)
      break;
    if (t > 0 && (times.empty() || times.back() != t))
      times.push_back(t);
  }
  if (total > 0)
    times.push_back(total);
  return times;
}

RunResult run(SubgradientOracle &oracle, const ObjectiveFn &objective, const RunConfig &config,
              const WeightVector &w0, const IterateObserver &observer) {
  if (config.total_iterations == 0)
    throw Error("total_iterations must be at least 1");
  if (config.n == 0)
    throw Error("dataset size n must be at least 1");
  if (config.schemes.empty())
    throw Error("at least one averaging scheme is required");
  if (!objective)
    throw Error("objective evaluator is required");
  if (!w0.allFinite())
    throw Error("non-finite vector");
  if (project(config.domain, w0) != w0)
    throw Error("initial point must lie in the projection domain");

  const std::string schedule = schedule_name(config.schedule);
  const auto times = evaluation_times(config);
  auto next_eval = times.begin();

  Rng rng = make_stream(config.seed, config.stream_id);
  WeightVector w = w0;
  WeightVector g = WeightVector::Zero(w0.size());

  std::vector<AveragerState> states(config.schemes.size(),
                                    make_averager_state(static_cast<std::size_t>(w0.size())));
  std::vector<std::string> names;
  for (std::size_t s = 0; s < config.schemes.size(); ++s) {
    absorb(states[s], w, 0, config.schemes[s]);
    names.push_back(scheme_name(config.schemes[s]));
  }

  RunResult result;
  result.records.reserve(times.size() * config.schemes.size());
  for (std::size_t t = 1; t <= config.total_iterations; ++t) {
    oracle.draw(w, rng, g);
    if (!g.allFinite())
      throw DivergenceError(t, "non-finite subgradient");
    w -= step_size(config.schedule, t) * g;
    if (!w.allFinite())
      throw DivergenceError(t, "non-finite iterate");
    project_inplace(config.domain, w);

    for (std::size_t s = 0; s < states.size(); ++s)
      absorb(states[s], w, t, config.schemes[s]);
    if (observer)
      observer(t, w, g);

    if (next_eval != times.end() && *next_eval == t) {
      ++next_eval;
      for (std::size_t s = 0; s < states.size(); ++s) {
        const WeightVector &point = states[s].average;
        const double value = objective(point);
        if (!std::isfinite(value))
          throw DivergenceError(t, "non-finite objective");
        result.records.push_back(RunRecord{names[s], schedule, config.seed, t,
                                           static_cast<double>(t) / static_cast<double>(config.n),
                                           value, point.norm()});
      }
    }
  }

  result.final_iterate = w;
  for (const auto &state : states)
    result.final_points.push_back(state.average);
  return result;
}

} // namespace sgdavg
