#ifndef SGDAVG_SOLVER_HPP_
#define SGDAVG_SOLVER_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "sgdavg/averaging.hpp"
#include "sgdavg/core.hpp"
#include "sgdavg/random.hpp"

namespace sgdavg {

/// Source of stochastic subgradients g_t at w_{t-1}.
///
/// Contract: all randomness is drawn from `rng`, so the draw at step t is
/// independent of later steps; E[g | w] is a subgradient of the objective
/// at w; and E||g||^2 is bounded.
class SubgradientOracle {
 public:
  virtual ~SubgradientOracle() = default;
  virtual void draw(const WeightVector &w, Rng &rng, WeightVector &g) = 0;
};

/// Builds a fresh oracle per run so concurrent runs never share state.
using OracleFactory = std::function<std::unique_ptr<SubgradientOracle>()>;

using ObjectiveFn = std::function<double(const WeightVector &)>;

/// Called after every step t >= 1 with the new iterate and the g_t used.
using IterateObserver =
    std::function<void(std::size_t t, const WeightVector &w, const WeightVector &g)>;

struct RunConfig {
  StepSchedule schedule = Classical{1.0};
  std::vector<AveragingScheme> schemes;
  ProjectionDomain domain = WholeSpace{};
  std::size_t total_iterations = 1;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  std::size_t evaluations_per_pass = 1;
  std::size_t n = 1; // dataset size, for effective-pass accounting
};

struct RunRecord {
  std::string scheme_name;
  std::string schedule_name;
  std::uint64_t seed = 0;
  std::size_t t = 0;
  double effective_passes = 0.0;
  double objective = 0.0;
  double iterate_norm = 0.0; // norm of the reported point
};

struct RunResult {
  std::vector<RunRecord> records;
  WeightVector final_iterate;
  std::vector<WeightVector> final_points; // one per scheme, config order
};

class DivergenceError : public Error {
 public:
  DivergenceError(std::size_t t, const std::string &what)
      : Error(what + " at t=" + std::to_string(t)), t_(t) {}
  std::size_t t() const noexcept { return t_; }

 private:
  std::size_t t_;
};

/// Evenly spaced evaluation steps, evaluations_per_pass per n steps; the
/// final step T is always included.
std::vector<std::size_t> evaluation_times(const RunConfig &config);

/// Projected stochastic subgradient method
///
///   w_t = Proj(w_{t-1} - gamma_t g_t),  t = 1..T,
///
/// with one iterate stream shared by every averaging scheme in the config.
/// At each evaluation time the objective is evaluated at every scheme's
/// reported point; evaluation never touches the random stream.
RunResult run(SubgradientOracle &oracle, const ObjectiveFn &objective, const RunConfig &config,
              const WeightVector &w0, const IterateObserver &observer = {});

} // namespace sgdavg

#endif // SGDAVG_SOLVER_HPP_
