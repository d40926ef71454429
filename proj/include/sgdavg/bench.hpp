#ifndef SGDAVG_BENCH_HPP_
#define SGDAVG_BENCH_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sgdavg/data.hpp"
#include "sgdavg/solver.hpp"
#include "sgdavg/svm.hpp"

namespace sgdavg {

inline constexpr const char *kCsvHeader =
    "run_id,scheme,schedule,seed,t,effective_passes,objective,iterate_norm";

struct SyntheticSpec {
  std::size_t n = 1000;
  std::size_t p = 20;
  double noise = 0.1;
  std::uint64_t seed = 0; // data seed, independent of the run seeds
};

/// Parses `n=<n>,p=<p>,noise=<f>[,seed=<s>]`.
SyntheticSpec parse_synthetic_spec(const std::string &text);

using DataSource = std::variant<std::string, SyntheticSpec>;

/// One solver configuration of the grid: a schedule and the schemes that
/// share its iterate stream.
struct RunPlan {
  std::string schedule;
  std::vector<std::string> schemes;
};

struct ExperimentConfig {
  DataSource data = SyntheticSpec{};
  std::optional<double> lambda; // empty means 1/n
  std::vector<std::string> schemes = {"0", "1", "0.5", "D", "W", "W2"};
  // Empty: classical steps for every scheme plus W with proposed steps.
  std::vector<std::string> schedules;
  std::size_t passes = 50;
  std::vector<std::uint64_t> seeds = {0};
  std::size_t evaluations_per_pass = 1;
  SamplingStrategy sampling = SamplingStrategy::WithReplacement;
  std::size_t threads = 1;
  std::string output;
};

/// Checks the config without loading data. Throws Error.
void validate(const ExperimentConfig &config);

std::vector<RunPlan> experiment_plan(const ExperimentConfig &config);

/// Loads or synthesizes the data, then standardizes dense features and
/// appends the bias.
Dataset load_dataset(const DataSource &source);

double resolve_lambda(const std::optional<double> &lambda, const Dataset &dataset);

struct GridRun {
  std::size_t run_id = 0;
  std::size_t plan_index = 0;
  std::uint64_t seed = 0;
  RunResult result;
};

struct ExperimentResult {
  double lambda = 0.0;
  std::size_t n = 0;
  std::size_t dimension = 0;
  std::vector<GridRun> runs;          // ordered by run_id
  std::vector<RunRecord> records;     // canonical CSV order
  std::vector<std::size_t> record_run_ids;
};

/// Runs every (plan, seed) pair, possibly on several threads. Output is
/// independent of the thread count.
ExperimentResult run_grid(const Dataset &dataset, const ExperimentConfig &config);

void write_csv(const ExperimentResult &result, std::ostream &out);

/// Full pipeline: load, run, write the CSV to config.output.
ExperimentResult run_experiment(const ExperimentConfig &config);

struct FStarEstimate {
  double value = 0.0;
  std::string method;
  std::size_t iterations = 0; // per seed
  WeightVector point;         // argmin of the observed objectives
};

inline constexpr std::size_t kMinFStarMultiplier = 10;
inline constexpr std::size_t kFStarSeeds = 3;

/// Minimum full-batch objective seen by W-averaged runs with the proposed
/// schedule, over kFStarSeeds seeds and budget_multiplier * base_passes
/// passes each.
FStarEstimate estimate_fstar(const OracleFactory &make_oracle,
                             const ObjectiveFn &objective, std::size_t n, std::size_t dimension,
                             double mu, std::size_t base_passes, std::size_t budget_multiplier,
                             std::size_t evaluations_per_pass = 1);

FStarEstimate estimate_fstar(const Dataset &dataset, double lambda, std::size_t base_passes,
                             std::size_t budget_multiplier, std::size_t evaluations_per_pass = 1,
                             SamplingStrategy sampling = SamplingStrategy::WithReplacement);

/// Lowers the estimate to the smallest recorded objective when a run got
/// below it.
FStarEstimate lower_envelope(FStarEstimate estimate, const std::vector<RunRecord> &records);

std::string fstar_to_json(const FStarEstimate &estimate, double lambda, std::size_t n);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyConfig {
  std::size_t identity_sequences = 200;
  std::size_t identity_max_length = 50;
  std::size_t averaging_sequences = 200;
  std::size_t averaging_max_length = 200;
  SyntheticSpec data{200, 5, 0.1, 7};
  std::size_t passes = 20;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::uint64_t seed = 0;
};

/// Telescoping identity, iterate norm bound, the expected-gap bound of the
/// weighted average, and online/closed-form averaging agreement.
std::vector<CheckResult> verify_suite(const VerifyConfig &config);

} // namespace sgdavg

#endif // SGDAVG_BENCH_HPP_
