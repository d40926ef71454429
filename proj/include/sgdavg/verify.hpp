#ifndef SGDAVG_VERIFY_HPP_
#define SGDAVG_VERIFY_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sgdavg/averaging.hpp"
#include "sgdavg/core.hpp"
#include "sgdavg/data.hpp"
#include "sgdavg/svm.hpp"

namespace sgdavg {

// Runtime checks of the analysis behind the weighted average. Each returns
// the measured quantities so callers can choose how to report them.

/// sum_{t=1}^{T} [t(t-1) a_{t-1} - t(t+1) a_t] evaluated term by term;
/// a[0..T].
double telescoping_sum(std::span<const double> a);

/// Closed form of the same sum: -T(T+1) a_T.
double telescoping_closed_form(std::span<const double> a);

/// |sum - closed form| / max(1, |closed form|).
double telescoping_error(std::span<const double> a);

struct NormBoundCheck {
  double feature_bound = 0.0;   // L = max_i ||x_i||
  double iterate_bound = 0.0;   // L / lambda
  double max_iterate_norm = 0.0;
  double mean_squared_subgradient = 0.0;
  double subgradient_bound = 0.0; // 4 L^2
  std::size_t steps = 0;

  bool holds(double slack = 1e-9) const {
    return max_iterate_norm <= iterate_bound + slack &&
           mean_squared_subgradient <= subgradient_bound;
  }
};

/// Runs the SVM oracle from w_0 = 0 and tracks ||w_t|| and ||g_t||^2 at
/// every step. Requires lambda * gamma_t <= 1 for the bound to apply.
NormBoundCheck check_norm_bound(const Dataset &dataset, double lambda,
                                const StepSchedule &schedule, std::size_t total_iterations,
                                std::uint64_t seed,
                                SamplingStrategy sampling = SamplingStrategy::WithReplacement);

struct AveragingAgreement {
  std::size_t sequences = 0;
  double max_relative_error = 0.0;
  std::string worst_scheme;
};

/// Every scheme in `schemes` plus random iterate sequences (length <=
/// max_length, dimension <= 5, entries in [-10, 10]): online recurrence vs
/// closed_form_average, error relative to 1 + ||closed form||.
AveragingAgreement check_averaging_agreement(std::size_t sequences, std::size_t max_length,
                                             std::uint64_t seed);

/// Schemes exercised by check_averaging_agreement for a given horizon.
std::vector<AveragingScheme> all_test_schemes(std::size_t horizon);

} // namespace sgdavg

#endif // SGDAVG_VERIFY_HPP_
