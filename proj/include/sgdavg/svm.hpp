#ifndef SGDAVG_SVM_HPP_
#define SGDAVG_SVM_HPP_

#include <cstddef>
#include <vector>

#include "sgdavg/core.hpp"
#include "sgdavg/data.hpp"
#include "sgdavg/random.hpp"
#include "sgdavg/solver.hpp"

namespace sgdavg {

/// (lambda/2)||w||^2 + (1/n) sum_i max{0, 1 - y_i <w, x_i>}.
/// Holds a reference to the dataset, which must outlive it.
class SvmObjective {
 public:
  SvmObjective(const Dataset &dataset, double lambda);

  const Dataset &dataset() const { return *dataset_; }
  double lambda() const { return lambda_; }

  /// Lipschitz constant of the hinge loss in its scalar argument.
  static constexpr double kHingeLipschitz = 1.0;

 private:
  const Dataset *dataset_;
  double lambda_;
};

/// Full-batch objective value, hinge terms summed with Neumaier compensation.
double svm_objective(const WeightVector &w, const SvmObjective &objective);

/// lambda w - y x when y<w,x> < 1, lambda w otherwise (margin exactly 1
/// takes the zero hinge subgradient).
WeightVector svm_stochastic_subgradient(const WeightVector &w, const Sample &sample,
                                        double lambda);
void svm_stochastic_subgradient(const WeightVector &w, const Sample &sample, double lambda,
                                WeightVector &out);

/// Mean of the per-sample subgradients: a subgradient of the full objective.
WeightVector svm_full_subgradient(const WeightVector &w, const SvmObjective &objective);

/// B^2 = 4 L^2 E||x||^2 with L = 1 and the empirical mean over samples.
double variance_bound(const Dataset &dataset, double lambda);

/// B^2 = (L sqrt(E||x||^2) + lambda R)^2 for iterates confined to a ball of
/// radius R.
double variance_bound_ball(const Dataset &dataset, double lambda, double radius);

/// max_i ||x_i||.
double max_feature_norm(const Dataset &dataset);

enum class SamplingStrategy { WithReplacement, PermutedPasses };

SamplingStrategy parse_sampling(const std::string &name);
std::string sampling_name(SamplingStrategy strategy);

/// Index source over {0..n-1}. WithReplacement draws i.i.d. uniform
/// indices; PermutedPasses walks a fresh uniform permutation each pass.
class IndexSampler {
 public:
  IndexSampler(std::size_t n, SamplingStrategy strategy);
  std::size_t next(Rng &rng);

 private:
  std::size_t n_;
  SamplingStrategy strategy_;
  std::vector<std::size_t> order_;
  std::size_t cursor_;
};

std::size_t sample_index(Rng &rng, std::size_t n);

class SvmOracle : public SubgradientOracle {
 public:
  SvmOracle(const SvmObjective &objective, SamplingStrategy strategy);
  void draw(const WeightVector &w, Rng &rng, WeightVector &g) override;

 private:
  const SvmObjective *objective_;
  IndexSampler sampler_;
};

} // namespace sgdavg

#endif // SGDAVG_SVM_HPP_
