#include "sgdavg/svm.hpp"

#include <cmath>
#include <numeric>

namespace sgdavg {

namespace {

void check_dimension(const WeightVector &w, const Dataset &dataset) {
  if (static_cast<std::size_t>(w.size()) != dataset.dimension)
    throw Error("weight dimension " + std::to_string(w.size()) +
                " does not match dataset dimension " + std::to_string(dataset.dimension));
}

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

} // namespace

SvmObjective::SvmObjective(const Dataset &dataset, double lambda)
    : dataset_(&dataset), lambda_(lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw Error("regularization lambda must be non-negative and finite");
  if (dataset.samples.empty())
    throw Error("dataset contains no samples");
}

double svm_objective(const WeightVector &w, const SvmObjective &objective) {
  const Dataset &data = objective.dataset();
  check_dimension(w, data);
  CompensatedSum hinge;
  for (const auto &sample : data.samples)
    hinge.add(std::max(0.0, 1.0 - sample.label * dot(sample, w)));
  return 0.5 * objective.lambda() * w.squaredNorm() +
         hinge.value() / static_cast<double>(data.size());
}

void svm_stochastic_subgradient(const WeightVector &w, const Sample &sample, double lambda,
                                WeightVector &out) {
  out = lambda * w;
  if (sample.label * dot(sample, w) < 1.0)
    for (const auto &f : sample.features)
      out[static_cast<Eigen::Index>(f.index)] -= sample.label * f.value;
}

WeightVector svm_stochastic_subgradient(const WeightVector &w, const Sample &sample,
                                        double lambda) {
  WeightVector g;
  svm_stochastic_subgradient(w, sample, lambda, g);
  return g;
}

WeightVector svm_full_subgradient(const WeightVector &w, const SvmObjective &objective) {
  const Dataset &data = objective.dataset();
  check_dimension(w, data);
  const auto p = static_cast<Eigen::Index>(data.dimension);
  std::vector<CompensatedSum> acc(data.dimension);
  for (const auto &sample : data.samples)
    if (sample.label * dot(sample, w) < 1.0)
      for (const auto &f : sample.features)
        acc[f.index].add(-sample.label * f.value);
  WeightVector g(p);
  const auto n = static_cast<double>(data.size());
  for (Eigen::Index j = 0; j < p; ++j)
    g[j] = objective.lambda() * w[j] + acc[static_cast<std::size_t>(j)].value() / n;
  return g;
}

namespace {

double mean_squared_norm(const Dataset &dataset) {
  if (dataset.samples.empty())
    throw Error("dataset contains no samples");
  CompensatedSum total;
  for (const auto &sample : dataset.samples)
    total.add(squared_norm(sample));
  return total.value() / static_cast<double>(dataset.size());
}

} // namespace

double variance_bound(const Dataset &dataset, double /*lambda*/) {
  constexpr double L = SvmObjective::kHingeLipschitz;
  return 4.0 * L * L * mean_squared_norm(dataset);
}

double variance_bound_ball(const Dataset &dataset, double lambda, double radius) {
  constexpr double L = SvmObjective::kHingeLipschitz;
  const double root = L * std::sqrt(mean_squared_norm(dataset)) + lambda * radius;
  return root * root;
}

double max_feature_norm(const Dataset &dataset) {
  double best = 0.0;
  for (const auto &sample : dataset.samples)
    best = std::max(best, squared_norm(sample));
  return std::sqrt(best);
}

SamplingStrategy parse_sampling(const std::string &name) {
  if (name == "with_replacement")
    return SamplingStrategy::WithReplacement;
  if (name == "permuted_passes")
    return SamplingStrategy::PermutedPasses;
  throw Error("unknown sampling strategy '" + name + "'");
}

std::string sampling_name(SamplingStrategy strategy) {
  return strategy == SamplingStrategy::WithReplacement ? "with_replacement" : "permuted_passes";
}

std::size_t sample_index(Rng &rng, std::size_t n) {
  if (n == 0)
    throw Error("cannot sample from an empty index set");
  return static_cast<std::size_t>(uniform_index(rng, n));
}

IndexSampler::IndexSampler(std::size_t n, SamplingStrategy strategy)
    : n_(n), strategy_(strategy), cursor_(n) {
  if (n == 0)
    throw Error("cannot sample from an empty index set");
  if (strategy_ == SamplingStrategy::PermutedPasses) {
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
  }
}

std::size_t IndexSampler::next(Rng &rng) {
  if (strategy_ == SamplingStrategy::WithReplacement)
    return sample_index(rng, n_);
  if (cursor_ == n_) {
    // Fisher-Yates
    for (std::size_t i = n_; i > 1; --i)
      std::swap(order_[i - 1], order_[static_cast<std::size_t>(uniform_index(rng, i))]);
    cursor_ = 0;
  }
  return order_[cursor_++];
}

SvmOracle::SvmOracle(const SvmObjective &objective, SamplingStrategy strategy)
    : objective_(&objective), sampler_(objective.dataset().size(), strategy) {}

void SvmOracle::draw(const WeightVector &w, Rng &rng, WeightVector &g) {
  const Dataset &data = objective_->dataset();
  check_dimension(w, data);
  svm_stochastic_subgradient(w, data.samples[sampler_.next(rng)], objective_->lambda(), g);
}

} // namespace sgdavg
