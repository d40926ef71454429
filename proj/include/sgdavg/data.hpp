#ifndef SGDAVG_DATA_HPP_
#define SGDAVG_DATA_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sgdavg/core.hpp"

namespace sgdavg {

struct Feature {
  std::size_t index; // 0-based
  double value;

  bool operator==(const Feature &) const = default;
};

struct Sample {
  std::vector<Feature> features; // strictly increasing indices
  int label = 1;                 // -1 or +1

  bool operator==(const Sample &) const = default;
};

struct Dataset {
  std::vector<Sample> samples;
  std::size_t dimension = 0;
  bool standardized = false;
  bool bias_added = false;

  std::size_t size() const { return samples.size(); }
  bool operator==(const Dataset &) const = default;
};

class ParseError : public Error {
 public:
  ParseError(const std::string &what, std::size_t line)
      : Error(what + " at line " + std::to_string(line)), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Reads LIBSVM text: `<label> <idx>:<val> ...` with 1-based indices.
/// Labels 1, +1, -1 and 0 are accepted (0 maps to -1). The dimension is
/// max(min_dimension, 1 + largest index seen, 1).
Dataset parse_libsvm(std::istream &in, std::size_t min_dimension = 0);
Dataset parse_libsvm_string(const std::string &text, std::size_t min_dimension = 0);
Dataset load_libsvm(const std::string &path);

/// Canonical LIBSVM text: labels as `1`/`-1`, values in shortest
/// round-trip form, one sample per line.
void write_libsvm(const Dataset &dataset, std::ostream &out);
std::string to_libsvm_string(const Dataset &dataset);

/// Throws unless every structural invariant of Dataset holds.
void validate(const Dataset &dataset);

/// Nonzeros / (n p).
double density(const Dataset &dataset);

/// Per-feature zero-mean, unit population variance; zero-variance features
/// become 0. The result stores every coordinate explicitly.
Dataset standardize(const Dataset &dataset);

/// Appends a constant 1 feature at index p (regularized like the rest).
Dataset add_bias(const Dataset &dataset);

/// Density above which `preprocess` standardizes.
inline constexpr double kStandardizeDensity = 0.5;

/// Standardize when dense, then add the bias term.
Dataset preprocess(const Dataset &dataset);

struct SyntheticProblem {
  Dataset dataset;
  WeightVector reference; // unit ground-truth direction
};

/// Gaussian features, labels sign(<u, x>), each label flipped with
/// probability noise_fraction.
SyntheticProblem synthesize(std::size_t n, std::size_t p, std::uint64_t seed,
                            double noise_fraction);

/// Number of labels that disagree with sign(<reference, x>).
std::size_t count_disagreements(const Dataset &dataset, const WeightVector &reference);

double dot(const Sample &sample, const WeightVector &w);
double squared_norm(const Sample &sample);

} // namespace sgdavg

#endif // SGDAVG_DATA_HPP_
