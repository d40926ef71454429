#include "sgdavg/data.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "sgdavg/random.hpp"

namespace sgdavg {

namespace {

constexpr std::uint64_t kSynthesisStream = 0x5e7d;

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i]))
      ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_space(line[i]))
      ++i;
    if (i > start)
      tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

int parse_label(std::string_view token, std::size_t line) {
  double value = 0.0;
  try {
    value = parse_double(token, "label");
  } catch (const Error &) {
    throw ParseError("bad label", line);
  }
  if (value == 1.0)
    return 1;
  if (value == -1.0 || value == 0.0)
    return -1;
  throw ParseError("unknown label '" + std::string(token) + "'", line);
}

Feature parse_feature(std::string_view token, std::size_t line) {
  const auto colon = token.find(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == token.size())
    throw ParseError("malformed feature token '" + std::string(token) + "'", line);

  const std::string_view idx_text = token.substr(0, colon);
  std::size_t index = 0;
  const auto [idx_end, idx_ec] =
      std::from_chars(idx_text.data(), idx_text.data() + idx_text.size(), index);
  if (idx_ec != std::errc() || idx_end != idx_text.data() + idx_text.size() || index == 0)
    throw ParseError("bad feature index '" + std::string(idx_text) + "'", line);

  double value = 0.0;
  try {
    value = parse_double(token.substr(colon + 1), "feature value");
  } catch (const Error &) {
    throw ParseError("bad feature value '" + std::string(token.substr(colon + 1)) + "'", line);
  }
  if (!std::isfinite(value))
    throw ParseError("non-finite feature value", line);
  return Feature{index - 1, value};
}

} // namespace

Dataset parse_libsvm(std::istream &in, std::size_t min_dimension) {
  Dataset dataset;
  std::size_t max_index_plus_one = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = split_tokens(line);
    if (tokens.empty())
      continue;
    Sample sample;
    sample.label = parse_label(tokens.front(), line_no);
    for (std::size_t k = 1; k < tokens.size(); ++k) {
      const Feature f = parse_feature(tokens[k], line_no);
      if (!sample.features.empty() && f.index <= sample.features.back().index)
        throw ParseError("non-increasing feature index", line_no);
      sample.features.push_back(f);
    }
    if (!sample.features.empty())
      max_index_plus_one = std::max(max_index_plus_one, sample.features.back().index + 1);
    dataset.samples.push_back(std::move(sample));
  }
  if (dataset.samples.empty())
    throw Error("dataset contains no samples");
  dataset.dimension = std::max({max_index_plus_one, min_dimension, std::size_t{1}});
  return dataset;
}

Dataset parse_libsvm_string(const std::string &text, std::size_t min_dimension) {
  std::istringstream in(text);
  return parse_libsvm(in, min_dimension);
}

Dataset load_libsvm(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw Error("cannot open data file '" + path + "'");
  return parse_libsvm(in);
}

void write_libsvm(const Dataset &dataset, std::ostream &out) {
  for (const auto &sample : dataset.samples) {
    out << (sample.label > 0 ? "1" : "-1");
    for (const auto &f : sample.features)
      out << ' ' << (f.index + 1) << ':' << format_double(f.value);
    out << '\n';
  }
}

std::string to_libsvm_string(const Dataset &dataset) {
  std::ostringstream out;
  write_libsvm(dataset, out);
  return out.str();
}

void validate(const Dataset &dataset) {
  if (dataset.samples.empty())
    throw Error("dataset contains no samples");
  if (dataset.dimension == 0)
    throw Error("dataset dimension must be positive");
  for (const auto &sample : dataset.samples) {
    if (sample.label != 1 && sample.label != -1)
      throw Error("labels must be -1 or +1");
    for (std::size_t k = 0; k < sample.features.size(); ++k) {
      const Feature &f = sample.features[k];
      if (f.index >= dataset.dimension)
        throw Error("feature index exceeds dataset dimension");
      if (k > 0 && f.index <= sample.features[k - 1].index)
        throw Error("feature indices must be strictly increasing");
      if (!std::isfinite(f.value))
        throw Error("non-finite feature value");
    }
  }
}

double density(const Dataset &dataset) {
  std::size_t nnz = 0;
  for (const auto &sample : dataset.samples)
    nnz += sample.features.size();
  return static_cast<double>(nnz) /
         (static_cast<double>(dataset.size()) * static_cast<double>(dataset.dimension));
}

Dataset standardize(const Dataset &dataset) {
  if (dataset.standardized)
    throw Error("dataset is already standardized");
  if (dataset.bias_added)
    throw Error("standardize before adding the bias term");
  validate(dataset);

  const std::size_t p = dataset.dimension;
  const auto n = static_cast<long double>(dataset.size());
  std::vector<long double> mean(p, 0.0L);
  for (const auto &sample : dataset.samples)
    for (const auto &f : sample.features)
      mean[f.index] += f.value;
  for (auto &m : mean)
    m /= n;

  // Two-pass variance; implicit zeros contribute mean^2 each.
  std::vector<long double> sq(p, 0.0L);
  std::vector<std::size_t> nnz(p, 0);
  for (const auto &sample : dataset.samples) {
    for (const auto &f : sample.features) {
      const long double d = f.value - mean[f.index];
      sq[f.index] += d * d;
      ++nnz[f.index];
    }
  }
  std::vector<double> shift(p), scale(p);
  for (std::size_t j = 0; j < p; ++j) {
    const long double zeros = n - static_cast<long double>(nnz[j]);
    const long double var = (sq[j] + zeros * mean[j] * mean[j]) / n;
    shift[j] = static_cast<double>(mean[j]);
    scale[j] = var > 0.0L ? static_cast<double>(1.0L / std::sqrt(var)) : 0.0;
  }

  Dataset out;
  out.dimension = p;
  out.standardized = true;
  out.samples.reserve(dataset.size());
  std::vector<double> dense(p);
  for (const auto &sample : dataset.samples) {
    std::fill(dense.begin(), dense.end(), 0.0);
    for (const auto &f : sample.features)
      dense[f.index] = f.value;
    Sample s;
    s.label = sample.label;
    s.features.reserve(p);
    for (std::size_t j = 0; j < p; ++j)
      s.features.push_back(Feature{j, scale[j] == 0.0 ? 0.0 : (dense[j] - shift[j]) * scale[j]});
    out.samples.push_back(std::move(s));
  }
  return out;
}

Dataset add_bias(const Dataset &dataset) {
  if (dataset.bias_added)
    throw Error("bias term already added");
  Dataset out = dataset;
  for (auto &sample : out.samples)
    sample.features.push_back(Feature{dataset.dimension, 1.0});
  out.dimension = dataset.dimension + 1;
  out.bias_added = true;
  return out;
}

Dataset preprocess(const Dataset &dataset) {
  if (!dataset.standardized && !dataset.bias_added && density(dataset) > kStandardizeDensity)
    return add_bias(standardize(dataset));
  return add_bias(dataset);
}

SyntheticProblem synthesize(std::size_t n, std::size_t p, std::uint64_t seed,
                            double noise_fraction) {
  if (n == 0 || p == 0)
    throw Error("synthetic problems need n >= 1 and p >= 1");
  if (!(noise_fraction >= 0.0 && noise_fraction < 0.5))
    throw Error("noise fraction must lie in [0, 0.5)");

  Rng rng = make_stream(seed, kSynthesisStream);
  const auto dim = static_cast<Eigen::Index>(p);
  WeightVector u(dim);
  do {
    for (Eigen::Index j = 0; j < dim; ++j)
      u[j] = standard_normal(rng);
  } while (u.norm() == 0.0);
  u /= u.norm();

  SyntheticProblem problem;
  problem.reference = u;
  problem.dataset.dimension = p;
  problem.dataset.samples.reserve(n);
  WeightVector x(dim);
  for (std::size_t i = 0; i < n; ++i) {
    double margin = 0.0;
    do {
      for (Eigen::Index j = 0; j < dim; ++j)
        x[j] = standard_normal(rng);
      margin = u.dot(x);
    } while (margin == 0.0);
    Sample sample;
    sample.label = margin > 0.0 ? 1 : -1;
    if (uniform01(rng) < noise_fraction)
      sample.label = -sample.label;
    sample.features.reserve(p);
    for (std::size_t j = 0; j < p; ++j)
      sample.features.push_back(Feature{j, x[static_cast<Eigen::Index>(j)]});
    problem.dataset.samples.push_back(std::move(sample));
  }
  return problem;
}

std::size_t count_disagreements(const Dataset &dataset, const WeightVector &reference) {
  if (static_cast<std::size_t>(reference.size()) != dataset.dimension)
    throw Error("reference dimension does not match dataset dimension");
  std::size_t count = 0;
  for (const auto &sample : dataset.samples)
    if (sample.label * dot(sample, reference) <= 0.0)
      ++count;
  return count;
}

double dot(const Sample &sample, const WeightVector &w) {
  double acc = 0.0;
  for (const auto &f : sample.features)
    acc += f.value * w[static_cast<Eigen::Index>(f.index)];
  return acc;
}

double squared_norm(const Sample &sample) {
  double acc = 0.0;
  for (const auto &f : sample.features)
    acc += f.value * f.value;
  return acc;
}

} // namespace sgdavg
