#include "sgdavg/averaging.hpp"

#include <bit>
#include <cmath>
#include <type_traits>

namespace sgdavg {

namespace {

int parse_exponent(const std::string &text, const std::string &what, int min_value) {
  const double v = parse_double(text, what);
  if (v != std::floor(v) || v < min_value || v > 64)
    throw Error(what + " must be an integer in [" + std::to_string(min_value) + ", 64]");
  return static_cast<int>(v);
}

std::size_t suffix_start(const SuffixHalf &s) { return s.horizon / 2 + 1; }

// Largest power of two <= t, or 0 for t = 0.
std::size_t doubling_start(std::size_t t) { return t == 0 ? 0 : std::bit_floor(t); }

double power_weight(std::size_t t, int k) {
  return std::pow(static_cast<double>(t + 1), k);
}

// C(t + eta, eta): the unnormalized polynomial-decay weight of iterate t.
double decay_weight(std::size_t t, int eta) {
  double w = 1.0;
  for (int j = 1; j <= eta; ++j)
    w *= static_cast<double>(t + static_cast<std::size_t>(j)) / j;
  return w;
}

} // namespace

AveragingScheme parse_scheme(const std::string &name, std::size_t horizon) {
  if (name == "0")
    return NoAveraging{};
  if (name == "1")
    return UniformAll{};
  if (name == "0.5") {
    if (horizon == 0)
      throw Error("scheme 0.5 needs a positive horizon");
    return SuffixHalf{horizon};
  }
  if (name == "D")
    return Doubling{};
  if (name == "W")
    return PolyWeight{1};
  if (name == "W2")
    return PolyWeight{2};
  if (name.rfind("poly:", 0) == 0)
    return PolyWeight{parse_exponent(name.substr(5), "poly weight exponent", 1)};
  if (name.rfind("decay:", 0) == 0)
    return PolyDecay{parse_exponent(name.substr(6), "decay parameter eta", 0)};
  throw Error("unknown averaging scheme '" + name + "'");
}

std::string scheme_name(const AveragingScheme &scheme) {
  return std::visit(
      [](const auto &s) -> std::string {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, NoAveraging>)
          return "0";
        else if constexpr (std::is_same_v<S, UniformAll>)
          return "1";
        else if constexpr (std::is_same_v<S, SuffixHalf>)
          return "0.5";
        else if constexpr (std::is_same_v<S, Doubling>)
          return "D";
        else if constexpr (std::is_same_v<S, PolyWeight>)
          return s.k == 1 ? "W" : s.k == 2 ? "W2" : "poly:" + std::to_string(s.k);
        else
          return "decay:" + std::to_string(s.eta);
      },
      scheme);
}

AveragerState make_averager_state(std::size_t dimension) {
  AveragerState state;
  state.average = WeightVector::Zero(static_cast<Eigen::Index>(dimension));
  return state;
}

double rho(const AveragingScheme &scheme, std::size_t t, const AveragerState &state) {
  const auto td = static_cast<double>(t);
  return std::visit(
      [&](const auto &s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, NoAveraging>) {
          return 1.0;
        } else if constexpr (std::is_same_v<S, UniformAll>) {
          return 1.0 / (td + 1.0);
        } else if constexpr (std::is_same_v<S, SuffixHalf>) {
          const std::size_t start = suffix_start(s);
          return t < start ? 1.0 : 1.0 / static_cast<double>(t - start + 1);
        } else if constexpr (std::is_same_v<S, Doubling>) {
          return 1.0 / static_cast<double>(t - doubling_start(t) + 1);
        } else if constexpr (std::is_same_v<S, PolyWeight>) {
          if (s.k == 1)
            return 2.0 / (td + 2.0);
          const double w = power_weight(t, s.k);
          return w / (state.cumulative_weight + w);
        } else {
          return (1.0 + s.eta) / (td + 1.0 + s.eta);
        }
      },
      scheme);
}

void absorb(AveragerState &state, const WeightVector &w, std::size_t t,
            const AveragingScheme &scheme) {
  if (t != state.iterate_index)
    throw Error("iterate index mismatch");
  if (w.size() != state.average.size())
    throw Error("iterate dimension does not match averager dimension");
  if (!w.allFinite())
    throw Error("non-finite vector");

  const double r = rho(scheme, t, state);
  if (r == 1.0) {
    state.average = w;
    state.epoch_start = t;
  } else {
    state.average = (1.0 - r) * state.average + r * w;
  }

  std::visit(
      [&](const auto &s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, PolyWeight>)
          state.cumulative_weight += power_weight(t, s.k);
        else if constexpr (std::is_same_v<S, PolyDecay>)
          state.cumulative_weight += decay_weight(t, s.eta);
        else
          state.cumulative_weight = r == 1.0 ? 1.0 : state.cumulative_weight + 1.0;
      },
      scheme);
  ++state.iterate_index;
}

AveragerState update_average(AveragerState state, const WeightVector &w, std::size_t t,
                             const AveragingScheme &scheme) {
  absorb(state, w, t, scheme);
  return state;
}

std::vector<long double> closed_form_weights(std::size_t count, const AveragingScheme &scheme) {
  if (count == 0)
    throw Error("closed-form average of an empty sequence");
  const std::size_t last = count - 1;
  std::vector<long double> weights(count, 0.0L);
  std::visit(
      [&](const auto &s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, NoAveraging>) {
          weights[last] = 1.0L;
        } else if constexpr (std::is_same_v<S, UniformAll>) {
          std::fill(weights.begin(), weights.end(), 1.0L);
        } else if constexpr (std::is_same_v<S, SuffixHalf>) {
          const std::size_t start = suffix_start(s);
          if (last < start)
            weights[last] = 1.0L;
          else
            std::fill(weights.begin() + static_cast<std::ptrdiff_t>(start), weights.end(), 1.0L);
        } else if constexpr (std::is_same_v<S, Doubling>) {
          std::fill(weights.begin() + static_cast<std::ptrdiff_t>(doubling_start(last)),
                    weights.end(), 1.0L);
        } else if constexpr (std::is_same_v<S, PolyWeight>) {
          for (std::size_t t = 0; t < count; ++t)
            weights[t] = std::pow(static_cast<long double>(t + 1), s.k);
        } else {
          // Unroll the recurrence: iterate t keeps rho_t * prod_{r>t} (1 - rho_r).
          long double tail = 1.0L;
          for (std::size_t t = count; t-- > 0;) {
            const long double r = (1.0L + s.eta) / (static_cast<long double>(t) + 1.0L + s.eta);
            weights[t] = r * tail;
            tail *= 1.0L - r;
          }
        }
      },
      scheme);
  return weights;
}

WeightVector closed_form_average(std::span<const WeightVector> iterates,
                                 const AveragingScheme &scheme) {
  const auto weights = closed_form_weights(iterates.size(), scheme);
  using LongVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  const Eigen::Index dim = iterates.front().size();
  LongVector acc = LongVector::Zero(dim);
  long double total = 0.0L;
  for (std::size_t t = 0; t < iterates.size(); ++t) {
    if (iterates[t].size() != dim)
      throw Error("iterates must share one dimension");
    if (weights[t] == 0.0L)
      continue;
    acc += weights[t] * iterates[t].cast<long double>();
    total += weights[t];
  }
  return (acc / total).cast<double>();
}

} // namespace sgdavg
