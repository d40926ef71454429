#ifndef SGDAVG_AVERAGING_HPP_
#define SGDAVG_AVERAGING_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sgdavg/core.hpp"

namespace sgdavg {

// Iterates are indexed from 0: w_0 is the starting point, w_t the output of
// solver step t. Every scheme is a running average
//
//   avg_t = (1 - rho_t) avg_{t-1} + rho_t w_t,
//
// and differs only in rho_t.

/// "0": report the last iterate.
struct NoAveraging {};

/// "1": uniform weight over w_0..w_t, rho_t = 1/(t+1).
struct UniformAll {};

/// "0.5": uniform weight over the second half of a run of known horizon.
/// The window is t in [floor(horizon/2) + 1, ...]; before it opens the raw
/// iterate is reported.
struct SuffixHalf {
  std::size_t horizon;
};

/// "D": uniform weight since the last t that is a power of two (inclusive).
struct Doubling {};

/// "W", "W2", "poly:<k>": weight (t+1)^k on iterate t.
struct PolyWeight {
  int k;
};

/// "decay:<eta>": rho_t = (1+eta)/(t+1+eta).
struct PolyDecay {
  int eta;
};

using AveragingScheme =
    std::variant<NoAveraging, UniformAll, SuffixHalf, Doubling, PolyWeight, PolyDecay>;

/// Parses the CLI names `0`, `1`, `0.5`, `D`, `W`, `W2`, `poly:<k>`,
/// `decay:<eta>`. The horizon is only used by `0.5`.
AveragingScheme parse_scheme(const std::string &name, std::size_t horizon);

/// Inverse of parse_scheme (W and W2 are preferred over poly:1 / poly:2).
std::string scheme_name(const AveragingScheme &scheme);

struct AveragerState {
  WeightVector average;
  double cumulative_weight = 0.0;
  std::size_t iterate_index = 0; // index of the next expected iterate
  std::size_t epoch_start = 0;   // first index of the current window
};

AveragerState make_averager_state(std::size_t dimension);

/// Mixing coefficient for the incoming iterate w_t.
double rho(const AveragingScheme &scheme, std::size_t t, const AveragerState &state);

/// Absorbs w_t in place. Throws when t != state.iterate_index.
void absorb(AveragerState &state, const WeightVector &w, std::size_t t,
            const AveragingScheme &scheme);

AveragerState update_average(AveragerState state, const WeightVector &w, std::size_t t,
                             const AveragingScheme &scheme);

/// Direct weighted sum over the full history; iterates[t] is w_t. Used as
/// an independent check of the online recurrence.
WeightVector closed_form_average(std::span<const WeightVector> iterates,
                                 const AveragingScheme &scheme);

/// Unnormalized weight profile used by closed_form_average for a history
/// of `count` iterates.
std::vector<long double> closed_form_weights(std::size_t count, const AveragingScheme &scheme);

} // namespace sgdavg

#endif // SGDAVG_AVERAGING_HPP_
