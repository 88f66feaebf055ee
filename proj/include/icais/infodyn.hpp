#pragma once

// Active information storage (AIS), input-corrected AIS (icAIS) and the
// interaction information between history and input, in local and average
// form. All three are evaluated over a distribution with axes
// (history, next, input):
//
//   local AIS          log2 p(h, x') / (p(h) p(x'))
//   local icAIS        log2 p(x' | h, u') / p(x' | u')
//   local interaction  local icAIS - local AIS
//
// Averages are expectations of the local values under the distribution, so
// icAIS = AIS + interaction holds term by term.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "icais/estimators.hpp"
#include "icais/symseq.hpp"

namespace icais {

enum class Measure { ais, icais, interaction };
enum class Source { empirical, oracle };

std::string_view to_string(Measure m);
std::string_view to_string(Source s);
/// Accepts "ais", "icais", "interaction".
Measure parse_measure(std::string_view name);
bool needs_input(Measure m);

struct LocalProfile {
  Measure measure = Measure::ais;
  int k = 1;
  std::vector<double> values;
  /// Series index of the sample predicted by values[0].
  std::size_t start_index = 0;

  double mean() const;
};

struct MeasureResult {
  Measure measure = Measure::ais;
  int k = 1;
  double average_bits = 0.0;
  std::uint64_t n_transitions = 0;
  Source source = Source::empirical;
  std::optional<LocalProfile> local;
};

/// Local values for every transition in `transitions`, evaluated under
/// `dist`. Throws DataError for a transition outside the support of `dist`.
LocalProfile local_profile(Measure m, const Distribution& dist,
                           std::span<const Cell> transitions, int k,
                           std::size_t start_index = 0);

/// In-sample local values: the plug-in distribution of `table` evaluated on
/// the table's own transitions.
LocalProfile local_profile(Measure m, const JointCountTable& table);

LocalProfile local_ais(const JointCountTable& table);
LocalProfile local_icais(const JointCountTable& table);
LocalProfile local_interaction(const JointCountTable& table);

/// Expectation of the local measure under `dist`.
double average(Measure m, const Distribution& dist);

/// Plug-in evaluation. With `with_local` the in-sample profile is attached.
/// A non-null `heldout` distribution replaces the plug-in one, for
/// evaluating a model against data it was not estimated from.
MeasureResult evaluate(Measure m, const JointCountTable& table,
                       bool with_local = false,
                       const Distribution* heldout = nullptr);
/// Exact evaluation of a (history, next, input) distribution.
MeasureResult evaluate(Measure m, const Distribution& dist, int k,
                       Source source = Source::oracle);

inline MeasureResult ais(const JointCountTable& t, bool with_local = false) {
  return evaluate(Measure::ais, t, with_local);
}
inline MeasureResult icais(const JointCountTable& t, bool with_local = false) {
  return evaluate(Measure::icais, t, with_local);
}
inline MeasureResult interaction(const JointCountTable& t,
                                 bool with_local = false) {
  return evaluate(Measure::interaction, t, with_local);
}

/// Average over processes and time steps of homogeneous processes. All
/// profiles must share measure, k and length.
MeasureResult ensemble_average(std::span<const LocalProfile> profiles);

struct SweepOptions {
  int input_lag = 0;
  /// |X|^k * |X| * |U| may not exceed this.
  std::uint64_t max_cells = kDefaultCellThreshold;
  bool parallel = true;
};

/// One result per (k, measure), k-major. Every table is aligned to start at
/// index max(k_max, lag), so all values are averages over the same
/// transitions.
std::vector<MeasureResult> sweep_k(const SymbolSeries& x,
                                   const SymbolSeries* u, int k_min, int k_max,
                                   const std::vector<Measure>& measures,
                                   const SweepOptions& opts = {});

}  // namespace icais
