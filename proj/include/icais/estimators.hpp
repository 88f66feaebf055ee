#pragma once

// Exact information-theoretic functionals over finite joint distributions,
// plus the plug-in bridge from count tables. All results are in bits.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "icais/symseq.hpp"

namespace icais {

/// Joint probability table over a product of finite axes. States are
/// mixed-radix keys with axis 0 most significant. Only the support (nonzero
/// probabilities) is stored, sorted by key.
class Distribution {
 public:
  struct Entry {
    std::uint64_t key;
    double prob;
  };

  /// Duplicate keys are merged, zeros dropped. Throws if any probability is
  /// negative or the total differs from 1 by more than 1e-12.
  Distribution(std::vector<Alphabet> axes, std::vector<Entry> entries,
               std::optional<std::uint64_t> sample_count = std::nullopt);

  /// Dense constructor: `probs` enumerates every state in key order.
  static Distribution from_dense(std::vector<Alphabet> axes,
                                 const std::vector<double>& probs);

  const std::vector<Alphabet>& axes() const noexcept { return axes_; }
  std::size_t rank() const noexcept { return axes_.size(); }
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  /// Number of samples behind a plug-in estimate, if known.
  std::optional<std::uint64_t> sample_count() const noexcept {
    return sample_count_;
  }

  std::uint64_t encode(const std::vector<std::uint64_t>& coords) const;
  std::vector<std::uint64_t> decode(std::uint64_t key) const;
  double probability(std::uint64_t key) const;
  double probability(const std::vector<std::uint64_t>& coords) const {
    return probability(encode(coords));
  }

  /// Marginal over `vars`, with axes in the order given.
  Distribution marginal(const std::vector<std::size_t>& vars) const;

 private:
  Distribution() = default;

  std::vector<Alphabet> axes_;
  std::vector<std::uint64_t> strides_;
  std::vector<Entry> entries_;
  std::optional<std::uint64_t> sample_count_;
};

using VarSet = std::vector<std::size_t>;

struct EstimatorOptions {
  /// Adds (m - 1) / (2 N ln 2) to every entropy, m the support size and N the
  /// sample count. Requires a plug-in distribution.
  bool miller_madow = false;
};

/// counts / total over the axes (history, next, input). Collapsed dimensions
/// become single-symbol axes.
Distribution plugin_distribution(const JointCountTable& table);

double entropy(const Distribution& d, const VarSet& vars,
               const EstimatorOptions& opts = {});
double conditional_entropy(const Distribution& d, const VarSet& target,
                           const VarSet& given,
                           const EstimatorOptions& opts = {});
double mutual_information(const Distribution& d, const VarSet& a,
                          const VarSet& b, const EstimatorOptions& opts = {});
double conditional_mutual_information(const Distribution& d, const VarSet& a,
                                      const VarSet& b, const VarSet& given,
                                      const EstimatorOptions& opts = {});

}  // namespace icais
