#pragma once

// Symbol sequences, history embedding and joint transition counting.
//
// Every measure in the library consumes a JointCountTable: counts over
// (history of k outputs, next output, paired input) triples taken from a
// process series x and an optional input series u.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace icais {

using Symbol = std::uint32_t;
/// Radix-encoded history tuple, oldest symbol most significant.
using HistoryCode = std::uint64_t;

/// Cells per table above which counting switches from a flat array to a
/// sparse map.
inline constexpr std::uint64_t kDefaultCellThreshold = std::uint64_t{1} << 20;

class Alphabet {
 public:
  explicit Alphabet(std::uint64_t size);
  Alphabet(std::uint64_t size, std::vector<std::string> labels);

  std::uint64_t size() const noexcept { return size_; }
  const std::optional<std::vector<std::string>>& labels() const noexcept {
    return labels_;
  }
  /// Label for a symbol; the decimal code when no labels were given.
  std::string label(Symbol s) const;

  static Alphabet binary() { return Alphabet(2); }

  friend bool operator==(const Alphabet& a, const Alphabet& b) {
    return a.size_ == b.size_ && a.labels_ == b.labels_;
  }

 private:
  std::uint64_t size_;
  std::optional<std::vector<std::string>> labels_;
};

class SymbolSeries {
 public:
  SymbolSeries(Alphabet alphabet, std::vector<Symbol> data);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  const std::vector<Symbol>& data() const noexcept { return data_; }
  std::size_t length() const noexcept { return data_.size(); }
  Symbol operator[](std::size_t i) const { return data_[i]; }

  /// Builds a series from arbitrary integer labels. Distinct values are sorted
  /// ascending and mapped to codes 0..m-1; the labels record the mapping.
  static SymbolSeries from_values(const std::vector<long long>& values);

 private:
  Alphabet alphabet_;
  std::vector<Symbol> data_;
};

struct EmbeddingConfig {
  int k = 1;
  /// The input paired with transition x_n -> x_{n+1} is u_{n+1-input_lag}.
  int input_lag = 0;
  /// Earliest index of the predicted sample. Raising it above k aligns tables
  /// for different k onto the same set of transitions.
  std::size_t aligned_start = 0;

  void validate() const;
  /// Index of the first predicted sample.
  std::size_t start_index(bool with_input) const;
};

struct EmbeddedPair {
  std::vector<Symbol> history;
  Symbol next;

  friend bool operator==(const EmbeddedPair&, const EmbeddedPair&) = default;
};

/// Unrolls a series into (length-k history, next) pairs, one per t in
/// [0, N-k): history = x[t..t+k-1], next = x[t+k].
std::vector<EmbeddedPair> embed(const SymbolSeries& series,
                                const EmbeddingConfig& cfg);

/// Encodes a history tuple as a radix-|alphabet| integer.
HistoryCode encode_history(const std::vector<Symbol>& history,
                           std::uint64_t alphabet_size);
std::vector<Symbol> decode_history(HistoryCode code, int k,
                                   std::uint64_t alphabet_size);

/// Checked |a|^k. Throws UsageError on overflow of 62 bits.
std::uint64_t history_cardinality(std::uint64_t alphabet_size, int k);

enum class Dim : std::size_t { history = 0, next = 1, input = 2 };

/// One observed (or possible) transition. A collapsed dimension is always 0.
struct Cell {
  HistoryCode history = 0;
  Symbol next = 0;
  Symbol input = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
};

class JointCountTable {
 public:
  struct Entry {
    std::uint64_t key;
    std::uint64_t count;
  };

  int k() const noexcept { return k_; }
  const Alphabet& alphabet_x() const noexcept { return alphabet_x_; }
  const std::optional<Alphabet>& alphabet_u() const noexcept {
    return alphabet_u_;
  }
  bool has_input() const noexcept { return alphabet_u_.has_value(); }
  bool present(Dim d) const noexcept {
    return present_[static_cast<std::size_t>(d)];
  }
  /// Number of values along a dimension; 1 when collapsed or absent.
  std::uint64_t cardinality(Dim d) const noexcept {
    return card_[static_cast<std::size_t>(d)];
  }
  std::uint64_t total() const noexcept { return total_; }

  std::uint64_t key(const Cell& c) const noexcept {
    return (c.history * card_[1] + c.next) * card_[2] + c.input;
  }
  Cell cell(std::uint64_t key) const noexcept;

  std::uint64_t count(const Cell& c) const;
  /// Nonzero cells, sorted by key.
  const std::vector<Entry>& entries() const noexcept { return entries_; }

  /// Per-transition cells in time order; empty for marginalized tables.
  const std::vector<Cell>& observed() const noexcept { return observed_; }
  /// Series index of the first predicted sample.
  std::size_t start_index() const noexcept { return start_index_; }

  /// True if the counting pass used a sparse map instead of a flat array.
  bool used_sparse_counting() const noexcept { return sparse_; }

 private:
  friend JointCountTable count_joint(const SymbolSeries&, const SymbolSeries*,
                                     const EmbeddingConfig&, std::uint64_t);
  friend JointCountTable marginalize(const JointCountTable&,
                                     const std::vector<Dim>&);

  JointCountTable(int k, Alphabet ax, std::optional<Alphabet> au)
      : k_(k), alphabet_x_(std::move(ax)), alphabet_u_(std::move(au)) {}

  int k_;
  Alphabet alphabet_x_;
  std::optional<Alphabet> alphabet_u_;
  std::array<bool, 3> present_{true, true, true};
  std::array<std::uint64_t, 3> card_{1, 1, 1};
  std::uint64_t total_ = 0;
  std::vector<Entry> entries_;
  std::vector<Cell> observed_;
  std::size_t start_index_ = 0;
  bool sparse_ = false;
};

/// Counts (history, next, input) triples. `u` may be null for input-free
/// counting, in which case the input dimension is a single placeholder.
JointCountTable count_joint(const SymbolSeries& x, const SymbolSeries* u,
                            const EmbeddingConfig& cfg,
                            std::uint64_t dense_cell_threshold =
                                kDefaultCellThreshold);

inline JointCountTable count_joint(const SymbolSeries& x,
                                   const std::optional<SymbolSeries>& u,
                                   const EmbeddingConfig& cfg) {
  return count_joint(x, u ? &*u : nullptr, cfg);
}

/// Sums out every dimension not listed in `keep`.
JointCountTable marginalize(const JointCountTable& table,
                            const std::vector<Dim>& keep);

}  // namespace icais
