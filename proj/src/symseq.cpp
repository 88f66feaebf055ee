#include "icais/symseq.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "icais/error.hpp"

namespace icais {

Alphabet::Alphabet(std::uint64_t size) : size_(size) {
  if (size < 1) throw UsageError("alphabet size must be at least 1");
}

Alphabet::Alphabet(std::uint64_t size, std::vector<std::string> labels)
    : Alphabet(size) {
  if (labels.size() != size)
    throw UsageError("alphabet has " + std::to_string(size) + " symbols but " +
                     std::to_string(labels.size()) + " labels");
  std::set<std::string> seen(labels.begin(), labels.end());
  if (seen.size() != labels.size())
    throw UsageError("alphabet labels must be distinct");
  labels_ = std::move(labels);
}

std::string Alphabet::label(Symbol s) const {
  if (labels_ && s < labels_->size()) return (*labels_)[s];
  return std::to_string(s);
}

SymbolSeries::SymbolSeries(Alphabet alphabet, std::vector<Symbol> data)
    : alphabet_(std::move(alphabet)), data_(std::move(data)) {
  if (data_.empty()) throw DataError("symbol series must not be empty");
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (data_[i] >= alphabet_.size())
      throw DataError("symbol " + std::to_string(data_[i]) + " at index " +
                      std::to_string(i) + " outside alphabet of size " +
                      std::to_string(alphabet_.size()));
  }
}

SymbolSeries SymbolSeries::from_values(const std::vector<long long>& values) {
  std::map<long long, Symbol> codes;
  for (long long v : values) codes.emplace(v, 0);
  std::vector<std::string> labels;
  Symbol next = 0;
  for (auto& [value, code] : codes) {
    code = next++;
    labels.push_back(std::to_string(value));
  }
  std::vector<Symbol> data;
  data.reserve(values.size());
  for (long long v : values) data.push_back(codes.at(v));
  if (labels.empty()) throw DataError("symbol series must not be empty");
  const std::uint64_t size = labels.size();
  return SymbolSeries(Alphabet(size, std::move(labels)), std::move(data));
}

void EmbeddingConfig::validate() const {
  if (k < 1) throw UsageError("history length k must be >= 1, got " +
                              std::to_string(k));
  if (input_lag < 0)
    throw UsageError("input lag must be >= 0, got " +
                     std::to_string(input_lag));
}

std::size_t EmbeddingConfig::start_index(bool with_input) const {
  std::size_t start = std::max<std::size_t>(static_cast<std::size_t>(k),
                                            aligned_start);
  if (with_input) start = std::max<std::size_t>(start, input_lag);
  return start;
}

std::vector<EmbeddedPair> embed(const SymbolSeries& series,
                                const EmbeddingConfig& cfg) {
  cfg.validate();
  const auto k = static_cast<std::size_t>(cfg.k);
  if (series.length() < k + 1)
    throw DataError("series of length " + std::to_string(series.length()) +
                    " too short for k=" + std::to_string(k) +
                    "; needs length >= " + std::to_string(k + 1));
  std::vector<EmbeddedPair> pairs;
  pairs.reserve(series.length() - k);
  const auto& d = series.data();
  for (std::size_t t = 0; t + k < d.size(); ++t) {
    pairs.push_back({std::vector<Symbol>(d.begin() + t, d.begin() + t + k),
                     d[t + k]});
  }
  return pairs;
}

std::uint64_t history_cardinality(std::uint64_t alphabet_size, int k) {
  constexpr std::uint64_t limit = std::uint64_t{1} << 62;
  std::uint64_t n = 1;
  for (int i = 0; i < k; ++i) {
    if (n > limit / alphabet_size)
      throw UsageError("history space " + std::to_string(alphabet_size) + "^" +
                       std::to_string(k) + " is too large to encode");
    n *= alphabet_size;
  }
  return n;
}

HistoryCode encode_history(const std::vector<Symbol>& history,
                           std::uint64_t alphabet_size) {
  HistoryCode code = 0;
  for (Symbol s : history) code = code * alphabet_size + s;
  return code;
}

std::vector<Symbol> decode_history(HistoryCode code, int k,
                                   std::uint64_t alphabet_size) {
  std::vector<Symbol> h(static_cast<std::size_t>(k));
  for (int i = k - 1; i >= 0; --i) {
    h[static_cast<std::size_t>(i)] = static_cast<Symbol>(code % alphabet_size);
    code /= alphabet_size;
  }
  return h;
}

Cell JointCountTable::cell(std::uint64_t key) const noexcept {
  Cell c;
  c.input = static_cast<Symbol>(key % card_[2]);
  key /= card_[2];
  c.next = static_cast<Symbol>(key % card_[1]);
  c.history = key / card_[1];
  return c;
}

std::uint64_t JointCountTable::count(const Cell& c) const {
  const auto k = key(c);
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), k,
      [](const Entry& e, std::uint64_t v) { return e.key < v; });
  return (it != entries_.end() && it->key == k) ? it->count : 0;
}

JointCountTable count_joint(const SymbolSeries& x, const SymbolSeries* u,
                            const EmbeddingConfig& cfg,
                            std::uint64_t dense_cell_threshold) {
  cfg.validate();
  const std::size_t n = x.length();
  if (u && u->length() != n)
    throw DataError("process and input series differ in length (" +
                    std::to_string(n) + " vs " + std::to_string(u->length()) +
                    ")");
  const std::size_t start = cfg.start_index(u != nullptr);
  if (n < start + 1)
    throw DataError("series of length " + std::to_string(n) +
                    " too short for k=" + std::to_string(cfg.k) +
                    "; needs length >= " + std::to_string(start + 1));

  const std::uint64_t ax = x.alphabet().size();
  JointCountTable table(cfg.k, x.alphabet(),
                        u ? std::optional<Alphabet>(u->alphabet())
                          : std::nullopt);
  table.card_ = {history_cardinality(ax, cfg.k), ax,
                 u ? u->alphabet().size() : 1};
  table.present_ = {true, true, u != nullptr};
  table.start_index_ = start;

  const std::uint64_t hist_card = table.card_[0];
  std::uint64_t cells = 0;
  if (hist_card > (std::uint64_t{1} << 62) / (ax * table.card_[2]))
    throw UsageError("joint table for k=" + std::to_string(cfg.k) +
                     " is too large to encode");
  cells = hist_card * ax * table.card_[2];

  const auto& xd = x.data();
  const auto k = static_cast<std::size_t>(cfg.k);
  const auto lag = static_cast<std::size_t>(cfg.input_lag);

  // Rolling history code for the window ending just before `start`.
  HistoryCode h = 0;
  for (std::size_t i = start - k; i < start; ++i) h = h * ax + xd[i];

  table.observed_.reserve(n - start);
  for (std::size_t j = start; j < n; ++j) {
    Cell c{h, xd[j], u ? u->data()[j - lag] : Symbol{0}};
    table.observed_.push_back(c);
    h = (h * ax + xd[j]) % hist_card;
  }
  table.total_ = table.observed_.size();

  if (cells <= dense_cell_threshold) {
    std::vector<std::uint64_t> dense(cells, 0);
    for (const Cell& c : table.observed_) ++dense[table.key(c)];
    for (std::uint64_t key = 0; key < cells; ++key)
      if (dense[key] != 0) table.entries_.push_back({key, dense[key]});
  } else {
    table.sparse_ = true;
    std::unordered_map<std::uint64_t, std::uint64_t> sparse;
    for (const Cell& c : table.observed_) ++sparse[table.key(c)];
    table.entries_.reserve(sparse.size());
    for (const auto& [key, count] : sparse) table.entries_.push_back({key, count});
    std::sort(table.entries_.begin(), table.entries_.end(),
              [](const auto& a, const auto& b) { return a.key < b.key; });
  }
  return table;
}

JointCountTable marginalize(const JointCountTable& table,
                            const std::vector<Dim>& keep) {
  std::array<bool, 3> kept{false, false, false};
  for (Dim d : keep) kept[static_cast<std::size_t>(d)] = true;
  const auto n_kept = std::count(kept.begin(), kept.end(), true);
  if (n_kept == 0) throw UsageError("marginalize: no dimensions to keep");
  if (n_kept == 3) throw UsageError("marginalize: nothing to sum out");

  JointCountTable out(table.k_, table.alphabet_x_, table.alphabet_u_);
  out.start_index_ = table.start_index_;
  out.total_ = table.total_;
  for (std::size_t d = 0; d < 3; ++d) {
    out.present_[d] = table.present_[d] && kept[d];
    out.card_[d] = kept[d] ? table.card_[d] : 1;
  }

  std::map<std::uint64_t, std::uint64_t> summed;
  for (const auto& e : table.entries_) {
    Cell c = table.cell(e.key);
    if (!kept[0]) c.history = 0;
    if (!kept[1]) c.next = 0;
    if (!kept[2]) c.input = 0;
    summed[out.key(c)] += e.count;
  }
  for (const auto& [key, count] : summed) out.entries_.push_back({key, count});
  return out;
}

}  // namespace icais
