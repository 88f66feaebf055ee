#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <unordered_map>

#include "icais/error.hpp"
#include "icais/estimators.hpp"

namespace icais {

namespace {

constexpr double kSumTolerance = 1e-12;

void sort_and_merge(std::vector<Distribution::Entry>& entries) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.key < b.key; });
  std::vector<Distribution::Entry> merged;
  merged.reserve(entries.size());
  for (const auto& e : entries) {
    if (!merged.empty() && merged.back().key == e.key)
      merged.back().prob += e.prob;
    else
      merged.push_back(e);
  }
  std::erase_if(merged, [](const auto& e) { return e.prob == 0.0; });
  entries = std::move(merged);
}

}  // namespace

Distribution::Distribution(std::vector<Alphabet> axes,
                           std::vector<Entry> entries,
                           std::optional<std::uint64_t> sample_count)
    : axes_(std::move(axes)),
      entries_(std::move(entries)),
      sample_count_(sample_count) {
  if (axes_.empty()) throw UsageError("distribution needs at least one axis");
  strides_.assign(axes_.size(), 1);
  std::uint64_t states = 1;
  for (std::size_t i = axes_.size(); i-- > 0;) {
    strides_[i] = states;
    if (states > (std::uint64_t{1} << 63) / axes_[i].size())
      throw UsageError("distribution state space too large to encode");
    states *= axes_[i].size();
  }
  double total = 0.0;
  for (const auto& e : entries_) {
    if (!(e.prob >= 0.0))
      throw DataError("negative or NaN probability in distribution");
    if (e.key >= states) throw DataError("distribution key out of range");
    total += e.prob;
  }
  if (std::abs(total - 1.0) > kSumTolerance)
    throw DataError("probabilities sum to " + std::to_string(total) +
                    ", expected 1");
  sort_and_merge(entries_);
}

Distribution Distribution::from_dense(std::vector<Alphabet> axes,
                                      const std::vector<double>& probs) {
  std::vector<Entry> entries;
  entries.reserve(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i)
    entries.push_back({i, probs[i]});
  return Distribution(std::move(axes), std::move(entries));
}

std::uint64_t Distribution::encode(
    const std::vector<std::uint64_t>& coords) const {
  if (coords.size() != axes_.size())
    throw UsageError("coordinate count does not match distribution rank");
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] >= axes_[i].size())
      throw UsageError("coordinate outside axis alphabet");
    key += coords[i] * strides_[i];
  }
  return key;
}

std::vector<std::uint64_t> Distribution::decode(std::uint64_t key) const {
  std::vector<std::uint64_t> coords(axes_.size());
  for (std::size_t i = 0; i < axes_.size(); ++i)
    coords[i] = (key / strides_[i]) % axes_[i].size();
  return coords;
}

double Distribution::probability(std::uint64_t key) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), key,
      [](const Entry& e, std::uint64_t v) { return e.key < v; });
  return (it != entries_.end() && it->key == key) ? it->prob : 0.0;
}

Distribution Distribution::marginal(const std::vector<std::size_t>& vars) const {
  if (vars.empty()) throw UsageError("marginal over an empty variable set");
  std::set<std::size_t> unique(vars.begin(), vars.end());
  if (unique.size() != vars.size())
    throw UsageError("marginal variables must be distinct");
  for (std::size_t v : vars)
    if (v >= axes_.size()) throw UsageError("marginal variable out of range");

  Distribution out;
  out.sample_count_ = sample_count_;
  for (std::size_t v : vars) out.axes_.push_back(axes_[v]);
  out.strides_.assign(vars.size(), 1);
  std::uint64_t stride = 1;
  for (std::size_t i = vars.size(); i-- > 0;) {
    out.strides_[i] = stride;
    stride *= out.axes_[i].size();
  }

  std::unordered_map<std::uint64_t, std::size_t> slot;
  slot.reserve(entries_.size());
  for (const auto& e : entries_) {
    std::uint64_t sub = 0;
    for (std::size_t i = 0; i < vars.size(); ++i)
      sub += ((e.key / strides_[vars[i]]) % axes_[vars[i]].size()) *
             out.strides_[i];
    auto [it, inserted] = slot.try_emplace(sub, out.entries_.size());
    if (inserted)
      out.entries_.push_back({sub, e.prob});
    else
      out.entries_[it->second].prob += e.prob;
  }
  std::sort(out.entries_.begin(), out.entries_.end(),
            [](const auto& a, const auto& b) { return a.key < b.key; });
  return out;
}

Distribution plugin_distribution(const JointCountTable& table) {
  if (table.total() == 0)
    throw DataError("cannot estimate a distribution from an empty table");
  std::vector<Alphabet> axes{Alphabet(table.cardinality(Dim::history)),
                             Alphabet(table.cardinality(Dim::next)),
                             Alphabet(table.cardinality(Dim::input))};
  const double total = static_cast<double>(table.total());
  std::vector<Distribution::Entry> entries;
  entries.reserve(table.entries().size());
  for (const auto& e : table.entries())
    entries.push_back({e.key, static_cast<double>(e.count) / total});
  return Distribution(std::move(axes), std::move(entries), table.total());
}

}  // namespace icais
