#include "icais/infodyn.hpp"

#include <cmath>
#include <future>
#include <numeric>
#include <unordered_map>

#include "icais/error.hpp"

namespace icais {

std::string_view to_string(Measure m) {
  switch (m) {
    case Measure::ais: return "ais";
    case Measure::icais: return "icais";
    case Measure::interaction: return "interaction";
  }
  return "?";
}

std::string_view to_string(Source s) {
  return s == Source::oracle ? "oracle" : "empirical";
}

Measure parse_measure(std::string_view name) {
  if (name == "ais") return Measure::ais;
  if (name == "icais") return Measure::icais;
  if (name == "interaction") return Measure::interaction;
  throw UsageError("unknown measure '" + std::string(name) +
                   "' (expected ais, icais or interaction)");
}

bool needs_input(Measure m) { return m != Measure::ais; }

double LocalProfile::mean() const {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

namespace {

// Marginals of a (history, next, input) distribution needed by the local
// log-ratios, with per-cell memoization.
class LocalEvaluator {
 public:
  explicit LocalEvaluator(const Distribution& d)
      : joint_(d),
        hx_(d.marginal({0, 1})),
        h_(d.marginal({0})),
        x_(d.marginal({1})),
        hu_(d.marginal({0, 2})),
        xu_(d.marginal({1, 2})),
        u_(d.marginal({2})),
        card_x_(d.axes()[1].size()),
        card_u_(d.axes()[2].size()) {
    if (d.rank() != 3)
      throw UsageError(
          "information dynamics measures need a (history, next, input) "
          "distribution");
  }

  double ais(const Cell& c) const {
    const double p_hx = hx_.probability(c.history * card_x_ + c.next);
    if (p_hx <= 0.0) throw zero_cell(c, "(h,x')");
    return std::log2(p_hx / (h_.probability(c.history) *
                             x_.probability(c.next)));
  }

  double icais(const Cell& c) const {
    const double p_hxu = joint_.probability(
        (c.history * card_x_ + c.next) * card_u_ + c.input);
    if (p_hxu <= 0.0) throw zero_cell(c, "(h,x',u')");
    const double p_hu = hu_.probability(c.history * card_u_ + c.input);
    const double p_xu = xu_.probability(std::uint64_t{c.next} * card_u_ +
                                        c.input);
    return std::log2((p_hxu * u_.probability(c.input)) / (p_hu * p_xu));
  }

  double local(Measure m, const Cell& c) const {
    switch (m) {
      case Measure::ais: return ais(c);
      case Measure::icais: return icais(c);
      case Measure::interaction: return icais(c) - ais(c);
    }
    return 0.0;
  }

  double cached(Measure m, const Cell& c) {
    const std::uint64_t key = (c.history * card_x_ + c.next) * card_u_ + c.input;
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const double v = local(m, c);
    cache_.emplace(key, v);
    return v;
  }

  Cell cell(std::uint64_t key) const {
    Cell c;
    c.input = static_cast<Symbol>(key % card_u_);
    key /= card_u_;
    c.next = static_cast<Symbol>(key % card_x_);
    c.history = key / card_x_;
    return c;
  }

 private:
  static DataError zero_cell(const Cell& c, const char* what) {
    return DataError("transition " + std::string(what) + " = (history code " +
                     std::to_string(c.history) + ", next " +
                     std::to_string(c.next) + ", input " +
                     std::to_string(c.input) +
                     ") has probability 0 under the distribution");
  }

  const Distribution& joint_;
  Distribution hx_, h_, x_, hu_, xu_, u_;
  std::uint64_t card_x_, card_u_;
  std::unordered_map<std::uint64_t, double> cache_;
};

void require_input(Measure m, const JointCountTable& table) {
  if (needs_input(m) && !table.has_input())
    throw UsageError("measure '" + std::string(to_string(m)) +
                     "' needs an input series");
}

}  // namespace

LocalProfile local_profile(Measure m, const Distribution& dist,
                           std::span<const Cell> transitions, int k,
                           std::size_t start_index) {
  LocalEvaluator eval(dist);
  LocalProfile profile{m, k, {}, start_index};
  profile.values.reserve(transitions.size());
  for (const Cell& c : transitions) profile.values.push_back(eval.cached(m, c));
  return profile;
}

LocalProfile local_profile(Measure m, const JointCountTable& table) {
  require_input(m, table);
  return local_profile(m, plugin_distribution(table), table.observed(),
                       table.k(), table.start_index());
}

LocalProfile local_ais(const JointCountTable& table) {
  return local_profile(Measure::ais, table);
}
LocalProfile local_icais(const JointCountTable& table) {
  return local_profile(Measure::icais, table);
}
LocalProfile local_interaction(const JointCountTable& table) {
  return local_profile(Measure::interaction, table);
}

double average(Measure m, const Distribution& dist) {
  LocalEvaluator eval(dist);
  double sum = 0.0;
  for (const auto& e : dist.entries()) sum += e.prob * eval.local(m, eval.cell(e.key));
  return sum;
}

MeasureResult evaluate(Measure m, const JointCountTable& table,
                       bool with_local, const Distribution* heldout) {
  require_input(m, table);
  MeasureResult r;
  r.measure = m;
  r.k = table.k();
  r.n_transitions = table.total();
  r.source = Source::empirical;
  if (heldout) {
    // Average of the held-out locals over the observed transitions.
    LocalProfile lp = local_profile(m, *heldout, table.observed(), table.k(),
                                    table.start_index());
    r.average_bits = lp.mean();
    if (with_local) r.local = std::move(lp);
    return r;
  }
  const Distribution dist = plugin_distribution(table);
  r.average_bits = average(m, dist);
  if (with_local)
    r.local = local_profile(m, dist, table.observed(), table.k(),
                            table.start_index());
  return r;
}

MeasureResult evaluate(Measure m, const Distribution& dist, int k,
                       Source source) {
  MeasureResult r;
  r.measure = m;
  r.k = k;
  r.source = source;
  r.n_transitions = 0;
  r.average_bits = average(m, dist);
  return r;
}

MeasureResult ensemble_average(std::span<const LocalProfile> profiles) {
  if (profiles.empty()) throw UsageError("ensemble_average: no profiles");
  const LocalProfile& first = profiles.front();
  double sum = 0.0;
  std::uint64_t n = 0;
  for (const auto& p : profiles) {
    if (p.measure != first.measure || p.k != first.k ||
        p.values.size() != first.values.size())
      throw UsageError(
          "ensemble_average: profiles differ in measure, k or length");
    for (double v : p.values) sum += v;
    n += p.values.size();
  }
  MeasureResult r;
  r.measure = first.measure;
  r.k = first.k;
  r.n_transitions = n;
  r.average_bits = n == 0 ? 0.0 : sum / static_cast<double>(n);
  return r;
}

std::vector<MeasureResult> sweep_k(const SymbolSeries& x,
                                   const SymbolSeries* u, int k_min, int k_max,
                                   const std::vector<Measure>& measures,
                                   const SweepOptions& opts) {
  if (k_min < 1 || k_max < k_min)
    throw UsageError("k range must satisfy 1 <= k_min <= k_max, got " +
                     std::to_string(k_min) + ".." + std::to_string(k_max));
  if (measures.empty()) throw UsageError("sweep_k: no measures requested");
  for (Measure m : measures)
    if (needs_input(m) && !u)
      throw UsageError("measure '" + std::string(to_string(m)) +
                       "' needs an input series");

  const std::uint64_t ax = x.alphabet().size();
  const std::uint64_t au = u ? u->alphabet().size() : 1;
  const std::uint64_t hist = history_cardinality(ax, k_max);
  if (hist > opts.max_cells / (ax * au))
    throw UsageError("k=" + std::to_string(k_max) + " needs " +
                     std::to_string(hist) + "*" + std::to_string(ax * au) +
                     " table cells, above the limit of " +
                     std::to_string(opts.max_cells));

  EmbeddingConfig base{k_max, opts.input_lag, 0};
  base.validate();
  const std::size_t start = base.start_index(u != nullptr);
  if (x.length() < start + 1)
    throw DataError("series of length " + std::to_string(x.length()) +
                    " too short for k=" + std::to_string(k_max) +
                    "; needs length >= " + std::to_string(start + 1));

  auto run = [&](int k) {
    EmbeddingConfig cfg{k, opts.input_lag, start};
    const JointCountTable table = count_joint(x, u, cfg, opts.max_cells);
    std::vector<MeasureResult> out;
    for (Measure m : measures) out.push_back(evaluate(m, table));
    return out;
  };

  std::vector<std::vector<MeasureResult>> per_k;
  if (opts.parallel) {
    std::vector<std::future<std::vector<MeasureResult>>> jobs;
    for (int k = k_min; k <= k_max; ++k)
      jobs.push_back(std::async(std::launch::async, run, k));
    for (auto& j : jobs) per_k.push_back(j.get());
  } else {
    for (int k = k_min; k <= k_max; ++k) per_k.push_back(run(k));
  }

  std::vector<MeasureResult> results;
  for (auto& rs : per_k)
    for (auto& r : rs) results.push_back(std::move(r));
  return results;
}

}  // namespace icais
