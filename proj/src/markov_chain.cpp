#include <algorithm>
#include <cmath>
#include <deque>
#include <utility>

#include "icais/error.hpp"
#include "icais/procsim.hpp"

namespace icais {

namespace {

// Marks states in closed strongly connected components of the subgraph on
// `within` (iterative Tarjan).
std::vector<bool> closed_classes(
    const std::vector<std::vector<MarkovChainModel::Arc>>& arcs,
    const std::vector<bool>& within) {
  const std::size_t n = arcs.size();
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> order(n, kUnvisited), low(n, 0);
  std::vector<bool> on_stack(n, false), closed(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> call;
  std::size_t counter = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (!within[root] || order[root] != kUnvisited) continue;
    call.push_back({root, 0});
    order[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, next_arc] = call.back();
      if (next_arc < arcs[v].size()) {
        const std::size_t w = arcs[v][next_arc++].target;
        if (order[w] == kUnvisited) {
          order[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], order[w]);
        }
        continue;
      }
      const std::size_t done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] != order[done]) continue;
      std::vector<std::size_t> component;
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        component.push_back(w);
      } while (w != done);
      // closed when every arc stays inside the component
      std::vector<std::size_t> sorted = component;
      std::sort(sorted.begin(), sorted.end());
      bool is_closed = true;
      for (std::size_t c : component)
        for (const auto& arc : arcs[c])
          if (!std::binary_search(sorted.begin(), sorted.end(), arc.target))
            is_closed = false;
      if (is_closed)
        for (std::size_t c : component) closed[c] = true;
    }
  }
  return closed;
}

}  // namespace

MarkovChainModel build_joint_chain(const InputLaw& law, const Transducer& unit,
                                   int k, std::uint64_t max_states) {
  if (k < 1) throw UsageError("history length k must be >= 1");
  if (law.size != unit.input_size())
    throw UsageError("input law and unit disagree on the input alphabet size");
  if (law.initial.size() != law.size || law.transition.size() != law.size * law.size)
    throw UsageError("input law tables have the wrong shape");

  MarkovChainModel model;
  model.k_ = k;
  model.input_size_ = law.size;
  model.output_size_ = unit.output_size();
  const bool tracked = unit.state_tracks_output();
  model.unit_states_ = tracked ? 1 : unit.n_states();
  model.histories_ = history_cardinality(unit.output_size(), k);

  const std::uint64_t U = model.input_size_, S = model.unit_states_,
                      H = model.histories_, X = model.output_size_;
  if (H > max_states / (U * S))
    throw UsageError("joint chain for k=" + std::to_string(k) + " has " +
                     std::to_string(U * S) + "*" + std::to_string(H) +
                     " states, above the limit of " +
                     std::to_string(max_states));
  const std::uint64_t n = U * S * H;
  auto index = [&](std::uint64_t u, std::uint64_t s, std::uint64_t h) {
    return static_cast<std::size_t>((u * S + s) * H + h);
  };

  model.states_.resize(n);
  model.arcs_.resize(n);
  for (std::uint64_t u = 0; u < U; ++u) {
    for (std::uint64_t s = 0; s < S; ++s) {
      for (std::uint64_t h = 0; h < H; ++h) {
        const std::size_t i = index(u, s, h);
        model.states_[i] = {static_cast<Symbol>(u), static_cast<std::uint32_t>(s), h};
        const auto unit_state =
            static_cast<std::uint32_t>(tracked ? h % X : s);
        for (std::uint64_t u2 = 0; u2 < U; ++u2) {
          const double p = law.prob(static_cast<Symbol>(u), static_cast<Symbol>(u2));
          if (p <= 0.0) continue;
          const auto step = unit.step(unit_state, static_cast<Symbol>(u2));
          const std::uint64_t h2 = (h * X + step.output) % H;
          const std::uint64_t s2 = tracked ? 0 : step.state;
          model.arcs_[i].push_back({index(u2, s2, h2), p,
                                    static_cast<Symbol>(u2), step.output});
        }
      }
    }
  }

  // Seeds: any initial input, the unit's initial state, any prior history
  // (consistent with the initial state when the state is the last output).
  model.reachable_.assign(n, false);
  std::deque<std::size_t> frontier;
  for (std::uint64_t u = 0; u < U; ++u) {
    if (law.initial[u] <= 0.0) continue;
    for (std::uint64_t h = 0; h < H; ++h) {
      if (tracked && h % X != unit.initial_state()) continue;
      const std::size_t i = index(u, tracked ? 0 : unit.initial_state(), h);
      if (!model.reachable_[i]) {
        model.reachable_[i] = true;
        frontier.push_back(i);
      }
    }
  }
  while (!frontier.empty()) {
    const std::size_t i = frontier.front();
    frontier.pop_front();
    for (const auto& arc : model.arcs_[i]) {
      if (!model.reachable_[arc.target]) {
        model.reachable_[arc.target] = true;
        frontier.push_back(arc.target);
      }
    }
  }
  model.recurrent_ = closed_classes(model.arcs_, model.reachable_);
  return model;
}

MarkovChainModel build_joint_chain(const ProcessSpec& proc,
                                   const UnitSpec& unit, int k) {
  return build_joint_chain(input_law(proc), make_transducer(unit), k);
}

std::vector<double> MarkovChainModel::dense_transition() const {
  const std::size_t n = states_.size();
  std::vector<double> t(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& arc : arcs_[i]) t[i * n + arc.target] += arc.prob;
  return t;
}

Distribution stationary_distribution(const MarkovChainModel& model,
                                     const StationaryOptions& opts) {
  if (!(opts.tol > 0.0)) throw UsageError("stationary tolerance must be > 0");
  const std::size_t n = model.size();
  std::size_t n_recurrent = 0;
  for (std::size_t i = 0; i < n; ++i) n_recurrent += model.recurrent(i);

  // Transient states carry no stationary mass, so the iteration starts on
  // the recurrent ones and keeps them exactly at zero.
  std::vector<double> pi(n, 0.0), next(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    if (model.recurrent(i)) pi[i] = 1.0 / static_cast<double>(n_recurrent);

  double residual = 0.0;
  bool converged = false;
  for (std::size_t it = 0; it < opts.max_iterations; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (pi[i] == 0.0) continue;
      for (const auto& arc : model.arcs(i)) next[arc.target] += pi[i] * arc.prob;
    }
    residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) residual += std::abs(next[i] - pi[i]);
    if (residual < opts.tol) {
      converged = true;
      break;
    }
    // Averaging successive iterates: the lazy chain (I + T) / 2 shares the
    // stationary distribution and is aperiodic.
    for (std::size_t i = 0; i < n; ++i) pi[i] = 0.5 * (pi[i] + next[i]);
  }
  if (!converged)
    throw NumericalError("power iteration did not converge within " +
                         std::to_string(opts.max_iterations) +
                         " iterations (residual " + std::to_string(residual) +
                         ")");

  double total = 0.0;
  for (double p : pi) total += p;
  std::vector<Distribution::Entry> entries;
  for (std::size_t i = 0; i < n; ++i)
    if (pi[i] > 0.0) entries.push_back({i, pi[i] / total});
  return Distribution({Alphabet(model.input_size()),
                       Alphabet(model.unit_state_count()),
                       Alphabet(model.history_count())},
                      std::move(entries));
}

Distribution exact_joint(const MarkovChainModel& model,
                         const Distribution& stationary, int input_lag) {
  if (input_lag != 0 && input_lag != 1)
    throw UsageError("the oracle supports input lag 0 or 1, got " +
                     std::to_string(input_lag));
  const std::uint64_t X = model.output_size(), U = model.input_size();
  std::vector<Distribution::Entry> entries;
  for (const auto& e : stationary.entries()) {
    const auto& st = model.state(static_cast<std::size_t>(e.key));
    for (const auto& arc : model.arcs(static_cast<std::size_t>(e.key))) {
      const Symbol paired = input_lag == 0 ? arc.next_input : st.input;
      entries.push_back({(st.history * X + arc.next_output) * U + paired,
                         e.prob * arc.prob});
    }
  }
  return Distribution({Alphabet(model.history_count()), Alphabet(X), Alphabet(U)},
                      std::move(entries));
}

Distribution exact_joint(const MarkovChainModel& model,
                         const StationaryOptions& opts, int input_lag) {
  return exact_joint(model, stationary_distribution(model, opts), input_lag);
}

}  // namespace icais
