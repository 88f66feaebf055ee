#pragma once

// Input processes, computational units, and the exact Markov-chain oracle for
// the joint (input, unit) dynamics.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "icais/estimators.hpp"
#include "icais/symseq.hpp"

namespace icais {

struct ProcessSpec {
  enum class Kind { bernoulli, markov_binary };

  Kind kind = Kind::bernoulli;
  /// P(symbol = 1) for bernoulli; repeat probability for markov_binary.
  double p = 0.5;
  std::uint64_t seed = 0;

  static ProcessSpec bernoulli(double p, std::uint64_t seed = 0) {
    return {Kind::bernoulli, p, seed};
  }
  static ProcessSpec markov(double p_stay, std::uint64_t seed = 0) {
    return {Kind::markov_binary, p_stay, seed};
  }

  void validate() const;
};

struct UnitSpec {
  enum class Kind { forwarding, xor_memory };

  Kind kind = Kind::forwarding;
  Symbol initial_state = 0;

  static UnitSpec forwarding() { return {Kind::forwarding, 0}; }
  static UnitSpec xor_memory(Symbol init = 0) { return {Kind::xor_memory, init}; }

  void validate() const;
};

/// Parses `bernoulli:p=<float>` or `markov:p_stay=<float>`; an optional
/// `seed=<int>` key is accepted as well.
ProcessSpec parse_process_spec(std::string_view text);
/// Parses `forwarding` or `xor[:init=<0|1>]`.
UnitSpec parse_unit_spec(std::string_view text);
std::string to_string(const ProcessSpec& spec);
std::string to_string(const UnitSpec& spec);

/// First-order Markov law over input symbols: initial[u] and
/// transition[u * size + u'] = P(u' | u). A memoryless process has identical
/// rows.
struct InputLaw {
  std::uint64_t size = 2;
  std::vector<double> initial;
  std::vector<double> transition;

  double prob(Symbol from, Symbol to) const {
    return transition[from * size + to];
  }
};

InputLaw input_law(const ProcessSpec& spec);

/// Finite-state transducer with a single-step update
/// (state, input) -> (state', output).
class Transducer {
 public:
  struct Step {
    std::uint32_t state;
    Symbol output;
  };

  /// Tables are indexed by state * input_size + input.
  Transducer(std::uint32_t n_states, std::uint64_t input_size,
             std::uint64_t output_size, std::vector<std::uint32_t> next_state,
             std::vector<Symbol> output, std::uint32_t initial_state);

  Step step(std::uint32_t state, Symbol input) const {
    const std::size_t i = state * input_size_ + input;
    return {next_state_[i], output_[i]};
  }

  std::uint32_t n_states() const noexcept { return n_states_; }
  std::uint64_t input_size() const noexcept { return input_size_; }
  std::uint64_t output_size() const noexcept { return output_size_; }
  std::uint32_t initial_state() const noexcept { return initial_; }

  /// True when the state after every step equals the emitted output, so the
  /// state is recoverable from the last output.
  bool state_tracks_output() const;

 private:
  std::uint32_t n_states_;
  std::uint64_t input_size_;
  std::uint64_t output_size_;
  std::vector<std::uint32_t> next_state_;
  std::vector<Symbol> output_;
  std::uint32_t initial_;
};

Transducer make_transducer(const UnitSpec& unit);

SymbolSeries generate_input(const ProcessSpec& spec, std::size_t n);

/// Output series, same length as the input. The initial state is consumed by
/// the first step and never emitted.
SymbolSeries simulate(const Transducer& unit, const SymbolSeries& input);
SymbolSeries simulate_unit(const UnitSpec& unit, const SymbolSeries& input);

/// Markov chain over composite states (current input u_n, unit state s_n,
/// last k outputs). The unit-state factor is dropped when the unit's state
/// tracks its last output, so forwarding and XOR units give 2^(k+1) states.
class MarkovChainModel {
 public:
  struct State {
    Symbol input;
    std::uint32_t unit_state;
    HistoryCode history;
  };
  /// One outgoing transition, labeled by the input that drives it and the
  /// output it emits.
  struct Arc {
    std::size_t target;
    double prob;
    Symbol next_input;
    Symbol next_output;
  };

  int k() const noexcept { return k_; }
  std::size_t size() const noexcept { return states_.size(); }
  const State& state(std::size_t i) const { return states_[i]; }
  const std::vector<Arc>& arcs(std::size_t i) const { return arcs_[i]; }
  /// States reachable from the process's initial conditions.
  bool reachable(std::size_t i) const { return reachable_[i]; }
  /// Reachable states in a closed communicating class.
  bool recurrent(std::size_t i) const { return recurrent_[i]; }
  std::uint64_t input_size() const noexcept { return input_size_; }
  std::uint64_t output_size() const noexcept { return output_size_; }
  std::uint64_t unit_state_count() const noexcept { return unit_states_; }
  std::uint64_t history_count() const noexcept { return histories_; }

  /// Dense row-major transition matrix; for small chains and tests.
  std::vector<double> dense_transition() const;

 private:
  friend MarkovChainModel build_joint_chain(const InputLaw&, const Transducer&,
                                            int, std::uint64_t);
  int k_ = 1;
  std::uint64_t input_size_ = 0, output_size_ = 0, unit_states_ = 1,
                histories_ = 1;
  std::vector<State> states_;
  std::vector<std::vector<Arc>> arcs_;
  std::vector<bool> reachable_;
  std::vector<bool> recurrent_;
};

MarkovChainModel build_joint_chain(const InputLaw& law, const Transducer& unit,
                                   int k,
                                   std::uint64_t max_states =
                                       kDefaultCellThreshold);
MarkovChainModel build_joint_chain(const ProcessSpec& proc,
                                   const UnitSpec& unit, int k);

struct StationaryOptions {
  double tol = 1e-14;
  std::size_t max_iterations = 1'000'000;
};

/// Power iteration from the uniform distribution over recurrent states,
/// averaging each iterate with its successor so periodic chains converge.
/// Returns a distribution over (input, unit state, history) whose keys are
/// the model's state indices. Throws NumericalError on non-convergence.
Distribution stationary_distribution(const MarkovChainModel& model,
                                     const StationaryOptions& opts = {});

/// Exact stationary joint over (history, next output, paired input). With
/// input_lag 0 the paired input is u_{n+1}; with 1 it is u_n.
Distribution exact_joint(const MarkovChainModel& model,
                         const Distribution& stationary, int input_lag = 0);
Distribution exact_joint(const MarkovChainModel& model,
                         const StationaryOptions& opts = {},
                         int input_lag = 0);

}  // namespace icais
