#include "icais/procsim.hpp"

#include <charconv>
#include <map>

#include "icais/error.hpp"
#include "icais/rng.hpp"

namespace icais {

void ProcessSpec::validate() const {
  if (kind == Kind::bernoulli) {
    if (!(p >= 0.0 && p <= 1.0))
      throw UsageError("bernoulli p must lie in [0, 1], got " +
                       std::to_string(p));
  } else if (!(p > 0.0 && p < 1.0)) {
    throw UsageError("markov p_stay must lie in (0, 1), got " +
                     std::to_string(p));
  }
}

void UnitSpec::validate() const {
  if (kind == Kind::xor_memory && initial_state > 1)
    throw UsageError("xor unit initial state must be 0 or 1");
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

struct ParsedSpec {
  std::string kind;
  std::map<std::string, std::string, std::less<>> params;
};

ParsedSpec split_spec(std::string_view text) {
  ParsedSpec out;
  const auto colon = text.find(':');
  out.kind = std::string(trim(text.substr(0, colon)));
  if (out.kind.empty()) throw UsageError("empty spec string");
  if (colon == std::string_view::npos) return out;
  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    std::string_view item = trim(rest.substr(0, comma));
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw UsageError("malformed spec parameter '" + std::string(item) +
                       "' in '" + std::string(text) + "' (expected key=value)");
    auto [it, inserted] = out.params.emplace(std::string(trim(item.substr(0, eq))),
                                             std::string(trim(item.substr(eq + 1))));
    if (!inserted)
      throw UsageError("duplicate spec parameter '" + it->first + "'");
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

double parse_double(const std::string& s, std::string_view key) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw UsageError("parameter " + std::string(key) + "='" + s +
                     "' is not a number");
  return v;
}

std::uint64_t parse_uint(const std::string& s, std::string_view key) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw UsageError("parameter " + std::string(key) + "='" + s +
                     "' is not a non-negative integer");
  return v;
}

void reject_unknown(const ParsedSpec& spec,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : spec.params) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok)
      throw UsageError("unknown parameter '" + key + "' for '" + spec.kind +
                       "'");
  }
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

ProcessSpec parse_process_spec(std::string_view text) {
  const ParsedSpec parsed = split_spec(text);
  ProcessSpec spec;
  std::string_view prob_key;
  if (parsed.kind == "bernoulli") {
    spec.kind = ProcessSpec::Kind::bernoulli;
    prob_key = "p";
  } else if (parsed.kind == "markov") {
    spec.kind = ProcessSpec::Kind::markov_binary;
    prob_key = "p_stay";
  } else {
    throw UsageError("unknown process kind '" + parsed.kind +
                     "' (expected bernoulli or markov)");
  }
  reject_unknown(parsed, {prob_key, "seed"});
  auto it = parsed.params.find(prob_key);
  if (it == parsed.params.end())
    throw UsageError("process '" + parsed.kind + "' needs parameter " +
                     std::string(prob_key));
  spec.p = parse_double(it->second, prob_key);
  if (auto s = parsed.params.find("seed"); s != parsed.params.end())
    spec.seed = parse_uint(s->second, "seed");
  spec.validate();
  return spec;
}

UnitSpec parse_unit_spec(std::string_view text) {
  const ParsedSpec parsed = split_spec(text);
  UnitSpec spec;
  if (parsed.kind == "forwarding") {
    reject_unknown(parsed, {});
    spec.kind = UnitSpec::Kind::forwarding;
  } else if (parsed.kind == "xor") {
    reject_unknown(parsed, {"init"});
    spec.kind = UnitSpec::Kind::xor_memory;
    if (auto it = parsed.params.find("init"); it != parsed.params.end()) {
      const auto v = parse_uint(it->second, "init");
      if (v > 1) throw UsageError("xor init must be 0 or 1");
      spec.initial_state = static_cast<Symbol>(v);
    }
  } else {
    throw UsageError("unknown unit kind '" + parsed.kind +
                     "' (expected forwarding or xor)");
  }
  return spec;
}

std::string to_string(const ProcessSpec& spec) {
  if (spec.kind == ProcessSpec::Kind::bernoulli)
    return "bernoulli:p=" + format_double(spec.p);
  return "markov:p_stay=" + format_double(spec.p);
}

std::string to_string(const UnitSpec& spec) {
  if (spec.kind == UnitSpec::Kind::forwarding) return "forwarding";
  return "xor:init=" + std::to_string(spec.initial_state);
}

InputLaw input_law(const ProcessSpec& spec) {
  spec.validate();
  InputLaw law;
  law.size = 2;
  if (spec.kind == ProcessSpec::Kind::bernoulli) {
    law.initial = {1.0 - spec.p, spec.p};
    law.transition = {1.0 - spec.p, spec.p, 1.0 - spec.p, spec.p};
  } else {
    const double stay = spec.p;
    law.initial = {0.5, 0.5};
    law.transition = {stay, 1.0 - stay, 1.0 - stay, stay};
  }
  return law;
}

Transducer::Transducer(std::uint32_t n_states, std::uint64_t input_size,
                       std::uint64_t output_size,
                       std::vector<std::uint32_t> next_state,
                       std::vector<Symbol> output, std::uint32_t initial_state)
    : n_states_(n_states),
      input_size_(input_size),
      output_size_(output_size),
      next_state_(std::move(next_state)),
      output_(std::move(output)),
      initial_(initial_state) {
  if (n_states_ < 1 || input_size_ < 1 || output_size_ < 1)
    throw UsageError("transducer needs at least one state, input and output");
  const std::size_t cells = n_states_ * input_size_;
  if (next_state_.size() != cells || output_.size() != cells)
    throw UsageError("transducer tables must have states*inputs entries");
  for (std::size_t i = 0; i < cells; ++i) {
    if (next_state_[i] >= n_states_)
      throw UsageError("transducer next-state out of range");
    if (output_[i] >= output_size_)
      throw UsageError("transducer output out of range");
  }
  if (initial_ >= n_states_)
    throw UsageError("transducer initial state out of range");
}

bool Transducer::state_tracks_output() const {
  if (n_states_ != output_size_) return false;
  for (std::size_t i = 0; i < next_state_.size(); ++i)
    if (next_state_[i] != output_[i]) return false;
  return true;
}

Transducer make_transducer(const UnitSpec& unit) {
  unit.validate();
  if (unit.kind == UnitSpec::Kind::forwarding)
    return Transducer(1, 2, 2, {0, 0}, {0, 1}, 0);
  // state = last output; output = input xor state
  return Transducer(2, 2, 2, {0, 1, 1, 0}, {0, 1, 1, 0}, unit.initial_state);
}

SymbolSeries generate_input(const ProcessSpec& spec, std::size_t n) {
  spec.validate();
  if (n < 1) throw UsageError("series length n must be >= 1");
  Rng rng(spec.seed);
  std::vector<Symbol> data(n);
  if (spec.kind == ProcessSpec::Kind::bernoulli) {
    for (auto& s : data) s = rng.bernoulli(spec.p) ? 1 : 0;
  } else {
    data[0] = rng.bernoulli(0.5) ? 1 : 0;
    for (std::size_t i = 1; i < n; ++i)
      data[i] = rng.bernoulli(spec.p) ? data[i - 1] : 1 - data[i - 1];
  }
  return SymbolSeries(Alphabet::binary(), std::move(data));
}

SymbolSeries simulate(const Transducer& unit, const SymbolSeries& input) {
  if (input.alphabet().size() > unit.input_size())
    throw DataError("input alphabet of size " +
                    std::to_string(input.alphabet().size()) +
                    " exceeds the unit's input alphabet of size " +
                    std::to_string(unit.input_size()));
  std::vector<Symbol> out(input.length());
  std::uint32_t state = unit.initial_state();
  for (std::size_t i = 0; i < input.length(); ++i) {
    const auto step = unit.step(state, input[i]);
    state = step.state;
    out[i] = step.output;
  }
  return SymbolSeries(Alphabet(unit.output_size()), std::move(out));
}

SymbolSeries simulate_unit(const UnitSpec& unit, const SymbolSeries& input) {
  if (input.alphabet().size() > 2)
    throw DataError("forwarding and xor units need a binary input series");
  return simulate(make_transducer(unit), input);
}

}  // namespace icais
