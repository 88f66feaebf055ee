// Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "../test_support.hpp"
#include "icais/estimators.hpp"
#include "icais/infodyn.hpp"
#include "icais/procsim.hpp"

using namespace icais;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string fmt_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", v);
  return buf;
}

const double kForwardingU2Ais = 0.3 * std::log2(0.6) + 0.7 * std::log2(1.4);

struct Pair {
  const char* name;
  ProcessSpec process;
  UnitSpec unit;
};

const std::vector<Pair>& pairs() {
  static const std::vector<Pair> p{
      {"forwarding+u1", ProcessSpec::bernoulli(0.5), UnitSpec::forwarding()},
      {"forwarding+u2", ProcessSpec::markov(0.7), UnitSpec::forwarding()},
      {"xor+u1", ProcessSpec::bernoulli(0.5), UnitSpec::xor_memory()},
      {"xor+u2", ProcessSpec::markov(0.7), UnitSpec::xor_memory()},
  };
  return p;
}

double oracle_value(Measure m, const ProcessSpec& p, const UnitSpec& u, int k) {
  return evaluate(m, exact_joint(build_joint_chain(p, u, k)), k).average_bits;
}

// 50 random datasets: alphabets <= 3, arbitrary 2-state transducers, N = 1e4.
struct RandomDataset {
  SymbolSeries x, u;
  int k;
};

const std::vector<RandomDataset>& random_datasets() {
  static const std::vector<RandomDataset> sets = [] {
    std::vector<RandomDataset> out;
    Rng rng(20240601);
    for (int i = 0; i < 50; ++i) {
      const std::uint64_t in = 2 + rng.below(2), outsz = 2 + rng.below(2);
      const auto unit = testing::random_transducer(rng, 2, in, outsz);
      auto u = testing::random_series(rng, in, 10'000);
      auto x = simulate(unit, u);
      out.push_back({std::move(x), std::move(u), 1 + i % 2});
    }
    return out;
  }();
  return sets;
}

// Criterion 4 datasets: per pair and seed, one 1e6 run; shorter runs are
// prefixes of it.
const std::vector<std::size_t> kSizes{1'000, 10'000, 100'000, 1'000'000};

struct SimRun {
  std::size_t pair;
  std::uint64_t seed;
  SymbolSeries u, x;
};

const std::vector<SimRun>& sim_runs() {
  static const std::vector<SimRun> runs = [] {
    std::vector<SimRun> out;
    for (std::size_t p = 0; p < pairs().size(); ++p)
      for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto spec = pairs()[p].process;
        spec.seed = seed;
        auto u = generate_input(spec, kSizes.back());
        auto x = simulate_unit(pairs()[p].unit, u);
        out.push_back({p, seed, std::move(u), std::move(x)});
      }
    return out;
  }();
  return runs;
}

SymbolSeries prefix(const SymbolSeries& s, std::size_t n) {
  return SymbolSeries(s.alphabet(),
                      std::vector<Symbol>(s.data().begin(), s.data().begin() + n));
}

Verdict criterion1() {
  struct Case {
    const char* name;
    ProcessSpec p;
    UnitSpec u;
    double expected;
  } cases[] = {
      {"forwarding+u1", ProcessSpec::bernoulli(0.5), UnitSpec::forwarding(), 0.0},
      {"forwarding+u2", ProcessSpec::markov(0.7), UnitSpec::forwarding(), kForwardingU2Ais},
      {"xor+u1", ProcessSpec::bernoulli(0.5), UnitSpec::xor_memory(), 0.0},
  };
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    const double v = oracle_value(Measure::ais, c.p, c.u, 1);
    ok = ok && std::abs(v - c.expected) <= 1e-9;
    detail += std::string(c.name) + "=" + fmt_full(v) + " ";
  }
  return {ok, detail};
}

Verdict criterion2() {
  struct Case {
    const char* name;
    ProcessSpec p;
    UnitSpec u;
    double expected;
  } cases[] = {
      {"forwarding+u1", ProcessSpec::bernoulli(0.5), UnitSpec::forwarding(), 0.0},
      {"forwarding+u2", ProcessSpec::markov(0.7), UnitSpec::forwarding(), 0.0},
      {"xor+u1", ProcessSpec::bernoulli(0.5), UnitSpec::xor_memory(), 1.0},
  };
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    const double v = oracle_value(Measure::icais, c.p, c.u, 1);
    ok = ok && std::abs(v - c.expected) <= 1e-9;
    detail += std::string(c.name) + "=" + fmt_full(v) + " ";
  }
  return {ok, detail};
}

Verdict criterion3() {
  double worst_local = 0, worst_avg = 0;
  std::size_t locals = 0;
  for (const auto& d : random_datasets()) {
    const auto t = count_joint(d.x, &d.u, {d.k});
    const auto a = local_ais(t), c = local_icais(t), i = local_interaction(t);
    for (std::size_t n = 0; n < a.values.size(); ++n) {
      worst_local = std::max(worst_local, std::abs(c.values[n] - (a.values[n] + i.values[n])));
      ++locals;
    }
    worst_avg = std::max(worst_avg, std::abs(icais::icais(t).average_bits -
                                             (ais(t).average_bits + interaction(t).average_bits)));
  }
  return {worst_local <= 1e-12 && worst_avg <= 1e-12,
          "50 datasets, " + std::to_string(locals) + " local values, max local gap " +
              fmt(worst_local) + ", max average gap " + fmt(worst_avg)};
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

Verdict criterion4() {
  bool ok = true;
  std::string detail;
  for (std::size_t p = 0; p < pairs().size(); ++p)
    for (Measure m : {Measure::ais, Measure::icais}) {
      const double truth = oracle_value(m, pairs()[p].process, pairs()[p].unit, 1);
      std::vector<std::vector<double>> errors(kSizes.size());
      for (const auto& run : sim_runs()) {
        if (run.pair != p) continue;
        for (std::size_t s = 0; s < kSizes.size(); ++s) {
          const auto x = prefix(run.x, kSizes[s]), u = prefix(run.u, kSizes[s]);
          const double est = evaluate(m, count_joint(x, &u, {1})).average_bits;
          errors[s].push_back(std::abs(est - truth));
        }
      }
      const double worst_final = *std::max_element(errors.back().begin(), errors.back().end());
      std::vector<double> medians;
      for (const auto& e : errors) medians.push_back(median(e));
      const bool exact = std::all_of(errors.begin(), errors.end(), [](const auto& e) {
        return *std::max_element(e.begin(), e.end()) <= 1e-12;
      });
      bool decreasing = true;
      for (std::size_t s = 1; s < medians.size(); ++s)
        decreasing = decreasing && medians[s] < medians[s - 1];
      const bool pass = worst_final <= 0.005 && (decreasing || exact);
      ok = ok && pass;
      detail += "\n    " + std::string(pairs()[p].name) + " " +
                std::string(to_string(m)) + ": max err at 1e6 " + fmt(worst_final) +
                ", medians";
      for (double md : medians) detail += " " + fmt(md);
      if (exact) detail += " (exact at every N)";
      if (!pass) detail += " FAIL";
    }
  return {ok, detail};
}

Verdict criterion5() {
  double worst = 0;
  std::size_t checked = 0;
  auto check = [&](const JointCountTable& t) {
    const auto d = plugin_distribution(t);
    worst = std::max(worst, std::abs(ais(t).average_bits - mutual_information(d, {0}, {1})));
    worst = std::max(worst, std::abs(icais::icais(t).average_bits -
                                     conditional_mutual_information(d, {0}, {1}, {2})));
    ++checked;
  };
  for (const auto& d : random_datasets()) check(count_joint(d.x, &d.u, {d.k}));
  for (const auto& run : sim_runs())
    for (std::size_t n : kSizes) {
      const auto x = prefix(run.x, n), u = prefix(run.u, n);
      check(count_joint(x, &u, {1}));
    }
  // oracle joints
  for (const auto& pr : pairs())
    for (int k = 1; k <= 4; ++k) {
      const auto j = exact_joint(build_joint_chain(pr.process, pr.unit, k));
      worst = std::max(worst, std::abs(average(Measure::ais, j) - mutual_information(j, {0}, {1})));
      worst = std::max(worst, std::abs(average(Measure::icais, j) -
                                       conditional_mutual_information(j, {0}, {1}, {2})));
      ++checked;
    }
  return {worst <= 1e-12,
          std::to_string(checked) + " datasets, max gap " + fmt(worst)};
}

// Rank of (T^T - I) restricted to the reachable states; a unique stationary
// law needs rank m - 1.
bool unique_stationary(const MarkovChainModel& model, const std::vector<bool>& keep) {
  const auto t = model.dense_transition();
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < model.size(); ++i)
    if (keep[i]) idx.push_back(i);
  const auto m = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd a(m, m);
  for (Eigen::Index r = 0; r < m; ++r)
    for (Eigen::Index c = 0; c < m; ++c)
      a(r, c) = t[idx[c] * model.size() + idx[r]] - (r == c ? 1.0 : 0.0);
  return a.fullPivLu().rank() == m - 1;
}

Verdict criterion6() {
  std::vector<MarkovChainModel> chains;
  for (const auto& pr : pairs())
    for (int k = 1; k <= 3; ++k) chains.push_back(build_joint_chain(pr.process, pr.unit, k));
  Rng rng(606);
  std::size_t skipped = 0;
  while (chains.size() < 12 + 40) {
    const std::uint64_t in = 2 + rng.below(2);
    InputLaw law{in, std::vector<double>(in), std::vector<double>(in * in)};
    double z = 0;
    for (auto& p : law.initial) z += (p = rng.uniform());
    for (auto& p : law.initial) p /= z;
    for (std::uint64_t r = 0; r < in; ++r) {
      double row = 0;
      for (std::uint64_t c = 0; c < in; ++c) row += (law.transition[r * in + c] = rng.uniform());
      for (std::uint64_t c = 0; c < in; ++c) law.transition[r * in + c] /= row;
    }
    const auto unit = testing::random_transducer(rng, 2, in, 2);
    auto model = build_joint_chain(law, unit, 1);
    if (model.size() > 16) continue;
    std::vector<bool> keep(model.size());
    for (std::size_t i = 0; i < model.size(); ++i) keep[i] = model.reachable(i);
    if (!unique_stationary(model, keep)) {
      ++skipped;
      continue;
    }
    chains.push_back(std::move(model));
  }
  double worst = 0;
  for (const auto& model : chains) {
    std::vector<bool> keep(model.size());
    for (std::size_t i = 0; i < model.size(); ++i) keep[i] = model.reachable(i);
    const auto solved = testing::solve_balance(model.dense_transition(), model.size(), keep);
    const auto pi = stationary_distribution(model);
    double l1 = 0;
    for (std::size_t i = 0; i < model.size(); ++i) l1 += std::abs(pi.probability(i) - solved[i]);
    worst = std::max(worst, l1);
  }
  return {worst <= 1e-9, std::to_string(chains.size()) + " chains (<= 16 states), max L1 " +
                             fmt(worst) + "; " + std::to_string(skipped) +
                             " random chains without a unique stationary law skipped"};
}

SymbolSeries relabel(const SymbolSeries& s, const std::vector<Symbol>& perm) {
  std::vector<Symbol> d(s.data());
  for (auto& v : d) v = perm[v];
  return SymbolSeries(s.alphabet(), std::move(d));
}

Verdict criterion7() {
  Rng rng(707);
  double min_avg = INFINITY, worst_relabel = 0, min_local = INFINITY;
  // arbitrary data: iid, random-transducer and simulated datasets
  std::vector<std::pair<SymbolSeries, SymbolSeries>> data;
  for (int i = 0; i < 30; ++i) {
    const std::uint64_t ax = 1 + rng.below(3), au = 1 + rng.below(3);
    const std::size_t n = 20 + rng.below(2000);
    data.emplace_back(testing::random_series(rng, ax, n), testing::random_series(rng, au, n));
  }
  for (const auto& d : random_datasets()) data.emplace_back(d.x, d.u);
  for (const auto& [x, u] : data)
    for (int k = 1; k <= 3; ++k) {
      if (x.length() <= static_cast<std::size_t>(k)) continue;
      const auto t = count_joint(x, &u, {k});
      const double a = ais(t).average_bits, c = icais::icais(t).average_bits;
      min_avg = std::min({min_avg, a, c});
      std::vector<Symbol> px(x.alphabet().size()), pu(u.alphabet().size());
      std::iota(px.begin(), px.end(), 0);
      std::iota(pu.begin(), pu.end(), 0);
      std::shuffle(px.begin(), px.end(), rng);
      std::shuffle(pu.begin(), pu.end(), rng);
      const auto xr = relabel(x, px), ur = relabel(u, pu);
      const auto tr = count_joint(xr, &ur, {k});
      worst_relabel = std::max({worst_relabel, std::abs(ais(tr).average_bits - a),
                                std::abs(icais::icais(tr).average_bits - c)});
    }
  // deterministic units: output is also the next state, so (history, input)
  // determines the next output
  std::vector<Transducer> units{make_transducer(UnitSpec::forwarding()),
                                make_transducer(UnitSpec::xor_memory()),
                                make_transducer(UnitSpec::xor_memory(1))};
  for (int i = 0; i < 10; ++i) {
    const std::uint32_t s = 2 + static_cast<std::uint32_t>(rng.below(2));
    const std::uint64_t in = 2 + rng.below(2);
    std::vector<std::uint32_t> next(s * in);
    for (auto& v : next) v = static_cast<std::uint32_t>(rng.below(s));
    std::vector<Symbol> out(next.begin(), next.end());
    units.emplace_back(s, in, s, next, out, 0);
  }
  for (const auto& unit : units) {
    const auto u = testing::random_series(rng, unit.input_size(), 5000);
    const auto x = simulate(unit, u);
    for (int k = 1; k <= 2; ++k) {
      const auto prof = local_icais(count_joint(x, &u, {k}));
      for (double v : prof.values) min_local = std::min(min_local, v);
    }
  }
  const bool ok = min_avg >= -1e-9 && worst_relabel <= 1e-12 && min_local >= -1e-12;
  return {ok, "min average " + fmt(min_avg) + ", max relabel gap " + fmt(worst_relabel) +
                  ", min deterministic-unit local icAIS " + fmt(min_local)};
}

Verdict criterion8() {
  bool ok = true;
  std::string fwd = "forwarding+u2:", xr = "xor+u1:";
  for (int k = 1; k <= 4; ++k) {
    const double a = oracle_value(Measure::ais, ProcessSpec::markov(0.7), UnitSpec::forwarding(), k);
    const double b = oracle_value(Measure::ais, ProcessSpec::bernoulli(0.5), UnitSpec::xor_memory(), k);
    ok = ok && std::abs(a - kForwardingU2Ais) <= 1e-9 && std::abs(b) <= 1e-9;
    fwd += " k" + std::to_string(k) + "=" + fmt_full(a);
    xr += " k" + std::to_string(k) + "=" + fmt_full(b);
  }
  return {ok, fwd + "; " + xr};
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* title;
    std::function<Verdict()> run;
  } criteria[] = {
      {1, "oracle AIS values", criterion1},
      {2, "oracle icAIS values", criterion2},
      {3, "icAIS = AIS + interaction identity", criterion3},
      {4, "empirical convergence to the oracle", criterion4},
      {5, "measures agree with MI and CMI", criterion5},
      {6, "power iteration matches balance-equation solve", criterion6},
      {7, "property suite", criterion7},
      {8, "oracle k-sweep", criterion8},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::printf("%s criterion %d: %s: %s\n", v.pass ? "PASS" : "FAIL", c.id, c.title,
                v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed,
              std::size(criteria));
  return failed == 0 ? 0 : 1;
}
