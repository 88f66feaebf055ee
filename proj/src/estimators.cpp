#include <cmath>
#include <numbers>
#include <set>

#include "icais/error.hpp"
#include "icais/estimators.hpp"

namespace icais {

namespace {

void require_disjoint(std::initializer_list<const VarSet*> sets,
                      const char* what) {
  std::set<std::size_t> seen;
  std::size_t n = 0;
  for (const VarSet* s : sets) {
    seen.insert(s->begin(), s->end());
    n += s->size();
  }
  if (seen.size() != n)
    throw UsageError(std::string(what) + ": variable sets must be disjoint");
}

VarSet concat(const VarSet& a, const VarSet& b) {
  VarSet out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

double miller_madow_term(const Distribution& m) {
  const auto n = m.sample_count();
  if (!n || *n == 0)
    throw UsageError("Miller-Madow correction needs a plug-in distribution");
  const double support = static_cast<double>(m.entries().size());
  return (support - 1.0) / (2.0 * static_cast<double>(*n) * std::numbers::ln2);
}

}  // namespace

double entropy(const Distribution& d, const VarSet& vars,
               const EstimatorOptions& opts) {
  if (vars.empty()) throw UsageError("entropy: empty variable set");
  const Distribution m = d.marginal(vars);
  double h = 0.0;
  for (const auto& e : m.entries()) h -= e.prob * std::log2(e.prob);
  if (opts.miller_madow) h += miller_madow_term(m);
  return h;
}

double conditional_entropy(const Distribution& d, const VarSet& target,
                           const VarSet& given, const EstimatorOptions& opts) {
  if (target.empty()) throw UsageError("conditional_entropy: empty target");
  require_disjoint({&target, &given}, "conditional_entropy");
  if (given.empty()) return entropy(d, target, opts);
  if (opts.miller_madow)
    return entropy(d, concat(target, given), opts) - entropy(d, given, opts);

  // H(T|G) = -sum p(t,g) log p(t,g) / p(g). G occupies the trailing axes of
  // the joint marginal, so the g-part of a key is key mod |G|.
  const Distribution joint = d.marginal(concat(target, given));
  VarSet g_in_joint;
  std::uint64_t g_states = 1;
  for (std::size_t i = 0; i < given.size(); ++i) {
    g_in_joint.push_back(target.size() + i);
    g_states *= joint.axes()[target.size() + i].size();
  }
  const Distribution pg = joint.marginal(g_in_joint);
  double h = 0.0;
  for (const auto& e : joint.entries()) {
    const double p_g = pg.probability(e.key % g_states);
    h -= e.prob * std::log2(e.prob / p_g);
  }
  return h;
}

double mutual_information(const Distribution& d, const VarSet& a,
                          const VarSet& b, const EstimatorOptions& opts) {
  if (a.empty() || b.empty())
    throw UsageError("mutual_information: empty variable set");
  require_disjoint({&a, &b}, "mutual_information");
  return entropy(d, a, opts) - conditional_entropy(d, a, b, opts);
}

double conditional_mutual_information(const Distribution& d, const VarSet& a,
                                      const VarSet& b, const VarSet& given,
                                      const EstimatorOptions& opts) {
  if (a.empty() || b.empty())
    throw UsageError("conditional_mutual_information: empty variable set");
  require_disjoint({&a, &b, &given}, "conditional_mutual_information");
  return conditional_entropy(d, a, given, opts) -
         conditional_entropy(d, a, concat(b, given), opts);
}

}  // namespace icais
