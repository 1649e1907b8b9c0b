#include "admo/rewriting.hpp"

#include <algorithm>

namespace admo {

void RewriteSystem::add_rule(Term lhs, Term rhs, std::string name) {
  if (lhs.kind == Term::Kind::Var)
    throw std::invalid_argument("rule left side must not be a variable");
  if (!well_formed(lhs, signature) || !well_formed(rhs, signature))
    throw std::invalid_argument("rule sides must be well-formed over the signature");
  auto lv = free_vars(lhs);
  for (const auto& v : free_vars(rhs))
    if (!lv.count(v))
      throw std::invalid_argument("rule right side introduces variable " + v);
  if (!name.empty())
    for (const auto& r : rules)
      if (r.name == name) throw std::invalid_argument("duplicate rule name " + name);
  rules.push_back({std::move(lhs), std::move(rhs), std::move(name)});
}

std::string RewriteSystem::rule_label(int index) const {
  if (index < 0 || index >= static_cast<int>(rules.size())) return "?";
  if (!rules[index].name.empty()) return rules[index].name;
  return "r" + std::to_string(index + 1);
}

namespace {

Term rename_vars(const Term& t, const std::string& suffix) {
  switch (t.kind) {
    case Term::Kind::Var:
      return Term::var(t.name + suffix);
    case Term::Kind::Bound:
      return t;
    case Term::Kind::App: {
      Term r = t;
      for (auto& a : r.args) a = rename_vars(a, suffix);
      return r;
    }
  }
  return t;
}

}  // namespace

std::vector<CriticalPair> critical_pairs(const RewriteSystem& R) {
  std::vector<CriticalPair> out;
  const int n = static_cast<int>(R.rules.size());
  // Root overlaps of distinct rules, one orientation per unordered pair.
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Term li = R.rules[i].lhs;
      Term lj = rename_vars(R.rules[j].lhs, "#2");
      auto s = unify(li, lj);
      if (!s) continue;
      Term source = substitute(li, *s);
      Term left = substitute(R.rules[i].rhs, *s);
      Term right = substitute(rename_vars(R.rules[j].rhs, "#2"), *s);
      if (left == right) continue;  // trivial
      out.push_back({source, left, right, i, j, Position{}});
    }
  }
  // Overlaps of rule j into a proper non-variable position of rule i.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Term li = R.rules[i].lhs;
      Term lj = rename_vars(R.rules[j].lhs, "#2");
      Term rj = rename_vars(R.rules[j].rhs, "#2");
      for (const Position& p : term_positions(li)) {
        if (p.path.empty()) continue;
        const Term* sub = subterm_at(li, p);
        if (sub->kind == Term::Kind::Var) continue;
        auto s = unify(*sub, lj);
        if (!s) continue;
        Term source = substitute(li, *s);
        Term inner = *replace_at(source, p, substitute(rj, *s));
        Term root = substitute(R.rules[i].rhs, *s);
        if (inner == root) continue;
        out.push_back({source, inner, root, j, i, p});
      }
    }
  }
  return out;
}

AnalysisVerdict locally_confluent(const RewriteSystem& R, const Budget& budget) {
  AnalysisVerdict v;
  v.kind = AnalysisVerdict::Kind::Holds;
  for (const auto& cp : critical_pairs(R)) {
    auto join = joinable(R, cp.left, cp.right, budget);
    if (join.meet) {
      v.bound_used = std::max({v.bound_used, join.from_left.length(), join.from_right.length()});
      continue;
    }
    if (join.exact) {
      v.kind = AnalysisVerdict::Kind::Fails;
      NonJoinableWitness w;
      w.seed = cp.source;
      w.left = cp.left;
      w.right = cp.right;
      w.to_left = Derivation<Term>{cp.source, {{cp.left_rule, cp.pos, cp.left}}};
      w.to_right = Derivation<Term>{cp.source, {{cp.right_rule, Position{}, cp.right}}};
      v.nonjoinable = w;
      v.note = "critical pair not joinable";
      return v;
    }
    v.kind = AnalysisVerdict::Kind::Unknown;
    v.note = "joinability search truncated by budget";
  }
  return v;
}

AnalysisVerdict confluent(const RewriteSystem& R, const std::vector<Term>& universe,
                          const Budget& budget) {
  AnalysisVerdict v;
  v.kind = AnalysisVerdict::Kind::Holds;
  std::map<Term, ReductSet<Term>, Less<Term>> cache;
  auto closure = [&](const Term& t) -> const ReductSet<Term>& {
    auto it = cache.find(t);
    if (it == cache.end()) it = cache.emplace(t, reducts(R, t, budget)).first;
    return it->second;
  };
  bool any_unknown = false;
  for (const Term& seed : universe) {
    const ReductSet<Term>& rs = closure(seed);
    if (!rs.complete) {
      any_unknown = true;
      continue;
    }
    v.bound_used = std::max(v.bound_used, rs.steps_used);
    std::vector<Term> elems = rs.elements();
    for (size_t a = 0; a < elems.size(); ++a) {
      for (size_t b = a + 1; b < elems.size(); ++b) {
        auto join = join_closures(closure(elems[a]), closure(elems[b]));
        if (join.meet) continue;
        if (join.exact) {
          v.kind = AnalysisVerdict::Kind::Fails;
          NonJoinableWitness w;
          w.seed = seed;
          w.left = elems[a];
          w.right = elems[b];
          w.to_left = rs.derivation_to(elems[a]);
          w.to_right = rs.derivation_to(elems[b]);
          v.nonjoinable = w;
          v.note = "diverging reducts are not joinable";
          return v;
        }
        any_unknown = true;
      }
    }
  }
  if (any_unknown) {
    v.kind = AnalysisVerdict::Kind::Unknown;
    v.note = "closure truncated by budget";
  }
  return v;
}

AnalysisVerdict terminating(const RewriteSystem& R, const std::vector<Term>& universe,
                            size_t step_budget, const Budget& budget) {
  AnalysisVerdict v;
  v.kind = AnalysisVerdict::Kind::Holds;
  // Depth-first search for a cycle; longest derivation lengths are accumulated
  // on pop so budget overflows through shared subgraphs are caught too.
  struct Frame {
    Term term;
    std::vector<OneStep<Term>> succ;
    size_t next = 0;
  };
  std::map<Term, int, Less<Term>> state;  // 1 = on current path, 2 = fully explored
  std::map<Term, size_t, Less<Term>> longest;
  size_t expansions = 0;
  auto overflow_derivation = [&](const Term& from) {
    // Follow a maximal chain; `longest` is consistent on explored nodes.
    Derivation<Term> d;
    d.start = from;
    Term cur = from;
    while (d.steps.size() <= step_budget) {
      auto succ = one_step_reducts(R, cur);
      if (succ.empty()) break;
      const OneStep<Term>* best = &succ.front();
      size_t best_len = 0;
      for (const auto& os : succ) {
        auto it = longest.find(os.result);
        size_t len = it == longest.end() ? 0 : it->second;
        if (len > best_len) {
          best_len = len;
          best = &os;
        }
      }
      d.steps.push_back({best->rule, best->pos, best->result});
      cur = best->result;
    }
    return d;
  };
  for (const Term& seed : universe) {
    if (state.count(seed)) continue;
    std::vector<Frame> path;
    path.push_back({seed, one_step_reducts(R, seed), 0});
    state[seed] = 1;
    while (!path.empty()) {
      Frame& f = path.back();
      if (f.next >= f.succ.size()) {
        size_t len = 0;
        for (const auto& os : f.succ) {
          auto it = longest.find(os.result);
          if (it != longest.end()) len = std::max(len, it->second + 1);
        }
        longest[f.term] = len;
        v.bound_used = std::max(v.bound_used, len);
        state[f.term] = 2;
        path.pop_back();
        if (len > step_budget) {
          NonTerminationWitness w;
          w.is_cycle = false;
          w.derivation = overflow_derivation(f.term);
          v.kind = AnalysisVerdict::Kind::Fails;
          v.nontermination = std::move(w);
          v.note = "derivation exceeds the step budget";
          return v;
        }
        continue;
      }
      const OneStep<Term>& os = f.succ[f.next++];
      auto it = state.find(os.result);
      if (it != state.end() && it->second == 2) continue;
      if (it != state.end() && it->second == 1) {
        // Cycle: derivation from the first occurrence back to the repeated term.
        NonTerminationWitness w;
        w.is_cycle = true;
        size_t from = 0;
        while (from < path.size() && path[from].term != os.result) ++from;
        w.cycle_start = 0;
        w.derivation.start = path[from].term;
        for (size_t k = from + 1; k < path.size(); ++k) {
          const Frame& prev = path[k - 1];
          const OneStep<Term>& st = prev.succ[prev.next - 1];
          w.derivation.steps.push_back({st.rule, st.pos, path[k].term});
        }
        w.derivation.steps.push_back({os.rule, os.pos, os.result});
        v.kind = AnalysisVerdict::Kind::Fails;
        v.nontermination = std::move(w);
        v.note = "cyclic derivation";
        return v;
      }
      if (++expansions > budget.max_objects) {
        v.kind = AnalysisVerdict::Kind::Unknown;
        v.note = "exploration truncated by budget";
        return v;
      }
      state[os.result] = 1;
      path.push_back({os.result, one_step_reducts(R, os.result), 0});
    }
  }
  return v;
}

namespace {

void collect_subterms(const Term& t, std::vector<Term>& out) {
  out.push_back(t);
  if (t.kind == Term::Kind::App)
    for (const auto& a : t.args) collect_subterms(a, out);
}

}  // namespace

std::vector<Term> default_universe(const RewriteSystem& R, const std::vector<Term>& extra,
                                   size_t generator_depth) {
  std::vector<Term> out;
  for (const auto& rule : R.rules) {
    collect_subterms(rule.lhs, out);
    collect_subterms(rule.rhs, out);
  }
  for (const auto& t : extra) collect_subterms(t, out);
  // All ground terms over the signature up to the generator depth.
  std::vector<Term> pool;
  for (size_t d = 0; d < generator_depth; ++d) {
    std::vector<Term> next;
    for (const auto& [f, arity] : R.signature.functions) {
      if (arity == 0) {
        if (d == 0) next.push_back(Term::app(f));
        continue;
      }
      if (d == 0 || pool.empty()) continue;
      std::vector<size_t> idx(static_cast<size_t>(arity), 0);
      while (true) {
        std::vector<Term> args;
        for (size_t k : idx) args.push_back(pool[k]);
        next.push_back(Term::app(f, std::move(args)));
        size_t k = 0;
        while (k < idx.size()) {
          if (++idx[k] < pool.size()) break;
          idx[k] = 0;
          ++k;
        }
        if (k == idx.size()) break;
      }
    }
    pool.insert(pool.end(), next.begin(), next.end());
    std::sort(pool.begin(), pool.end(), Less<Term>{});
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  }
  out.insert(out.end(), pool.begin(), pool.end());
  out.erase(std::remove_if(out.begin(), out.end(),
                           [](const Term& t) { return !free_vars(t).empty(); }),
            out.end());
  std::sort(out.begin(), out.end(), Less<Term>{});
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace admo
