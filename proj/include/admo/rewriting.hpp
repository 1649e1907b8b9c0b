#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "admo/term.hpp"

namespace admo {

/// Oriented rule l -> r. The left side is never a variable and the right side
/// introduces no new variables, so one-step rewriting is finitely branching.
struct RewriteRule {
  Term lhs;
  Term rhs;
  std::string name;  // optional label
};

struct RewriteSystem {
  Signature signature;
  std::vector<RewriteRule> rules;

  /// Validates the rule against the signature and the rule invariants.
  void add_rule(Term lhs, Term rhs, std::string name = "");
  std::string rule_label(int index) const;
};

struct Budget {
  size_t max_objects = 10000;
  size_t max_depth = 64;
};

template <typename T>
struct Less {
  bool operator()(const T& a, const T& b) const { return compare(a, b) < 0; }
};

template <typename T>
struct OneStep {
  T result;
  int rule = -1;
  Position pos;
};

/// Exactly the set { o' | o ->1 o' }, each with its rule and redex position,
/// in leftmost-outermost position order and file order of rules.
template <typename T>
std::vector<OneStep<T>> one_step_reducts(const RewriteSystem& R, const T& obj) {
  std::vector<OneStep<T>> out;
  for (const Position& p : term_positions(obj)) {
    const Term* sub = subterm_at(obj, p);
    for (size_t i = 0; i < R.rules.size(); ++i) {
      auto s = match_pattern(R.rules[i].lhs, *sub);
      if (!s) continue;
      auto replaced = replace_at(obj, p, substitute(R.rules[i].rhs, *s));
      out.push_back({std::move(*replaced), static_cast<int>(i), p});
    }
  }
  return out;
}

/// One-step predecessors found by matching rule right sides. Rules whose right
/// side drops variables have unboundedly many predecessors; those matches are
/// skipped and `complete` is cleared.
template <typename T>
struct PreimageSet {
  std::vector<OneStep<T>> steps;  // pos is the redex position in the predecessor
  bool complete = true;
};

template <typename T>
PreimageSet<T> one_step_preimages(const RewriteSystem& R, const T& obj) {
  PreimageSet<T> out;
  for (const Position& p : term_positions(obj)) {
    const Term* sub = subterm_at(obj, p);
    for (size_t i = 0; i < R.rules.size(); ++i) {
      const RewriteRule& rule = R.rules[i];
      auto s = match_pattern(rule.rhs, *sub);
      if (!s) continue;
      auto lhs_vars = free_vars(rule.lhs);
      auto rhs_vars = free_vars(rule.rhs);
      bool covered = std::includes(rhs_vars.begin(), rhs_vars.end(), lhs_vars.begin(),
                                   lhs_vars.end());
      if (!covered) {
        out.complete = false;
        continue;
      }
      auto replaced = replace_at(obj, p, substitute(rule.lhs, *s));
      out.steps.push_back({std::move(*replaced), static_cast<int>(i), p});
    }
  }
  return out;
}

template <typename T>
struct DerivationStep {
  int rule = -1;
  Position pos;
  T result;
};

/// A rewrite derivation start ->1 ... ->1 end.
template <typename T>
struct Derivation {
  T start;
  std::vector<DerivationStep<T>> steps;

  const T& end() const { return steps.empty() ? start : steps.back().result; }
  size_t length() const { return steps.size(); }
};

template <typename T>
bool validate_derivation(const RewriteSystem& R, const Derivation<T>& d) {
  T cur = d.start;
  for (const auto& step : d.steps) {
    bool ok = false;
    for (const auto& os : one_step_reducts(R, cur))
      if (os.rule == step.rule && os.pos == step.pos && os.result == step.result) {
        ok = true;
        break;
      }
    if (!ok) return false;
    cur = step.result;
  }
  return true;
}

/// Breadth-first closure of a seed under ->1, truncated by the budget.
template <typename T>
struct ReductSet {
  struct Node {
    size_t depth = 0;
    bool has_parent = false;
    T parent{};
    int rule = -1;
    Position pos;
  };

  T seed{};
  std::map<T, Node, Less<T>> nodes;
  bool complete = true;
  size_t steps_used = 0;  // deepest layer reached

  bool contains(const T& t) const { return nodes.count(t) != 0; }
  size_t size() const { return nodes.size(); }

  std::vector<T> elements() const {
    std::vector<T> out;
    out.reserve(nodes.size());
    for (const auto& [t, info] : nodes) out.push_back(t);
    return out;
  }

  size_t depth_of(const T& t) const { return nodes.at(t).depth; }

  Derivation<T> derivation_to(const T& target) const {
    std::vector<DerivationStep<T>> rev;
    T cur = target;
    while (true) {
      const Node& n = nodes.at(cur);
      if (!n.has_parent) break;
      rev.push_back({n.rule, n.pos, cur});
      cur = n.parent;
    }
    std::reverse(rev.begin(), rev.end());
    return Derivation<T>{seed, std::move(rev)};
  }
};

template <typename T>
ReductSet<T> reducts(const RewriteSystem& R, const T& seed, const Budget& budget) {
  ReductSet<T> rs;
  rs.seed = seed;
  rs.nodes.emplace(seed, typename ReductSet<T>::Node{});
  std::deque<T> frontier{seed};
  while (!frontier.empty()) {
    T cur = frontier.front();
    frontier.pop_front();
    size_t depth = rs.nodes.at(cur).depth;
    if (depth >= budget.max_depth) {
      rs.complete = false;
      continue;
    }
    for (auto& os : one_step_reducts(R, cur)) {
      if (rs.nodes.count(os.result)) continue;
      if (rs.nodes.size() >= budget.max_objects) {
        rs.complete = false;
        return rs;
      }
      typename ReductSet<T>::Node n;
      n.depth = depth + 1;
      n.has_parent = true;
      n.parent = cur;
      n.rule = os.rule;
      n.pos = os.pos;
      rs.steps_used = std::max(rs.steps_used, n.depth);
      rs.nodes.emplace(os.result, std::move(n));
      frontier.push_back(os.result);
    }
  }
  return rs;
}

enum class Reach { Yes, No, Unknown };

template <typename T>
struct ReachResult {
  Reach status = Reach::Unknown;
  std::optional<Derivation<T>> derivation;
};

/// Bounded decision of from ->* to, with a witness derivation on success.
template <typename T>
ReachResult<T> reaches(const RewriteSystem& R, const T& from, const T& to,
                       const Budget& budget) {
  if (from == to) return {Reach::Yes, Derivation<T>{from, {}}};
  ReductSet<T> rs;
  rs.seed = from;
  rs.nodes.emplace(from, typename ReductSet<T>::Node{});
  std::deque<T> frontier{from};
  bool truncated = false;
  while (!frontier.empty()) {
    T cur = frontier.front();
    frontier.pop_front();
    size_t depth = rs.nodes.at(cur).depth;
    if (depth >= budget.max_depth) {
      truncated = true;
      continue;
    }
    for (auto& os : one_step_reducts(R, cur)) {
      if (rs.nodes.count(os.result)) continue;
      if (rs.nodes.size() >= budget.max_objects) {
        truncated = true;
        continue;
      }
      typename ReductSet<T>::Node n;
      n.depth = depth + 1;
      n.has_parent = true;
      n.parent = cur;
      n.rule = os.rule;
      n.pos = os.pos;
      rs.nodes.emplace(os.result, std::move(n));
      if (os.result == to) return {Reach::Yes, rs.derivation_to(to)};
      frontier.push_back(os.result);
    }
  }
  return {truncated ? Reach::Unknown : Reach::No, std::nullopt};
}

/// Common reduct search: a ->* meet <-* b.
template <typename T>
struct JoinResult {
  std::optional<T> meet;
  Derivation<T> from_left;
  Derivation<T> from_right;
  bool exact = false;  // when no meet: both closures were complete
};

template <typename T>
JoinResult<T> join_closures(const ReductSet<T>& ra, const ReductSet<T>& rb) {
  JoinResult<T> out;
  bool found = false;
  size_t best_cost = 0;
  T best{};
  for (const auto& [t, info] : ra.nodes) {
    auto it = rb.nodes.find(t);
    if (it == rb.nodes.end()) continue;
    size_t cost = info.depth + it->second.depth;
    if (!found || cost < best_cost || (cost == best_cost && compare(t, best) < 0)) {
      found = true;
      best_cost = cost;
      best = t;
    }
  }
  if (found) {
    out.meet = best;
    out.from_left = ra.derivation_to(best);
    out.from_right = rb.derivation_to(best);
    out.exact = true;
  } else {
    out.exact = ra.complete && rb.complete;
  }
  return out;
}

template <typename T>
JoinResult<T> joinable(const RewriteSystem& R, const T& a, const T& b, const Budget& budget) {
  ReductSet<T> ra = reducts(R, a, budget);
  ReductSet<T> rb = reducts(R, b, budget);
  return join_closures(ra, rb);
}

enum class Direction { Forward, Backward };

struct ConversionStep {
  Direction dir = Direction::Forward;
  int rule = -1;
  // Redex position in the source of the arrow: objects[i] for a forward step
  // objects[i] ->1 objects[i+1], objects[i+1] for a backward step.
  Position pos;
};

template <typename T>
struct ConversionSequence {
  std::vector<T> objects;  // nonempty
  std::vector<ConversionStep> steps;
};

template <typename T>
bool validate_sequence(const RewriteSystem& R, const ConversionSequence<T>& seq) {
  if (seq.objects.empty() || seq.steps.size() + 1 != seq.objects.size()) return false;
  for (size_t i = 0; i < seq.steps.size(); ++i) {
    const ConversionStep& st = seq.steps[i];
    const T& src = st.dir == Direction::Forward ? seq.objects[i] : seq.objects[i + 1];
    const T& dst = st.dir == Direction::Forward ? seq.objects[i + 1] : seq.objects[i];
    bool ok = false;
    for (const auto& os : one_step_reducts(R, src))
      if (os.rule == st.rule && os.pos == st.pos && os.result == dst) {
        ok = true;
        break;
      }
    if (!ok) return false;
  }
  return true;
}

/// Object indices i with objects[i-1] <-1 objects[i] ->1 objects[i+1].
template <typename T>
std::vector<size_t> find_peaks(const ConversionSequence<T>& seq) {
  std::vector<size_t> out;
  for (size_t i = 1; i + 1 <= seq.steps.size(); ++i)
    if (seq.steps[i - 1].dir == Direction::Backward && seq.steps[i].dir == Direction::Forward)
      out.push_back(i);
  return out;
}

template <typename T>
bool is_valley(const ConversionSequence<T>& seq) {
  return find_peaks(seq).empty();
}

/// Last object of the forward run of a valley: A ->* floor <-* B.
template <typename T>
const T& valley_floor(const ConversionSequence<T>& seq) {
  size_t i = 0;
  while (i < seq.steps.size() && seq.steps[i].dir == Direction::Forward) ++i;
  return seq.objects[i];
}

template <typename T>
ConversionSequence<T> subsequence(const ConversionSequence<T>& seq, size_t from, size_t to) {
  ConversionSequence<T> out;
  out.objects.assign(seq.objects.begin() + from, seq.objects.begin() + to + 1);
  out.steps.assign(seq.steps.begin() + from, seq.steps.begin() + to);
  return out;
}

template <typename T>
struct ConvertResult {
  std::optional<ConversionSequence<T>> seq;
  bool exact = false;  // when absent: the symmetric closure search was exhaustive
};

namespace detail {

template <typename T>
struct SearchNode {
  size_t depth = 0;
  bool has_parent = false;
  T parent{};
  Direction dir = Direction::Forward;  // Forward: parent ->1 this; Backward: this ->1 parent
  int rule = -1;
  Position pos;
};

template <typename T>
struct SymSide {
  std::map<T, SearchNode<T>, Less<T>> nodes;
  std::deque<T> frontier;
  size_t layer = 0;
  bool truncated = false;

  explicit SymSide(const T& seed) {
    nodes.emplace(seed, SearchNode<T>{});
    frontier.push_back(seed);
  }
};

// Expands one breadth-first layer of the symmetric one-step relation.
template <typename T>
void expand_layer(const RewriteSystem& R, SymSide<T>& side, const Budget& budget) {
  std::deque<T> next;
  while (!side.frontier.empty()) {
    T cur = side.frontier.front();
    side.frontier.pop_front();
    size_t depth = side.nodes.at(cur).depth;
    if (depth >= budget.max_depth) {
      side.truncated = true;
      continue;
    }
    auto add = [&](const T& obj, Direction dir, int rule, const Position& pos) {
      if (side.nodes.count(obj)) return;
      if (side.nodes.size() >= budget.max_objects) {
        side.truncated = true;
        return;
      }
      SearchNode<T> n;
      n.depth = depth + 1;
      n.has_parent = true;
      n.parent = cur;
      n.dir = dir;
      n.rule = rule;
      n.pos = pos;
      side.nodes.emplace(obj, std::move(n));
      next.push_back(obj);
    };
    for (auto& os : one_step_reducts(R, cur)) add(os.result, Direction::Forward, os.rule, os.pos);
    auto pre = one_step_preimages(R, cur);
    if (!pre.complete) side.truncated = true;
    for (auto& os : pre.steps) add(os.result, Direction::Backward, os.rule, os.pos);
  }
  side.frontier = std::move(next);
  ++side.layer;
}

// Path from the side's seed to `target` as a conversion sequence.
template <typename T>
ConversionSequence<T> side_path(const SymSide<T>& side, const T& target) {
  std::vector<T> objs{target};
  std::vector<ConversionStep> steps;
  T cur = target;
  while (true) {
    const SearchNode<T>& n = side.nodes.at(cur);
    if (!n.has_parent) break;
    steps.push_back({n.dir, n.rule, n.pos});
    objs.push_back(n.parent);
    cur = n.parent;
  }
  std::reverse(objs.begin(), objs.end());
  std::reverse(steps.begin(), steps.end());
  return ConversionSequence<T>{std::move(objs), std::move(steps)};
}

template <typename T>
ConversionSequence<T> reverse_sequence(const ConversionSequence<T>& seq) {
  ConversionSequence<T> out;
  out.objects.assign(seq.objects.rbegin(), seq.objects.rend());
  for (auto it = seq.steps.rbegin(); it != seq.steps.rend(); ++it) {
    ConversionStep st = *it;
    st.dir = st.dir == Direction::Forward ? Direction::Backward : Direction::Forward;
    out.steps.push_back(st);
  }
  return out;
}

template <typename T>
ConversionSequence<T> concat_sequences(const ConversionSequence<T>& a,
                                       const ConversionSequence<T>& b) {
  ConversionSequence<T> out = a;
  out.objects.insert(out.objects.end(), b.objects.begin() + 1, b.objects.end());
  out.steps.insert(out.steps.end(), b.steps.begin(), b.steps.end());
  return out;
}

}  // namespace detail

/// Bidirectional breadth-first search for a shortest conversion sequence from
/// `a` to `b` over the symmetric one-step relation.
template <typename T>
ConvertResult<T> convertible(const RewriteSystem& R, const T& a, const T& b,
                             const Budget& budget) {
  using detail::SymSide;
  SymSide<T> sa(a), sb(b);
  bool found = false;
  size_t best_cost = 0;
  T best{};
  auto scan_meets = [&]() {
    for (const auto& [t, na] : sa.nodes) {
      auto it = sb.nodes.find(t);
      if (it == sb.nodes.end()) continue;
      size_t cost = na.depth + it->second.depth;
      if (!found || cost < best_cost || (cost == best_cost && compare(t, best) < 0)) {
        found = true;
        best_cost = cost;
        best = t;
      }
    }
  };
  scan_meets();
  while (!found || sa.layer + sb.layer + 1 < best_cost) {
    bool a_can = !sa.frontier.empty();
    bool b_can = !sb.frontier.empty();
    if (!a_can && !b_can) break;
    SymSide<T>& side = !b_can || (a_can && sa.frontier.size() <= sb.frontier.size()) ? sa : sb;
    detail::expand_layer(R, side, budget);
    scan_meets();
  }
  if (!found)
    return {std::nullopt, !sa.truncated && !sb.truncated};
  ConversionSequence<T> left = detail::side_path(sa, best);
  ConversionSequence<T> right = detail::reverse_sequence(detail::side_path(sb, best));
  return {detail::concat_sequences(left, right), true};
}

/// Full equivalence class of a seed under the symmetric one-step relation.
template <typename T>
struct SymClosure {
  T seed{};
  std::map<T, detail::SearchNode<T>, Less<T>> nodes;
  bool complete = true;

  bool contains(const T& t) const { return nodes.count(t) != 0; }
  std::vector<T> elements() const {
    std::vector<T> out;
    for (const auto& [t, n] : nodes) out.push_back(t);
    return out;
  }
};

template <typename T>
SymClosure<T> symmetric_closure(const RewriteSystem& R, const T& seed, const Budget& budget) {
  detail::SymSide<T> side(seed);
  while (!side.frontier.empty()) detail::expand_layer(R, side, budget);
  SymClosure<T> out;
  out.seed = seed;
  out.nodes = std::move(side.nodes);
  out.complete = !side.truncated;
  return out;
}

/// Conversion sequence from the closure's seed to a member.
template <typename T>
ConversionSequence<T> closure_path(const SymClosure<T>& c, const T& target) {
  detail::SymSide<T> side(c.seed);
  side.nodes = c.nodes;
  return detail::side_path(side, target);
}

struct CriticalPair {
  Term source;
  Term left;   // inner rewrite at `pos` (root overlaps: the earlier rule)
  Term right;  // root rewrite
  int left_rule = -1;
  int right_rule = -1;
  Position pos;
};

std::vector<CriticalPair> critical_pairs(const RewriteSystem& R);

struct NonJoinableWitness {
  Term seed;
  Term left;
  Term right;
  Derivation<Term> to_left;
  Derivation<Term> to_right;
};

struct NonTerminationWitness {
  bool is_cycle = false;       // otherwise: derivation overflowing the step budget
  Derivation<Term> derivation; // for cycles, end() reoccurs at cycle_start
  size_t cycle_start = 0;
};

struct AnalysisVerdict {
  enum class Kind { Holds, Fails, Unknown };

  Kind kind = Kind::Unknown;
  size_t bound_used = 0;
  std::optional<NonJoinableWitness> nonjoinable;
  std::optional<NonTerminationWitness> nontermination;
  std::string note;

  bool holds() const { return kind == Kind::Holds; }
  bool fails() const { return kind == Kind::Fails; }
};

/// Every critical pair joinable within the budget.
AnalysisVerdict locally_confluent(const RewriteSystem& R, const Budget& budget);

/// For every seed in the universe, every pair of its reducts is joinable.
/// Holds is relative to the universe and budget.
AnalysisVerdict confluent(const RewriteSystem& R, const std::vector<Term>& universe,
                          const Budget& budget);

/// Every derivation from the universe halts within `step_budget` steps; Fails
/// carries a cycle or a budget-overflowing derivation.
AnalysisVerdict terminating(const RewriteSystem& R, const std::vector<Term>& universe,
                            size_t step_budget, const Budget& budget);

/// t > u iff t ->+ u, restricted to the closure of a finite carrier.
template <typename T>
struct ReductionOrder {
  std::map<T, std::vector<T>, Less<T>> descendants;

  bool greater(const T& a, const T& b) const {
    auto it = descendants.find(a);
    if (it == descendants.end()) return false;
    return std::binary_search(it->second.begin(), it->second.end(), b, Less<T>{});
  }
};

template <typename T>
struct OrderingResult {
  std::optional<ReductionOrder<T>> order;
  bool cycle_found = false;
  bool complete = true;
};

template <typename T>
OrderingResult<T> empirical_ordering(const RewriteSystem& R, const std::vector<T>& carrier,
                                     const Budget& budget) {
  OrderingResult<T> out;
  std::map<T, std::vector<T>, Less<T>> graph;
  std::deque<T> todo(carrier.begin(), carrier.end());
  std::map<T, int, Less<T>> seen;  // 0 = queued, 1 = expanded
  for (const auto& t : carrier) seen.emplace(t, 0);
  while (!todo.empty()) {
    T cur = todo.front();
    todo.pop_front();
    if (seen[cur] == 1) continue;
    seen[cur] = 1;
    auto& edges = graph[cur];
    for (auto& os : one_step_reducts(R, cur)) {
      edges.push_back(os.result);
      if (!seen.count(os.result)) {
        if (seen.size() >= budget.max_objects) {
          out.complete = false;
          continue;
        }
        seen.emplace(os.result, 0);
        todo.push_back(os.result);
      }
    }
  }
  // Cycle detection, iterative three-color DFS.
  std::map<T, int, Less<T>> color;  // 1 = on stack, 2 = done
  for (const auto& [start, unused] : graph) {
    if (color.count(start)) continue;
    std::vector<std::pair<T, size_t>> stack{{start, 0}};
    color[start] = 1;
    while (!stack.empty()) {
      auto& [cur, idx] = stack.back();
      auto git = graph.find(cur);
      if (git == graph.end() || idx >= git->second.size()) {
        color[cur] = 2;
        stack.pop_back();
        continue;
      }
      T next = git->second[idx++];
      auto cit = color.find(next);
      if (cit == color.end()) {
        color[next] = 1;
        stack.emplace_back(next, 0);
      } else if (cit->second == 1) {
        out.cycle_found = true;
        return out;
      }
    }
  }
  if (!out.complete) return out;  // cannot certify the order on a truncated closure
  // Strict descendants by reverse-topological accumulation.
  ReductionOrder<T> ord;
  std::map<T, int, Less<T>> state;
  for (const auto& [start, unused] : graph) {
    if (state.count(start)) continue;
    std::vector<std::pair<T, size_t>> stack{{start, 0}};
    state[start] = 1;
    while (!stack.empty()) {
      auto& [cur, idx] = stack.back();
      auto git = graph.find(cur);
      if (git != graph.end() && idx < git->second.size()) {
        T next = git->second[idx++];
        if (!state.count(next)) {
          state[next] = 1;
          stack.emplace_back(next, 0);
        }
        continue;
      }
      std::vector<T> acc;
      if (git != graph.end()) {
        for (const auto& next : git->second) {
          acc.push_back(next);
          auto dit = ord.descendants.find(next);
          if (dit != ord.descendants.end())
            acc.insert(acc.end(), dit->second.begin(), dit->second.end());
        }
      }
      std::sort(acc.begin(), acc.end(), Less<T>{});
      acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
      ord.descendants[cur] = std::move(acc);
      state[cur] = 2;
      stack.pop_back();
    }
  }
  out.order = std::move(ord);
  return out;
}

/// Dershowitz-Manna multiset extension: M > N iff M != N and every element of
/// N - M is dominated by some element of M - N.
template <typename T>
bool multiset_greater(const ReductionOrder<T>& ord, std::vector<T> m, std::vector<T> n) {
  std::sort(m.begin(), m.end(), Less<T>{});
  std::sort(n.begin(), n.end(), Less<T>{});
  std::vector<T> m_only, n_only;
  std::set_difference(m.begin(), m.end(), n.begin(), n.end(), std::back_inserter(m_only),
                      Less<T>{});
  std::set_difference(n.begin(), n.end(), m.begin(), m.end(), std::back_inserter(n_only),
                      Less<T>{});
  if (m_only.empty() && n_only.empty()) return false;
  for (const auto& x : n_only) {
    bool dominated = false;
    for (const auto& y : m_only)
      if (ord.greater(y, x)) {
        dominated = true;
        break;
      }
    if (!dominated) return false;
  }
  return true;
}

/// Subterm-closed default universe: all subterms of the system's rules and of
/// the given extra terms, plus every ground term over the signature up to
/// `generator_depth`.
std::vector<Term> default_universe(const RewriteSystem& R, const std::vector<Term>& extra,
                                   size_t generator_depth);

}  // namespace admo
