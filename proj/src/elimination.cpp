#include "admo/elimination.hpp"

#include <algorithm>
#include <functional>

namespace admo {

ScriptChoice PolicyState::take() {
  if (!policy || policy->mode != StepPolicy::Mode::Scripted || policy->choices.empty())
    return {};
  if (index >= policy->choices.size()) {
    if (!policy->cycle) return {};
    index %= policy->choices.size();
  }
  return policy->choices[index++];
}

bool PolicyState::force_split() const {
  return policy && policy->mode == StepPolicy::Mode::Scripted && policy->force_split;
}

namespace {

struct StuckError {
  StepOutcome outcome;
};

// Common reducts of a and b ordered by combined closure depth, then term order.
struct MeetSet {
  std::vector<Proposition> meets;
  bool exact = true;
};

MeetSet all_meets(const RewriteSystem& R, const Proposition& a, const Proposition& b,
                  const Budget& budget) {
  auto ra = reducts(R, a, budget);
  auto rb = reducts(R, b, budget);
  MeetSet out;
  out.exact = ra.complete && rb.complete;
  std::vector<std::pair<size_t, Proposition>> scored;
  for (const auto& [t, info] : ra.nodes) {
    auto it = rb.nodes.find(t);
    if (it == rb.nodes.end()) continue;
    scored.emplace_back(info.depth + it->second.depth, t);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first < y.first;
    return compare(x.second, y.second) < 0;
  });
  for (auto& [cost, t] : scored) out.meets.push_back(std::move(t));
  return out;
}

// First one-step reducts of c that still reach target, in rule order.
std::vector<Proposition> first_steps_towards(const RewriteSystem& R, const Proposition& c,
                                             const Proposition& target, const Budget& budget) {
  std::vector<Proposition> out;
  for (const auto& os : one_step_reducts(R, c)) {
    if (std::find(out.begin(), out.end(), os.result) != out.end()) continue;
    if (reaches(R, os.result, target, budget).status == Reach::Yes) out.push_back(os.result);
  }
  return out;
}

ProofNode build_split_tree(const PropMultiset& gamma, const PropMultiset& delta,
                           const Proposition& b, const Proposition& d, const Proposition& c1p,
                           const Proposition& c2p, const Proposition& joiner) {
  Sequent ax1_seq{gamma, delta.plus(c1p).plus(c2p)};
  Sequent ax2_seq{gamma.plus(c1p), delta.plus(c2p)};
  Sequent inner_seq{gamma, delta.plus(c2p)};
  Sequent ax3_seq{gamma.plus(c2p), delta};
  ProofNode inner = make_cut(c1p, inner_seq, make_axiom(ax1_seq, b), make_axiom(ax2_seq, joiner));
  return make_cut(c2p, Sequent{gamma, delta}, std::move(inner), make_axiom(ax3_seq, d));
}

}  // namespace

StepOutcome newman_step(const RewriteSystem& R, const ProofNode& p, PolicyState& policy,
                        const Budget& budget) {
  if (p.tag != RuleTag::Cut || p.premises.size() != 2 || p.props.size() != 1)
    throw std::invalid_argument("newman_step: root must be a cut");
  if (!is_cut_free(p.premises[0]) || !is_cut_free(p.premises[1]))
    throw std::invalid_argument("newman_step: premises must be cut free");
  const PropMultiset& gamma = p.conclusion.gamma;
  const PropMultiset& delta = p.conclusion.delta;
  const Proposition& cut = p.props[0];
  auto c1 = p.premises[0].conclusion.delta.diff_one(delta);
  auto c2 = p.premises[1].conclusion.gamma.diff_one(gamma);
  StepOutcome out;
  if (!c1 || !c2) {
    out.kind = StepOutcome::Kind::NotApplicable;
    out.note = "premise sequents do not match the cut schema";
    return out;
  }
  bool force = policy.force_split();

  // (i) the contexts already share a common reduct
  if (!force) {
    for (const auto& g : gamma.items()) {
      for (const auto& d : delta.items()) {
        auto join = joinable(R, g, d, budget);
        if (join.meet) {
          out.kind = StepOutcome::Kind::ReducedToAxiom;
          out.proof = make_axiom(Sequent{gamma, delta}, *join.meet);
          return out;
        }
      }
    }
  }

  // A in Gamma joining C1 at B; E in Delta joining C2 at D.
  auto identify = [&](const PropMultiset& side, const Proposition& target)
      -> std::optional<std::pair<Proposition, Proposition>> {
    for (const auto& g : side.items()) {
      MeetSet ms = all_meets(R, g, target, budget);
      if (ms.meets.empty()) continue;
      if (force) {
        for (const auto& m : ms.meets)
          if (m != cut) return std::make_pair(g, m);
      }
      return std::make_pair(g, ms.meets.front());
    }
    return std::nullopt;
  };
  auto left_id = identify(gamma, *c1);
  auto right_id = identify(delta, *c2);
  if (!left_id || !right_id) {
    out.kind = StepOutcome::Kind::NotApplicable;
    out.note = "no joinable pair with the cut premise; not an atomic cut-free situation";
    return out;
  }
  const auto& [a_prop, b_prop] = *left_id;
  const auto& [e_prop, d_prop] = *right_id;

  // (ii) short circuit: B = C or C = D
  if (b_prop == cut || cut == d_prop) {
    out.kind = StepOutcome::Kind::ShortCircuit;
    out.b_equals_c = b_prop == cut;
    out.proof = make_axiom(Sequent{gamma, delta}, out.b_equals_c ? d_prop : b_prop);
    return out;
  }

  // (iii) split into cuts on one-step reducts of C
  std::vector<Proposition> cand1 = first_steps_towards(R, cut, b_prop, budget);
  std::vector<Proposition> cand2 = first_steps_towards(R, cut, d_prop, budget);
  if (cand1.empty() || cand2.empty()) {
    out.kind = StepOutcome::Kind::NotApplicable;
    out.note = "no one-step reduct of the cut proposition reaches the common reduct";
    return out;
  }
  ScriptChoice choice = policy.take();
  auto pick = [](const std::vector<Proposition>& cands,
                 const std::optional<Proposition>& wanted, const char* which) {
    if (!wanted) return cands.front();
    for (const auto& c : cands)
      if (c == *wanted) return c;
    throw std::runtime_error(std::string("policy choice for ") + which +
                             " is not a valid one-step reduct towards the common reduct");
  };
  Proposition c1p = pick(cand1, choice.left, "C'1");
  Proposition c2p = pick(cand2, choice.right, "C'2");
  MeetSet joiners = all_meets(R, c1p, c2p, budget);
  if (joiners.meets.empty()) {
    out.kind = StepOutcome::Kind::Stuck;
    out.div_left = c1p;
    out.div_center = cut;
    out.div_right = c2p;
    out.budget_limited = !joiners.exact;
    out.note = joiners.exact ? "one-step divergence of the cut proposition is not joinable"
                             : "joiner search truncated by budget";
    return out;
  }
  Proposition joiner = joiners.meets.front();
  if (choice.joiner) {
    bool ok = false;
    for (const auto& m : joiners.meets)
      if (m == *choice.joiner) {
        joiner = m;
        ok = true;
        break;
      }
    if (!ok) throw std::runtime_error("policy joiner is not a common reduct of C'1, C'2");
  }
  out.kind = StepOutcome::Kind::SplitIntoTwoCuts;
  out.c1p = c1p;
  out.c2p = c2p;
  out.joiner = joiner;
  out.proof = build_split_tree(gamma, delta, b_prop, d_prop, c1p, c2p, joiner);
  return out;
}

namespace {

// Deepest cut whose premises are cut free, leftmost among those.
ProofNode* find_target_cut(ProofNode& root) {
  ProofNode* best = nullptr;
  size_t best_depth = 0;
  std::function<void(ProofNode&, size_t)> walk = [&](ProofNode& n, size_t depth) {
    for (auto& pr : n.premises) walk(pr, depth + 1);
    if (n.tag != RuleTag::Cut) return;
    for (const auto& pr : n.premises)
      if (!is_cut_free(pr)) return;
    if (!best || depth > best_depth) {
      best = &n;
      best_depth = depth;
    }
  };
  walk(root, 0);
  return best;
}

std::string outcome_kind_name(StepOutcome::Kind k) {
  switch (k) {
    case StepOutcome::Kind::ReducedToAxiom: return "axiom";
    case StepOutcome::Kind::ShortCircuit: return "short-circuit";
    case StepOutcome::Kind::SplitIntoTwoCuts: return "split";
    case StepOutcome::Kind::Stuck: return "stuck";
    case StepOutcome::Kind::NotApplicable: return "not-applicable";
  }
  return "?";
}

}  // namespace

EliminationResult eliminate_cuts_atomic_asym(const RewriteSystem& R, const ProofNode& p,
                                             const StepPolicy& policy, size_t step_budget,
                                             const Budget& budget) {
  if (!proof_atomic(p))
    throw std::invalid_argument("eliminate_cuts_atomic_asym: proof must be atomic");
  EliminationResult res;
  res.proof = p;
  res.trace.initial_cuts = cut_propositions(p);
  PolicyState ps{&policy, 0};
  while (true) {
    if (is_cut_free(res.proof)) {
      res.kind = EliminationResult::Kind::CutFree;
      return res;
    }
    if (res.steps >= step_budget) {
      res.kind = EliminationResult::Kind::BudgetExhausted;
      return res;
    }
    ProofNode* target = find_target_cut(res.proof);
    if (!target) {
      res.kind = EliminationResult::Kind::Failed;
      return res;
    }
    Proposition cut_prop = target->props[0];
    StepOutcome outcome = newman_step(R, *target, ps, budget);
    if (outcome.kind == StepOutcome::Kind::Stuck && outcome.budget_limited) {
      res.kind = EliminationResult::Kind::BudgetExhausted;
      res.stuck = std::move(outcome);
      return res;
    }
    if (outcome.kind == StepOutcome::Kind::Stuck ||
        outcome.kind == StepOutcome::Kind::NotApplicable) {
      TraceEntry entry;
      entry.cut_prop = cut_prop;
      entry.kind = outcome_kind_name(outcome.kind);
      entry.cuts_after = cut_propositions(res.proof);
      res.trace.entries.push_back(std::move(entry));
      res.kind = EliminationResult::Kind::Failed;
      res.stuck = std::move(outcome);
      return res;
    }
    TraceEntry entry;
    entry.cut_prop = cut_prop;
    entry.kind = outcome_kind_name(outcome.kind);
    if (outcome.kind == StepOutcome::Kind::SplitIntoTwoCuts)
      entry.introduced = {*outcome.c1p, *outcome.c2p};
    *target = std::move(*outcome.proof);
    entry.cuts_after = cut_propositions(res.proof);
    res.trace.entries.push_back(std::move(entry));
    ++res.steps;
  }
}

// ---------------------------------------------------------------- axiom expansion

namespace {

struct AxiomExpander {
  const RewriteSystem& R;
  Budget budget;

  // Proof of `concl` where left ->* ann <-* right, using logical rules and
  // atomic axioms only.
  ProofNode expand_pair(const Sequent& concl, const Proposition& left, const Proposition& ann,
                        const Proposition& right) {
    switch (ann.kind) {
      case Proposition::Kind::Atom:
        return make_axiom(concl, ann);
      case Proposition::Kind::Bottom: {
        ProofNode node;
        node.tag = RuleTag::BottomLeft;
        node.conclusion = concl;
        return node;
      }
      case Proposition::Kind::Implies: {
        const Proposition& al = ann.kids[0];
        const Proposition& ar = ann.kids[1];
        Sequent p1{concl.gamma.plus(al), concl.delta.minus(right)->plus(ar)};
        Sequent q1{*p1.gamma.minus(left), p1.delta.plus(al)};
        Sequent q2{q1.gamma.plus(ar), p1.delta};
        ProofNode imp_left;
        imp_left.tag = RuleTag::ImpLeft;
        imp_left.props = {al, ar};
        imp_left.conclusion = p1;
        imp_left.premises.push_back(expand_pair(q1, al, al, al));
        imp_left.premises.push_back(expand_pair(q2, ar, ar, ar));
        ProofNode imp_right;
        imp_right.tag = RuleTag::ImpRight;
        imp_right.props = {al, ar};
        imp_right.conclusion = concl;
        imp_right.premises.push_back(std::move(imp_left));
        return imp_right;
      }
      case Proposition::Kind::And: {
        const Proposition& al = ann.kids[0];
        const Proposition& ar = ann.kids[1];
        auto conj_premise = [&](const Proposition& part) {
          Sequent r{concl.gamma, concl.delta.minus(right)->plus(part)};
          Sequent q{r.gamma.minus(left)->plus(al).plus(ar), r.delta};
          ProofNode and_left;
          and_left.tag = RuleTag::AndLeft;
          and_left.props = {al, ar};
          and_left.conclusion = r;
          and_left.premises.push_back(expand_pair(q, part, part, part));
          return and_left;
        };
        ProofNode and_right;
        and_right.tag = RuleTag::AndRight;
        and_right.props = {al, ar};
        and_right.conclusion = concl;
        and_right.premises.push_back(conj_premise(al));
        and_right.premises.push_back(conj_premise(ar));
        return and_right;
      }
      case Proposition::Kind::Or: {
        const Proposition& al = ann.kids[0];
        const Proposition& ar = ann.kids[1];
        auto disj_premise = [&](const Proposition& part) {
          Sequent l{concl.gamma.minus(left)->plus(part), concl.delta};
          Sequent q{l.gamma, l.delta.minus(right)->plus(al).plus(ar)};
          ProofNode or_right;
          or_right.tag = RuleTag::OrRight;
          or_right.props = {al, ar};
          or_right.conclusion = l;
          or_right.premises.push_back(expand_pair(q, part, part, part));
          return or_right;
        };
        ProofNode or_left;
        or_left.tag = RuleTag::OrLeft;
        or_left.props = {al, ar};
        or_left.conclusion = concl;
        or_left.premises.push_back(disj_premise(al));
        or_left.premises.push_back(disj_premise(ar));
        return or_left;
      }
      case Proposition::Kind::Forall: {
        std::set<std::string> taken = free_vars(concl.gamma);
        auto fv = free_vars(concl.delta);
        taken.insert(fv.begin(), fv.end());
        std::string z = fresh_name(ann.name.empty() ? "x" : ann.name, taken);
        Proposition az = instantiate(ann.kids[0], Term::var(z));
        Proposition lz = instantiate(left.kids[0], Term::var(z));
        Sequent p1{concl.gamma, concl.delta.minus(right)->plus(az)};
        Sequent q{p1.gamma.minus(left)->plus(lz), p1.delta};
        ProofNode fl;
        fl.tag = RuleTag::ForallLeft;
        fl.var = z;
        fl.qbody = lz;
        fl.term = Term::var(z);
        fl.conclusion = p1;
        fl.premises.push_back(expand_pair(q, lz, az, az));
        ProofNode fr;
        fr.tag = RuleTag::ForallRight;
        fr.var = z;
        fr.qbody = az;
        fr.conclusion = concl;
        fr.premises.push_back(std::move(fl));
        return fr;
      }
      case Proposition::Kind::Exists: {
        std::set<std::string> taken = free_vars(concl.gamma);
        auto fv = free_vars(concl.delta);
        taken.insert(fv.begin(), fv.end());
        std::string z = fresh_name(ann.name.empty() ? "x" : ann.name, taken);
        Proposition az = instantiate(ann.kids[0], Term::var(z));
        Proposition lz = instantiate(left.kids[0], Term::var(z));
        Sequent p1{concl.gamma.minus(left)->plus(lz), concl.delta};
        Sequent q{p1.gamma, p1.delta.minus(right)->plus(az)};
        ProofNode er;
        er.tag = RuleTag::ExistsRight;
        er.var = z;
        er.qbody = az;
        er.term = Term::var(z);
        er.conclusion = p1;
        er.premises.push_back(expand_pair(q, lz, az, az));
        ProofNode el;
        el.tag = RuleTag::ExistsLeft;
        el.var = z;
        el.qbody = lz;
        el.conclusion = concl;
        el.premises.push_back(std::move(er));
        return el;
      }
    }
    throw std::logic_error("expand_pair: unreachable");
  }

  ProofNode expand_axiom(const ProofNode& node) {
    const Proposition& ann = node.props[0];
    std::optional<Proposition> left, right;
    for (const auto& g : node.conclusion.gamma.items())
      if (reaches(R, g, ann, budget).status == Reach::Yes) {
        left = g;
        break;
      }
    for (const auto& d : node.conclusion.delta.items())
      if (reaches(R, d, ann, budget).status == Reach::Yes) {
        right = d;
        break;
      }
    if (!left || !right)
      throw std::invalid_argument("normalize_axioms: axiom side condition does not hold");
    return expand_pair(node.conclusion, *left, ann, *right);
  }
};

}  // namespace

ProofNode normalize_axioms(const RewriteSystem& R, const ProofNode& p, const Budget& budget) {
  ProofNode node = p;
  for (auto& pr : node.premises) pr = normalize_axioms(R, pr, budget);
  if (node.tag == RuleTag::Axiom && !node.props.empty() && !node.props[0].is_atom())
    return AxiomExpander{R, budget}.expand_axiom(node);
  return node;
}

// ---------------------------------------------------------------- full engine

namespace {

// The per-rule principal proposition, reconstructed exactly the way the
// checker identifies it.
Proposition extract_principal(const ProofNode& n) {
  const Sequent& c = n.conclusion;
  auto need = [](const std::optional<Proposition>& p, const char* what) {
    if (!p) throw std::logic_error(std::string("cannot identify the principal of ") + what);
    return *p;
  };
  switch (n.tag) {
    case RuleTag::WeakLeft:
      return need(c.gamma.diff_one(n.premises[0].conclusion.gamma), "weak-left");
    case RuleTag::WeakRight:
      return need(c.delta.diff_one(n.premises[0].conclusion.delta), "weak-right");
    case RuleTag::ContrLeft:
    case RuleTag::ContrRight:
      return n.props[0];
    case RuleTag::ImpLeft:
      return need(c.gamma.diff_one(n.premises[0].conclusion.gamma), "imp-left");
    case RuleTag::ImpRight: {
      auto d = n.premises[0].conclusion.delta.minus(n.props[1]);
      return need(d ? c.delta.diff_one(*d) : std::nullopt, "imp-right");
    }
    case RuleTag::AndLeft: {
      auto g = n.premises[0].conclusion.gamma.minus(n.props[0]);
      if (g) g = g->minus(n.props[1]);
      return need(g ? c.gamma.diff_one(*g) : std::nullopt, "and-left");
    }
    case RuleTag::AndRight: {
      auto d = n.premises[0].conclusion.delta.minus(n.props[0]);
      return need(d ? c.delta.diff_one(*d) : std::nullopt, "and-right");
    }
    case RuleTag::OrLeft: {
      auto g = n.premises[0].conclusion.gamma.minus(n.props[0]);
      return need(g ? c.gamma.diff_one(*g) : std::nullopt, "or-left");
    }
    case RuleTag::OrRight: {
      auto d = n.premises[0].conclusion.delta.minus(n.props[0]);
      if (d) d = d->minus(n.props[1]);
      return need(d ? c.delta.diff_one(*d) : std::nullopt, "or-right");
    }
    case RuleTag::ForallLeft: {
      Substitution inst{{n.var, *n.term}};
      auto g = n.premises[0].conclusion.gamma.minus(substitute(*n.qbody, inst));
      return need(g ? c.gamma.diff_one(*g) : std::nullopt, "forall-left");
    }
    case RuleTag::ForallRight: {
      auto d = n.premises[0].conclusion.delta.minus(*n.qbody);
      return need(d ? c.delta.diff_one(*d) : std::nullopt, "forall-right");
    }
    case RuleTag::ExistsLeft: {
      auto g = n.premises[0].conclusion.gamma.minus(*n.qbody);
      return need(g ? c.gamma.diff_one(*g) : std::nullopt, "exists-left");
    }
    case RuleTag::ExistsRight: {
      Substitution inst{{n.var, *n.term}};
      auto d = n.premises[0].conclusion.delta.minus(substitute(*n.qbody, inst));
      return need(d ? c.delta.diff_one(*d) : std::nullopt, "exists-right");
    }
    default:
      throw std::logic_error("extract_principal: leaf or cut");
  }
}

struct Reconstructor {
  const RewriteSystem& R;
  Budget budget;
  PolicyState& policy;
  std::vector<std::string>& events;
  std::vector<Proposition>& introduced;

  bool reach(const Proposition& from, const Proposition& to) {
    return reaches(R, from, to, budget).status == Reach::Yes;
  }

  // Axiom leaf resolvable inside the ambient contexts alone.
  std::optional<ProofNode> context_axiom(const ProofNode& leaf, const PropMultiset& gamma,
                                         const PropMultiset& delta) {
    if (leaf.tag == RuleTag::BottomLeft) {
      for (const auto& g : gamma.items())
        if (g == Proposition::bottom()) {
          ProofNode node;
          node.tag = RuleTag::BottomLeft;
          node.conclusion = Sequent{gamma, delta};
          return node;
        }
      return std::nullopt;
    }
    const Proposition& ann = leaf.props[0];
    bool lhs = false, rhs = false;
    for (const auto& g : gamma.items())
      if (reach(g, ann)) {
        lhs = true;
        break;
      }
    for (const auto& d : delta.items())
      if (reach(d, ann)) {
        rhs = true;
        break;
      }
    if (lhs && rhs) return make_axiom(Sequent{gamma, delta}, ann);
    return std::nullopt;
  }

  // Wraps a contraction collapsing the duplicated principal copy.
  ProofNode contract_extra(ProofNode inner, Side side, const Proposition& q,
                           const PropMultiset& gamma, const PropMultiset& delta) {
    ProofNode node;
    node.tag = side == Side::Left ? RuleTag::ContrLeft : RuleTag::ContrRight;
    node.props = {q, q, q};
    node.conclusion = Sequent{gamma, delta};
    node.premises.push_back(std::move(inner));
    return node;
  }

  ProofNode run(const ProofNode& piL, const PropMultiset& c1s, const ProofNode& piR,
                const PropMultiset& c2s, const Proposition& cut, const PropMultiset& gamma,
                const PropMultiset& delta) {
    if (c1s.empty()) return piL;
    if (c2s.empty()) return piR;

    // ---- left side
    bool left_blocked = false;  // axiom through a descendant, or key-case ready
    switch (piL.tag) {
      case RuleTag::Axiom:
      case RuleTag::BottomLeft: {
        if (auto done = context_axiom(piL, gamma, delta)) return *done;
        if (piL.tag == RuleTag::BottomLeft)
          throw std::logic_error("bottom-left leaf without a context bottom");
        left_blocked = true;
        break;
      }
      case RuleTag::Cut:
        throw std::logic_error("reconstruct: premises must be cut free");
      case RuleTag::WeakLeft: {
        Proposition q = extract_principal(piL);
        return run(weaken_proof(piL.premises[0], Side::Left, q), c1s, piR, c2s, cut, gamma,
                   delta);
      }
      case RuleTag::WeakRight: {
        Proposition q = extract_principal(piL);
        if (c1s.contains(q))
          return run(piL.premises[0], *c1s.minus(q), piR, c2s, cut, gamma, delta);
        return run(weaken_proof(piL.premises[0], Side::Right, q), c1s, piR, c2s, cut, gamma,
                   delta);
      }
      case RuleTag::ContrLeft: {
        const Proposition& q = piL.props[0];
        const Proposition& q1 = piL.props[1];
        const Proposition& q2 = piL.props[2];
        ProofNode inner = run(
            weaken_proof(piL.premises[0], Side::Left, q), c1s,
            weaken_proof(weaken_proof(piR, Side::Left, q1), Side::Left, q2), c2s, cut,
            gamma.plus(q1).plus(q2), delta);
        ProofNode contr;
        contr.tag = RuleTag::ContrLeft;
        contr.props = {q, q1, q2};
        contr.conclusion = Sequent{gamma.plus(q), delta};
        contr.premises.push_back(std::move(inner));
        return contract_extra(std::move(contr), Side::Left, q, gamma, delta);
      }
      case RuleTag::ContrRight: {
        const Proposition& q = piL.props[0];
        const Proposition& q1 = piL.props[1];
        const Proposition& q2 = piL.props[2];
        if (c1s.contains(q))
          return run(piL.premises[0], c1s.minus(q)->plus(q1).plus(q2), piR, c2s, cut, gamma,
                     delta);
        ProofNode inner = run(
            weaken_proof(piL.premises[0], Side::Right, q), c1s,
            weaken_proof(weaken_proof(piR, Side::Right, q1), Side::Right, q2), c2s, cut, gamma,
            delta.plus(q1).plus(q2));
        ProofNode contr;
        contr.tag = RuleTag::ContrRight;
        contr.props = {q, q1, q2};
        contr.conclusion = Sequent{gamma, delta.plus(q)};
        contr.premises.push_back(std::move(inner));
        return contract_extra(std::move(contr), Side::Right, q, gamma, delta);
      }
      default: {
        Proposition q = extract_principal(piL);
        bool right_rule = piL.tag == RuleTag::ImpRight || piL.tag == RuleTag::AndRight ||
                          piL.tag == RuleTag::OrRight || piL.tag == RuleTag::ForallRight ||
                          piL.tag == RuleTag::ExistsRight;
        if (right_rule && c1s.contains(q)) {
          left_blocked = true;  // key case candidate
          break;
        }
        return push_context_rule_left(piL, q, c1s, piR, c2s, cut, gamma, delta);
      }
    }

    // ---- right side
    switch (piR.tag) {
      case RuleTag::Axiom:
      case RuleTag::BottomLeft: {
        if (auto done = context_axiom(piR, gamma, delta)) return *done;
        if (piR.tag == RuleTag::BottomLeft)
          throw std::logic_error("bottom-left leaf without a context bottom");
        break;  // right side blocked on a descendant axiom
      }
      case RuleTag::Cut:
        throw std::logic_error("reconstruct: premises must be cut free");
      case RuleTag::WeakRight: {
        Proposition q = extract_principal(piR);
        return run(piL, c1s, weaken_proof(piR.premises[0], Side::Right, q), c2s, cut, gamma,
                   delta);
      }
      case RuleTag::WeakLeft: {
        Proposition q = extract_principal(piR);
        if (c2s.contains(q))
          return run(piL, c1s, piR.premises[0], *c2s.minus(q), cut, gamma, delta);
        return run(piL, c1s, weaken_proof(piR.premises[0], Side::Left, q), c2s, cut, gamma,
                   delta);
      }
      case RuleTag::ContrRight: {
        const Proposition& q = piR.props[0];
        const Proposition& q1 = piR.props[1];
        const Proposition& q2 = piR.props[2];
        ProofNode inner = run(
            weaken_proof(weaken_proof(piL, Side::Right, q1), Side::Right, q2), c1s,
            weaken_proof(piR.premises[0], Side::Right, q), c2s, cut, gamma,
            delta.plus(q1).plus(q2));
        ProofNode contr;
        contr.tag = RuleTag::ContrRight;
        contr.props = {q, q1, q2};
        contr.conclusion = Sequent{gamma, delta.plus(q)};
        contr.premises.push_back(std::move(inner));
        return contract_extra(std::move(contr), Side::Right, q, gamma, delta);
      }
      case RuleTag::ContrLeft: {
        const Proposition& q = piR.props[0];
        const Proposition& q1 = piR.props[1];
        const Proposition& q2 = piR.props[2];
        if (c2s.contains(q))
          return run(piL, c1s, piR.premises[0], c2s.minus(q)->plus(q1).plus(q2), cut, gamma,
                     delta);
        ProofNode inner = run(
            weaken_proof(weaken_proof(piL, Side::Left, q1), Side::Left, q2), c1s,
            weaken_proof(piR.premises[0], Side::Left, q), c2s, cut, gamma.plus(q1).plus(q2),
            delta);
        ProofNode contr;
        contr.tag = RuleTag::ContrLeft;
        contr.props = {q, q1, q2};
        contr.conclusion = Sequent{gamma.plus(q), delta};
        contr.premises.push_back(std::move(inner));
        return contract_extra(std::move(contr), Side::Left, q, gamma, delta);
      }
      default: {
        Proposition q = extract_principal(piR);
        bool left_rule = piR.tag == RuleTag::ImpLeft || piR.tag == RuleTag::AndLeft ||
                         piR.tag == RuleTag::OrLeft || piR.tag == RuleTag::ForallLeft ||
                         piR.tag == RuleTag::ExistsLeft;
        if (!(left_rule && c2s.contains(q)))
          return push_context_rule_right(piR, q, piL, c1s, c2s, cut, gamma, delta);
        break;  // key case candidate on the right
      }
    }

    if (!left_blocked)
      throw std::logic_error("reconstruct: left side neither reducible nor blocked");

    bool left_leaf = piL.tag == RuleTag::Axiom;
    bool right_leaf = piR.tag == RuleTag::Axiom;
    if (left_leaf != right_leaf)
      throw std::logic_error("reconstruct: leaf/logical mismatch across the cut");
    if (left_leaf) return atomic_case(piL, c1s, piR, c2s, cut, gamma, delta);
    return key_case(piL, c1s, piR, c2s, cut, gamma, delta);
  }

  // ---- context rules pushed above the reconstruction

  ProofNode push_context_rule_left(const ProofNode& piL, const Proposition& q,
                                   const PropMultiset& c1s, const ProofNode& piR,
                                   const PropMultiset& c2s, const Proposition& cut,
                                   const PropMultiset& gamma, const PropMultiset& delta) {
    switch (piL.tag) {
      case RuleTag::ImpLeft: {
        const Proposition& a = piL.props[0];
        const Proposition& b = piL.props[1];
        ProofNode p1 = run(weaken_proof(piL.premises[0], Side::Left, q), c1s,
                           weaken_proof(piR, Side::Right, a), c2s, cut, gamma, delta.plus(a));
        ProofNode p2 = run(weaken_proof(piL.premises[1], Side::Left, q), c1s,
                           weaken_proof(piR, Side::Left, b), c2s, cut, gamma.plus(b), delta);
        ProofNode node;
        node.tag = RuleTag::ImpLeft;
        node.props = {a, b};
        node.conclusion = Sequent{gamma.plus(q), delta};
        node.premises.push_back(std::move(p1));
        node.premises.push_back(std::move(p2));
        return contract_extra(std::move(node), Side::Left, q, gamma, delta);
      }
      case RuleTag::AndLeft: {
        const Proposition& a = piL.props[0];
        const Proposition& b = piL.props[1];
        ProofNode p = run(weaken_proof(piL.premises[0], Side::Left, q), c1s,
                          weaken_proof(weaken_proof(piR, Side::Left, a), Side::Left, b), c2s,
                          cut, gamma.plus(a).plus(b), delta);
        ProofNode node;
        node.tag = RuleTag::AndLeft;
        node.props = {a, b};
        node.conclusion = Sequent{gamma.plus(q), delta};
        node.premises.push_back(std::move(p));
        return contract_extra(std::move(node), Side::Left, q, gamma, delta);
      }
      case RuleTag::OrLeft: {
        const Proposition& a = piL.props[0];
        const Proposition& b = piL.props[1];
        ProofNode p1 = run(weaken_proof(piL.premises[0], Side::Left, q), c1s,
                           weaken_proof(piR, Side::Left, a), c2s, cut, gamma.plus(a), delta);
        ProofNode p2 = run(weaken_proof(piL.premises[1], Side::Left, q), c1s,
                           weaken_proof(piR, Side::Left, b), c2s, cut, gamma.plus(b), delta);
        ProofNode node;
        node.tag = RuleTag::OrLeft;
        node.props = {a, b};
        node.conclusion = Sequent{gamma.plus(q), delta};
        node.premises.push_back(std::move(p1));
        node.premises.push_back(std::move(p2));
        return contract_extra(std::move(node), Side::Left, q, gamma, delta);
      }
      case RuleTag::ForallLeft: {
        Substitution inst{{piL.var, *piL.term}};
        Proposition body = substitute(*piL.qbody, inst);
        ProofNode p = run(weaken_proof(piL.premises[0], Side::Left, q), c1s,
                          weaken_proof(piR, Side::Left, body), c2s, cut, gamma.plus(body),
                          delta);
        ProofNode node;
        node.tag = RuleTag::ForallLeft;
        node.var = piL.var;
        node.qbody = piL.qbody;
        node.term = piL.term;
        node.conclusion = Sequent{gamma.plus(q), delta};
        node.premises.push_back(std::move(p));
        return contract_extra(std::move(node), Side::Left, q, gamma, delta);
      }
      case RuleTag::ImpRight: {
        const Proposition& a = piL.props[0];
        const Proposition& b = piL.props[1];
        ProofNode p = run(weaken_proof(piL.premises[0], Side::Right, q), c1s,
                          weaken_proof(weaken_proof(piR, Side::Left, a), Side::Right, b), c2s,
                          cut, gamma.plus(a), delta.plus(b));
        ProofNode node;
        node.tag = RuleTag::ImpRight;
        node.props = {a, b};
        node.conclusion = Sequent{gamma, delta.plus(q)};
        node.premises.push_back(std::move(p));
        return contract_extra(std::move(node), Side::Right, q, gamma, delta);
      }
      case RuleTag::AndRight: {
        const Proposition& a = piL.props[0];
        const Proposition& b = piL.props[1];
        ProofNode p1 = run(weaken_proof(piL.premises[0], Side::Right, q), c1s,
                           weaken_proof(piR, Side::Right, a), c2s, cut, gamma, delta.plus(a));
        ProofNode p2 = run(weaken_proof(piL.premises[1], Side::Right, q), c1s,
                           weaken_proof(piR, Side::Right, b), c2s, cut, gamma, delta.plus(b));
        ProofNode node;
        node.tag = RuleTag::AndRight;
        node.props = {a, b};
        node.conclusion = Sequent{gamma, delta.plus(q)};
        node.premises.push_back(std::move(p1));
        node.premises.push_back(std::move(p2));
        return contract_extra(std::move(node), Side::Right, q, gamma, delta);
      }
      case RuleTag::OrRight: {
        const Proposition& a = piL.props[0];
        const Proposition& b = piL.props[1];
        ProofNode p = run(weaken_proof(piL.premises[0], Side::Right, q), c1s,
                          weaken_proof(weaken_proof(piR, Side::Right, a), Side::Right, b), c2s,
                          cut, gamma, delta.plus(a).plus(b));
        ProofNode node;
        node.tag = RuleTag::OrRight;
        node.props = {a, b};
        node.conclusion = Sequent{gamma, delta.plus(q)};
        node.premises.push_back(std::move(p));
        return contract_extra(std::move(node), Side::Right, q, gamma, delta);
      }
      case RuleTag::ForallRight:
      case RuleTag::ExistsLeft: {
        bool is_right = piL.tag == RuleTag::ForallRight;
        // Rename the eigenvariable fresh for everything in sight first.
        std::set<std::string> taken = proof_free_vars(piL);
        auto morefv = proof_free_vars(piR);
        taken.insert(morefv.begin(), morefv.end());
        collect_free_vars(cut, taken);
        collect_free_vars(q, taken);
        std::string z = fresh_name(piL.var, taken);
        Substitution rename{{piL.var, Term::var(z)}};
        ProofNode rho = substitute_proof(piL.premises[0], rename);
        Proposition body = substitute(*piL.qbody, rename);
        ProofNode p = is_right
                          ? run(weaken_proof(rho, Side::Right, q), c1s,
                                weaken_proof(piR, Side::Right, body), c2s, cut, gamma,
                                delta.plus(body))
                          : run(weaken_proof(rho, Side::Left, q), c1s,
                                weaken_proof(piR, Side::Left, body), c2s, cut,
                                gamma.plus(body), delta);
        ProofNode node;
        node.tag = piL.tag;
        node.var = z;
        node.qbody = body;
        node.conclusion = is_right ? Sequent{gamma, delta.plus(q)} : Sequent{gamma.plus(q), delta};
        node.premises.push_back(std::move(p));
        return contract_extra(std::move(node), is_right ? Side::Right : Side::Left, q, gamma,
                              delta);
      }
      case RuleTag::ExistsRight: {
        Substitution inst{{piL.var, *piL.term}};
        Proposition body = substitute(*piL.qbody, inst);
        ProofNode p = run(weaken_proof(piL.premises[0], Side::Right, q), c1s,
                          weaken_proof(piR, Side::Right, body), c2s, cut, gamma,
                          delta.plus(body));
        ProofNode node;
        node.tag = RuleTag::ExistsRight;
        node.var = piL.var;
        node.qbody = piL.qbody;
        node.term = piL.term;
        node.conclusion = Sequent{gamma, delta.plus(q)};
        node.premises.push_back(std::move(p));
        return contract_extra(std::move(node), Side::Right, q, gamma, delta);
      }
      default:
        throw std::logic_error("push_context_rule_left: unexpected tag");
    }
  }

  ProofNode push_context_rule_right(const ProofNode& piR, const Proposition& q,
                                    const ProofNode& piL, const PropMultiset& c1s,
                                    const PropMultiset& c2s, const Proposition& cut,
                                    const PropMultiset& gamma, const PropMultiset& delta) {
    // Mirror of the left-side push: the rule lives on piR, the other partner
    // is piL with its descendants on the right.
    switch (piR.tag) {
      case RuleTag::ImpLeft: {
        const Proposition& a = piR.props[0];
        const Proposition& b = piR.props[1];
        ProofNode p1 = run(weaken_proof(piL, Side::Right, a), c1s,
                           weaken_proof(piR.premises[0], Side::Left, q), c2s, cut, gamma,
                           delta.plus(a));
        ProofNode p2 = run(weaken_proof(piL, Side::Left, b), c1s,
                           weaken_proof(piR.premises[1], Side::Left, q), c2s, cut,
                           gamma.plus(b), delta);
        ProofNode node;
        node.tag = RuleTag::ImpLeft;
        node.props = {a, b};
        node.conclusion = Sequent{gamma.plus(q), delta};
        node.premises.push_back(std::move(p1));
        node.premises.push_back(std::move(p2));
        return contract_extra(std::move(node), Side::Left, q, gamma, delta);
      }
      case RuleTag::AndLeft: {
        const Proposition& a = piR.props[0];
        const Proposition& b = piR.props[1];
        ProofNode p = run(weaken_proof(weaken_proof(piL, Side::Left, a), Side::Left, b), c1s,
                          weaken_proof(piR.premises[0], Side::Left, q), c2s, cut,
                          gamma.plus(a).plus(b), delta);
        ProofNode node;
        node.tag = RuleTag::AndLeft;
        node.props = {a, b};
        node.conclusion = Sequent{gamma.plus(q), delta};
        node.premises.push_back(std::move(p));
        return contract_extra(std::move(node), Side::Left, q, gamma, delta);
      }
      case RuleTag::OrLeft: {
        const Proposition& a = piR.props[0];
        const Proposition& b = piR.props[1];
        ProofNode p1 = run(weaken_proof(piL, Side::Left, a), c1s,
                           weaken_proof(piR.premises[0], Side::Left, q), c2s, cut,
                           gamma.plus(a), delta);
        ProofNode p2 = run(weaken_proof(piL, Side::Left, b), c1s,
                           weaken_proof(piR.premises[1], Side::Left, q), c2s, cut,
                           gamma.plus(b), delta);
        ProofNode node;
        node.tag = RuleTag::OrLeft;
        node.props = {a, b};
        node.conclusion = Sequent{gamma.plus(q), delta};
        node.premises.push_back(std::move(p1));
        node.premises.push_back(std::move(p2));
        return contract_extra(std::move(node), Side::Left, q, gamma, delta);
      }
      case RuleTag::ForallLeft: {
        Substitution inst{{piR.var, *piR.term}};
        Proposition body = substitute(*piR.qbody, inst);
        ProofNode p = run(weaken_proof(piL, Side::Left, body), c1s,
                          weaken_proof(piR.premises[0], Side::Left, q), c2s, cut,
                          gamma.plus(body), delta);
        ProofNode node;
        node.tag = RuleTag::ForallLeft;
        node.var = piR.var;
        node.qbody = piR.qbody;
        node.term = piR.term;
        node.conclusion = Sequent{gamma.plus(q), delta};
        node.premises.push_back(std::move(p));
        return contract_extra(std::move(node), Side::Left, q, gamma, delta);
      }
      case RuleTag::ImpRight: {
        const Proposition& a = piR.props[0];
        const Proposition& b = piR.props[1];
        ProofNode p = run(weaken_proof(weaken_proof(piL, Side::Left, a), Side::Right, b), c1s,
                          weaken_proof(piR.premises[0], Side::Right, q), c2s, cut,
                          gamma.plus(a), delta.plus(b));
        ProofNode node;
        node.tag = RuleTag::ImpRight;
        node.props = {a, b};
        node.conclusion = Sequent{gamma, delta.plus(q)};
        node.premises.push_back(std::move(p));
        return contract_extra(std::move(node), Side::Right, q, gamma, delta);
      }
      case RuleTag::AndRight: {
        const Proposition& a = piR.props[0];
        const Proposition& b = piR.props[1];
        ProofNode p1 = run(weaken_proof(piL, Side::Right, a), c1s,
                           weaken_proof(piR.premises[0], Side::Right, q), c2s, cut, gamma,
                           delta.plus(a));
        ProofNode p2 = run(weaken_proof(piL, Side::Right, b), c1s,
                           weaken_proof(piR.premises[1], Side::Right, q), c2s, cut, gamma,
                           delta.plus(b));
        ProofNode node;
        node.tag = RuleTag::AndRight;
        node.props = {a, b};
        node.conclusion = Sequent{gamma, delta.plus(q)};
        node.premises.push_back(std::move(p1));
        node.premises.push_back(std::move(p2));
        return contract_extra(std::move(node), Side::Right, q, gamma, delta);
      }
      case RuleTag::OrRight: {
        const Proposition& a = piR.props[0];
        const Proposition& b = piR.props[1];
        ProofNode p = run(weaken_proof(weaken_proof(piL, Side::Right, a), Side::Right, b), c1s,
                          weaken_proof(piR.premises[0], Side::Right, q), c2s, cut, gamma,
                          delta.plus(a).plus(b));
        ProofNode node;
        node.tag = RuleTag::OrRight;
        node.props = {a, b};
        node.conclusion = Sequent{gamma, delta.plus(q)};
        node.premises.push_back(std::move(p));
        return contract_extra(std::move(node), Side::Right, q, gamma, delta);
      }
      case RuleTag::ForallRight:
      case RuleTag::ExistsLeft: {
        bool is_right = piR.tag == RuleTag::ForallRight;
        std::set<std::string> taken = proof_free_vars(piR);
        auto morefv = proof_free_vars(piL);
        taken.insert(morefv.begin(), morefv.end());
        collect_free_vars(cut, taken);
        collect_free_vars(q, taken);
        std::string z = fresh_name(piR.var, taken);
        Substitution rename{{piR.var, Term::var(z)}};
        ProofNode rho = substitute_proof(piR.premises[0], rename);
        Proposition body = substitute(*piR.qbody, rename);
        ProofNode p = is_right
                          ? run(weaken_proof(piL, Side::Right, body), c1s,
                                weaken_proof(rho, Side::Right, q), c2s, cut, gamma,
                                delta.plus(body))
                          : run(weaken_proof(piL, Side::Left, body), c1s,
                                weaken_proof(rho, Side::Left, q), c2s, cut, gamma.plus(body),
                                delta);
        ProofNode node;
        node.tag = piR.tag;
        node.var = z;
        node.qbody = body;
        node.conclusion = is_right ? Sequent{gamma, delta.plus(q)} : Sequent{gamma.plus(q), delta};
        node.premises.push_back(std::move(p));
        return contract_extra(std::move(node), is_right ? Side::Right : Side::Left, q, gamma,
                              delta);
      }
      case RuleTag::ExistsRight: {
        Substitution inst{{piR.var, *piR.term}};
        Proposition body = substitute(*piR.qbody, inst);
        ProofNode p = run(weaken_proof(piL, Side::Right, body), c1s,
                          weaken_proof(piR.premises[0], Side::Right, q), c2s, cut, gamma,
                          delta.plus(body));
        ProofNode node;
        node.tag = RuleTag::ExistsRight;
        node.var = piR.var;
        node.qbody = piR.qbody;
        node.term = piR.term;
        node.conclusion = Sequent{gamma, delta.plus(q)};
        node.premises.push_back(std::move(p));
        return contract_extra(std::move(node), Side::Right, q, gamma, delta);
      }
      default:
        throw std::logic_error("push_context_rule_right: unexpected tag");
    }
  }

  // ---- both leaves: the atomic case, where confluence is used

  ProofNode atomic_case(const ProofNode& piL, const PropMultiset& c1s, const ProofNode& piR,
                        const PropMultiset& c2s, const Proposition& cut,
                        const PropMultiset& gamma, const PropMultiset& delta) {
    const Proposition& b = piL.props[0];  // common reduct of A and a descendant
    const Proposition& d = piR.props[0];
    std::optional<Proposition> a_prop, e_prop;
    for (const auto& g : gamma.items())
      if (reach(g, b)) {
        a_prop = g;
        break;
      }
    for (const auto& t : delta.items())
      if (reach(t, d)) {
        e_prop = t;
        break;
      }
    if (!a_prop || !e_prop)
      throw std::logic_error("atomic case: axioms do not pair with the contexts");
    // Direct join of the two context propositions (the confluence case).
    auto join = all_meets(R, *a_prop, *e_prop, budget);
    if (!join.meets.empty()) {
      events.push_back("atomic-join");
      return make_axiom(Sequent{gamma, delta}, join.meets.front());
    }
    if (b == cut || cut == d) {
      events.push_back("atomic-short-circuit");
      return make_axiom(Sequent{gamma, delta}, b == cut ? d : b);
    }
    std::vector<Proposition> cand1 = first_steps_towards(R, cut, b, budget);
    std::vector<Proposition> cand2 = first_steps_towards(R, cut, d, budget);
    if (cand1.empty() || cand2.empty())
      throw std::logic_error("atomic case: no first step towards the common reduct");
    ScriptChoice choice = policy.take();
    Proposition c1p = cand1.front();
    Proposition c2p = cand2.front();
    if (choice.left)
      for (const auto& c : cand1)
        if (c == *choice.left) c1p = c;
    if (choice.right)
      for (const auto& c : cand2)
        if (c == *choice.right) c2p = c;
    MeetSet joiners = all_meets(R, c1p, c2p, budget);
    if (joiners.meets.empty()) {
      StepOutcome stuck;
      stuck.kind = StepOutcome::Kind::Stuck;
      stuck.div_left = c1p;
      stuck.div_center = cut;
      stuck.div_right = c2p;
      stuck.budget_limited = !joiners.exact;
      stuck.note = joiners.exact ? "one-step divergence of the cut proposition is not joinable"
                                 : "joiner search truncated by budget";
      throw StuckError{std::move(stuck)};
    }
    events.push_back("atomic-split");
    introduced.push_back(c1p);
    introduced.push_back(c2p);
    return build_split_tree(gamma, delta, b, d, c1p, c2p, joiners.meets.front());
  }

  // ---- both logical on descendants: the key case, one cut per subformula

  ProofNode key_case(const ProofNode& piL, const PropMultiset& c1s, const ProofNode& piR,
                     const PropMultiset& c2s, const Proposition& cut, const PropMultiset& gamma,
                     const PropMultiset& delta) {
    Proposition c1 = extract_principal(piL);
    Proposition c2 = extract_principal(piR);
    PropMultiset rest1 = *c1s.minus(c1);
    PropMultiset rest2 = *c2s.minus(c2);
    switch (cut.kind) {
      case Proposition::Kind::And: {
        // piL ends and-right on c1, piR ends and-left on c2.
        const Proposition& a1 = piL.props[0];
        const Proposition& b1 = piL.props[1];
        const Proposition& a2 = piR.props[0];
        const Proposition& b2 = piR.props[1];
        ProofNode l1 = run(piL.premises[0], rest1, weaken_proof(piR, Side::Right, a1), c2s, cut,
                           gamma, delta.plus(a1));
        ProofNode l2 = run(piL.premises[1], rest1, weaken_proof(piR, Side::Right, b1), c2s, cut,
                           gamma, delta.plus(b1));
        ProofNode r = run(weaken_proof(weaken_proof(piL, Side::Left, a2), Side::Left, b2), c1s,
                          piR.premises[0], rest2, cut, gamma.plus(a2).plus(b2), delta);
        const Proposition& sub_a = cut.kids[0];
        const Proposition& sub_b = cut.kids[1];
        events.push_back("key-case-and");
        introduced.push_back(sub_a);
        introduced.push_back(sub_b);
        ProofNode cut_a = make_cut(sub_a, Sequent{gamma.plus(b2), delta},
                                   weaken_proof(l1, Side::Left, b2), std::move(r));
        return make_cut(sub_b, Sequent{gamma, delta}, std::move(l2), std::move(cut_a));
      }
      case Proposition::Kind::Implies: {
        // piL ends imp-right on c1, piR ends imp-left on c2.
        const Proposition& a1 = piL.props[0];
        const Proposition& b1 = piL.props[1];
        const Proposition& a2 = piR.props[0];
        const Proposition& b2 = piR.props[1];
        ProofNode l = run(piL.premises[0], rest1,
                          weaken_proof(weaken_proof(piR, Side::Left, a1), Side::Right, b1), c2s,
                          cut, gamma.plus(a1), delta.plus(b1));
        ProofNode r1 = run(weaken_proof(piL, Side::Right, a2), c1s, piR.premises[0], rest2, cut,
                           gamma, delta.plus(a2));
        ProofNode r2 = run(weaken_proof(piL, Side::Left, b2), c1s, piR.premises[1], rest2, cut,
                           gamma.plus(b2), delta);
        const Proposition& sub_a = cut.kids[0];
        const Proposition& sub_b = cut.kids[1];
        events.push_back("key-case-imp");
        introduced.push_back(sub_a);
        introduced.push_back(sub_b);
        ProofNode cut_a = make_cut(sub_a, Sequent{gamma, delta.plus(b1)},
                                   weaken_proof(r1, Side::Right, b1), std::move(l));
        return make_cut(sub_b, Sequent{gamma, delta}, std::move(cut_a), std::move(r2));
      }
      case Proposition::Kind::Or: {
        // piL ends or-right on c1, piR ends or-left on c2.
        const Proposition& a1 = piL.props[0];
        const Proposition& b1 = piL.props[1];
        const Proposition& a2 = piR.props[0];
        const Proposition& b2 = piR.props[1];
        ProofNode l = run(piL.premises[0], rest1,
                          weaken_proof(weaken_proof(piR, Side::Right, a1), Side::Right, b1),
                          c2s, cut, gamma, delta.plus(a1).plus(b1));
        ProofNode r1 = run(weaken_proof(piL, Side::Left, a2), c1s, piR.premises[0], rest2, cut,
                           gamma.plus(a2), delta);
        ProofNode r2 = run(weaken_proof(piL, Side::Left, b2), c1s, piR.premises[1], rest2, cut,
                           gamma.plus(b2), delta);
        const Proposition& sub_a = cut.kids[0];
        const Proposition& sub_b = cut.kids[1];
        events.push_back("key-case-or");
        introduced.push_back(sub_a);
        introduced.push_back(sub_b);
        ProofNode cut_a = make_cut(sub_a, Sequent{gamma, delta.plus(b1)}, std::move(l),
                                   weaken_proof(r1, Side::Right, b1));
        return make_cut(sub_b, Sequent{gamma, delta}, std::move(cut_a), std::move(r2));
      }
      case Proposition::Kind::Forall: {
        // piL ends forall-right on c1 (eigen x), piR ends forall-left with t.
        Proposition a1 = *piL.qbody;  // x free
        const std::string& x = piL.var;
        const Term& t = *piR.term;
        Substitution instR{{piR.var, t}};
        Proposition a2t = substitute(*piR.qbody, instR);
        ProofNode l = run(piL.premises[0], rest1, weaken_proof(piR, Side::Right, a1), c2s, cut,
                          gamma, delta.plus(a1));
        Substitution instL{{x, t}};
        ProofNode l_inst = substitute_proof(l, instL);
        ProofNode r = run(weaken_proof(piL, Side::Left, a2t), c1s, piR.premises[0], rest2, cut,
                          gamma.plus(a2t), delta);
        Proposition cut_inst = instantiate(cut.kids[0], t);
        events.push_back("key-case-forall");
        introduced.push_back(cut_inst);
        return make_cut(cut_inst, Sequent{gamma, delta}, std::move(l_inst), std::move(r));
      }
      case Proposition::Kind::Exists: {
        // piL ends exists-right with t on c1, piR ends exists-left (eigen x).
        Substitution instL{{piL.var, *piL.term}};
        Proposition a1t = substitute(*piL.qbody, instL);
        Proposition a2 = *piR.qbody;
        const std::string& x = piR.var;
        const Term& t = *piL.term;
        ProofNode l = run(piL.premises[0], rest1, weaken_proof(piR, Side::Right, a1t), c2s, cut,
                          gamma, delta.plus(a1t));
        ProofNode r = run(weaken_proof(piL, Side::Left, a2), c1s, piR.premises[0], rest2, cut,
                          gamma.plus(a2), delta);
        Substitution instR{{x, t}};
        ProofNode r_inst = substitute_proof(r, instR);
        Proposition cut_inst = instantiate(cut.kids[0], t);
        events.push_back("key-case-exists");
        introduced.push_back(cut_inst);
        return make_cut(cut_inst, Sequent{gamma, delta}, std::move(l), std::move(r_inst));
      }
      default:
        throw std::logic_error("key_case: cut proposition has no logical structure");
    }
  }
};

}  // namespace

EliminationResult eliminate_cuts_full(const RewriteSystem& R, const ProofNode& p,
                                      const StepPolicy& policy, size_t step_budget,
                                      const Budget& budget) {
  EliminationResult res;
  res.proof = normalize_axioms(R, p, budget);
  res.trace.initial_cuts = cut_propositions(res.proof);
  PolicyState ps{&policy, 0};
  while (true) {
    if (is_cut_free(res.proof)) {
      res.kind = EliminationResult::Kind::CutFree;
      return res;
    }
    if (res.steps >= step_budget) {
      res.kind = EliminationResult::Kind::BudgetExhausted;
      return res;
    }
    ProofNode* target = find_target_cut(res.proof);
    if (!target) {
      res.kind = EliminationResult::Kind::Failed;
      return res;
    }
    Proposition cut_prop = target->props[0];
    TraceEntry entry;
    entry.cut_prop = cut_prop;

    std::optional<ProofNode> replacement;
    if (cut_prop.is_atom()) {
      StepOutcome outcome = newman_step(R, *target, ps, budget);
      if (outcome.kind == StepOutcome::Kind::Stuck) {
        if (outcome.budget_limited) {
          res.kind = EliminationResult::Kind::BudgetExhausted;
        } else {
          entry.kind = "stuck";
          entry.cuts_after = cut_propositions(res.proof);
          res.trace.entries.push_back(std::move(entry));
          res.kind = EliminationResult::Kind::Failed;
        }
        res.stuck = std::move(outcome);
        return res;
      }
      if (outcome.kind != StepOutcome::Kind::NotApplicable) {
        entry.kind = outcome_kind_name(outcome.kind);
        if (outcome.kind == StepOutcome::Kind::SplitIntoTwoCuts)
          entry.introduced = {*outcome.c1p, *outcome.c2p};
        replacement = std::move(outcome.proof);
      }
    }
    if (!replacement) {
      std::vector<std::string> events;
      std::vector<Proposition> introduced;
      Reconstructor rec{R, budget, ps, events, introduced};
      try {
        PropMultiset c1s, c2s;
        c1s.insert(*target->premises[0].conclusion.delta.diff_one(target->conclusion.delta));
        c2s.insert(*target->premises[1].conclusion.gamma.diff_one(target->conclusion.gamma));
        replacement = rec.run(target->premises[0], c1s, target->premises[1], c2s, cut_prop,
                              target->conclusion.gamma, target->conclusion.delta);
      } catch (const StuckError& e) {
        entry.kind = "stuck";
        entry.cuts_after = cut_propositions(res.proof);
        res.trace.entries.push_back(std::move(entry));
        res.kind = e.outcome.budget_limited ? EliminationResult::Kind::BudgetExhausted
                                            : EliminationResult::Kind::Failed;
        res.stuck = e.outcome;
        return res;
      }
      entry.kind = events.empty() ? "context" : events.front();
      entry.introduced = std::move(introduced);
    }
    *target = std::move(*replacement);
    entry.cuts_after = cut_propositions(res.proof);
    res.trace.entries.push_back(std::move(entry));
    ++res.steps;
  }
}

MeasureReport instrument_measure(const RewriteSystem& R, const ReductionTrace& trace,
                                 const std::vector<Proposition>& carrier, const Budget& budget) {
  MeasureReport rep;
  auto ordering = empirical_ordering(R, carrier, budget);
  if (ordering.cycle_found) {
    rep.status = MeasureReport::Status::NotTerminating;
    rep.detail = "no reduction ordering: the carrier closure has a cycle";
    return rep;
  }
  if (!ordering.complete || !ordering.order) {
    rep.status = MeasureReport::Status::Truncated;
    rep.detail = "carrier closure truncated by budget";
    return rep;
  }
  const auto& ord = *ordering.order;
  std::vector<Proposition> prev = trace.initial_cuts;
  for (size_t i = 0; i < trace.entries.size(); ++i) {
    const TraceEntry& e = trace.entries[i];
    if (e.kind == "split") {
      bool left_ok = false, right_ok = false;
      for (const auto& os : one_step_reducts(R, e.cut_prop)) {
        if (!e.introduced.empty() && os.result == e.introduced[0]) left_ok = true;
        if (e.introduced.size() > 1 && os.result == e.introduced[1]) right_ok = true;
      }
      if (!left_ok || !right_ok) {
        rep.status = MeasureReport::Status::Violation;
        rep.detail = "split step " + std::to_string(i) +
                     " did not replace the cut by one-step reducts";
        return rep;
      }
    }
    if (!multiset_greater(ord, prev, e.cuts_after)) {
      rep.status = MeasureReport::Status::Violation;
      rep.detail = "cut multiset does not decrease at step " + std::to_string(i);
      return rep;
    }
    prev = e.cuts_after;
    ++rep.checked_steps;
  }
  return rep;
}

}  // namespace admo
