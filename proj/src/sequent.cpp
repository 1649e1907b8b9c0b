#include "admo/sequent.hpp"

#include <algorithm>

namespace admo {

PropMultiset::PropMultiset(std::vector<Proposition> props) : items_(std::move(props)) {
  std::sort(items_.begin(), items_.end(), Less<Proposition>{});
}

void PropMultiset::insert(Proposition p) {
  auto it = std::upper_bound(items_.begin(), items_.end(), p, Less<Proposition>{});
  items_.insert(it, std::move(p));
}

bool PropMultiset::erase_one(const Proposition& p) {
  auto it = std::lower_bound(items_.begin(), items_.end(), p, Less<Proposition>{});
  if (it == items_.end() || *it != p) return false;
  items_.erase(it);
  return true;
}

bool PropMultiset::contains(const Proposition& p) const { return count(p) > 0; }

size_t PropMultiset::count(const Proposition& p) const {
  auto range = std::equal_range(items_.begin(), items_.end(), p, Less<Proposition>{});
  return static_cast<size_t>(range.second - range.first);
}

PropMultiset PropMultiset::plus(const Proposition& p) const {
  PropMultiset out = *this;
  out.insert(p);
  return out;
}

std::optional<PropMultiset> PropMultiset::minus(const Proposition& p) const {
  PropMultiset out = *this;
  if (!out.erase_one(p)) return std::nullopt;
  return out;
}

std::optional<PropMultiset> PropMultiset::minus_all(const PropMultiset& other) const {
  PropMultiset out = *this;
  for (const auto& p : other.items())
    if (!out.erase_one(p)) return std::nullopt;
  return out;
}

std::optional<Proposition> PropMultiset::diff_one(const PropMultiset& smaller) const {
  if (items_.size() != smaller.items_.size() + 1) return std::nullopt;
  std::optional<Proposition> extra;
  size_t i = 0, j = 0;
  while (i < items_.size()) {
    if (j < smaller.items_.size() && items_[i] == smaller.items_[j]) {
      ++i;
      ++j;
      continue;
    }
    if (extra) return std::nullopt;
    extra = items_[i];
    ++i;
  }
  if (j != smaller.items_.size()) return std::nullopt;
  return extra;
}

bool PropMultiset::superset_of(const PropMultiset& other) const {
  size_t i = 0;
  for (const auto& p : other.items_) {
    while (i < items_.size() && items_[i] < p) ++i;
    if (i == items_.size() || items_[i] != p) return false;
    ++i;
  }
  return true;
}

bool sequent_atomic(const Sequent& s) {
  for (const auto& p : s.gamma.items())
    if (!p.is_atom()) return false;
  for (const auto& p : s.delta.items())
    if (!p.is_atom()) return false;
  return true;
}

std::set<std::string> free_vars(const PropMultiset& m) {
  std::set<std::string> out;
  for (const auto& p : m.items()) collect_free_vars(p, out);
  return out;
}

const char* rule_tag_name(RuleTag tag) {
  switch (tag) {
    case RuleTag::Axiom: return "axiom";
    case RuleTag::Cut: return "cut";
    case RuleTag::ContrLeft: return "contr-left";
    case RuleTag::ContrRight: return "contr-right";
    case RuleTag::WeakLeft: return "weak-left";
    case RuleTag::WeakRight: return "weak-right";
    case RuleTag::ImpLeft: return "imp-left";
    case RuleTag::ImpRight: return "imp-right";
    case RuleTag::AndLeft: return "and-left";
    case RuleTag::AndRight: return "and-right";
    case RuleTag::OrLeft: return "or-left";
    case RuleTag::OrRight: return "or-right";
    case RuleTag::BottomLeft: return "bottom-left";
    case RuleTag::ForallLeft: return "forall-left";
    case RuleTag::ForallRight: return "forall-right";
    case RuleTag::ExistsLeft: return "exists-left";
    case RuleTag::ExistsRight: return "exists-right";
  }
  return "?";
}

std::optional<RuleTag> rule_tag_from_name(const std::string& name) {
  static const std::map<std::string, RuleTag> table = {
      {"axiom", RuleTag::Axiom},
      {"cut", RuleTag::Cut},
      {"contr-left", RuleTag::ContrLeft},
      {"contr-right", RuleTag::ContrRight},
      {"weak-left", RuleTag::WeakLeft},
      {"weak-right", RuleTag::WeakRight},
      {"imp-left", RuleTag::ImpLeft},
      {"imp-right", RuleTag::ImpRight},
      {"and-left", RuleTag::AndLeft},
      {"and-right", RuleTag::AndRight},
      {"or-left", RuleTag::OrLeft},
      {"or-right", RuleTag::OrRight},
      {"bottom-left", RuleTag::BottomLeft},
      {"forall-left", RuleTag::ForallLeft},
      {"forall-right", RuleTag::ForallRight},
      {"exists-left", RuleTag::ExistsLeft},
      {"exists-right", RuleTag::ExistsRight},
  };
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

size_t rule_premise_count(RuleTag tag) {
  switch (tag) {
    case RuleTag::Axiom:
    case RuleTag::BottomLeft:
      return 0;
    case RuleTag::Cut:
    case RuleTag::ImpLeft:
    case RuleTag::AndRight:
    case RuleTag::OrLeft:
      return 2;
    default:
      return 1;
  }
}

bool proof_equal(const ProofNode& a, const ProofNode& b) {
  if (a.tag != b.tag || a.props != b.props || a.var != b.var) return false;
  if (a.qbody.has_value() != b.qbody.has_value()) return false;
  if (a.qbody && *a.qbody != *b.qbody) return false;
  if (a.term.has_value() != b.term.has_value()) return false;
  if (a.term && *a.term != *b.term) return false;
  if (a.conclusion != b.conclusion || a.premises.size() != b.premises.size()) return false;
  for (size_t i = 0; i < a.premises.size(); ++i)
    if (!proof_equal(a.premises[i], b.premises[i])) return false;
  return true;
}

bool proof_atomic(const ProofNode& p) {
  if (!sequent_atomic(p.conclusion)) return false;
  for (const auto& pr : p.premises)
    if (!proof_atomic(pr)) return false;
  return true;
}

size_t proof_size(const ProofNode& p) {
  size_t n = 1;
  for (const auto& pr : p.premises) n += proof_size(pr);
  return n;
}

static void proof_free_vars_into(const ProofNode& p, std::set<std::string>& out) {
  for (const auto& prop : p.conclusion.gamma.items()) collect_free_vars(prop, out);
  for (const auto& prop : p.conclusion.delta.items()) collect_free_vars(prop, out);
  for (const auto& prop : p.props) collect_free_vars(prop, out);
  if (p.qbody) collect_free_vars(*p.qbody, out);
  if (p.term) collect_free_vars(*p.term, out);
  for (const auto& pr : p.premises) proof_free_vars_into(pr, out);
}

std::set<std::string> proof_free_vars(const ProofNode& p) {
  std::set<std::string> out;
  proof_free_vars_into(p, out);
  return out;
}

bool is_cut_free(const ProofNode& proof) {
  if (proof.tag == RuleTag::Cut) return false;
  for (const auto& p : proof.premises)
    if (!is_cut_free(p)) return false;
  return true;
}

static void cut_props_into(const ProofNode& p, std::vector<Proposition>& out) {
  if (p.tag == RuleTag::Cut && !p.props.empty()) out.push_back(p.props[0]);
  for (const auto& pr : p.premises) cut_props_into(pr, out);
}

std::vector<Proposition> cut_propositions(const ProofNode& proof) {
  std::vector<Proposition> out;
  cut_props_into(proof, out);
  std::sort(out.begin(), out.end(), Less<Proposition>{});
  return out;
}

ProofNode substitute_proof(const ProofNode& proof, const Substitution& s) {
  if (s.empty()) return proof;
  ProofNode node = proof;
  if (node.tag == RuleTag::ForallRight || node.tag == RuleTag::ExistsLeft) {
    std::set<std::string> range_vars;
    for (const auto& [x, t] : s.map) collect_free_vars(t, range_vars);
    bool clash = s.lookup(node.var) != nullptr || range_vars.count(node.var) != 0;
    if (clash) {
      std::set<std::string> taken = range_vars;
      for (const auto& [x, t] : s.map) taken.insert(x);
      auto pfv = proof_free_vars(node);
      taken.insert(pfv.begin(), pfv.end());
      std::string fresh = fresh_name(node.var, taken);
      Substitution rename{{node.var, Term::var(fresh)}};
      if (node.qbody) node.qbody = substitute(*node.qbody, rename);
      if (!node.premises.empty()) node.premises[0] = substitute_proof(node.premises[0], rename);
      node.var = fresh;
    }
  }
  auto sub_multiset = [&](const PropMultiset& m) {
    std::vector<Proposition> items;
    items.reserve(m.size());
    for (const auto& p : m.items()) items.push_back(substitute(p, s));
    return PropMultiset(std::move(items));
  };
  node.conclusion.gamma = sub_multiset(node.conclusion.gamma);
  node.conclusion.delta = sub_multiset(node.conclusion.delta);
  for (auto& p : node.props) p = substitute(p, s);
  if (node.qbody) node.qbody = substitute(*node.qbody, s);
  if (node.term) node.term = substitute(*node.term, s);
  for (auto& w : node.witnesses)
    for (auto& p : w) p = substitute(p, s);
  for (auto& pr : node.premises) pr = substitute_proof(pr, s);
  return node;
}

static ProofNode add_everywhere(const ProofNode& proof, Side side, const Proposition& p) {
  ProofNode node = proof;
  if (side == Side::Left)
    node.conclusion.gamma.insert(p);
  else
    node.conclusion.delta.insert(p);
  for (auto& pr : node.premises) pr = add_everywhere(pr, side, p);
  return node;
}

static ProofNode rename_clashing_eigens(const ProofNode& proof,
                                        const std::set<std::string>& avoid) {
  ProofNode node = proof;
  if ((node.tag == RuleTag::ForallRight || node.tag == RuleTag::ExistsLeft) &&
      avoid.count(node.var)) {
    std::set<std::string> taken = avoid;
    auto pfv = proof_free_vars(node);
    taken.insert(pfv.begin(), pfv.end());
    std::string fresh = fresh_name(node.var, taken);
    Substitution rename{{node.var, Term::var(fresh)}};
    if (node.qbody) node.qbody = substitute(*node.qbody, rename);
    if (!node.premises.empty()) node.premises[0] = substitute_proof(node.premises[0], rename);
    node.var = fresh;
  }
  for (auto& pr : node.premises) pr = rename_clashing_eigens(pr, avoid);
  return node;
}

ProofNode weaken_proof(const ProofNode& proof, Side side, const Proposition& p) {
  ProofNode safe = rename_clashing_eigens(proof, free_vars(p));
  return add_everywhere(safe, side, p);
}

ProofNode make_axiom(Sequent concl, Proposition a) {
  ProofNode n;
  n.tag = RuleTag::Axiom;
  n.props.push_back(std::move(a));
  n.conclusion = std::move(concl);
  return n;
}

ProofNode make_cut(Proposition c, Sequent concl, ProofNode left, ProofNode right) {
  ProofNode n;
  n.tag = RuleTag::Cut;
  n.props.push_back(std::move(c));
  n.conclusion = std::move(concl);
  n.premises.push_back(std::move(left));
  n.premises.push_back(std::move(right));
  return n;
}

namespace {

struct Checker {
  const RewriteSystem& R;
  Budget budget;
  CheckReport report;

  void fail(const std::string& path, RuleTag tag, const std::string& condition,
            const std::string& explanation, bool budget_exhausted = false) {
    report.failures.push_back({path, tag, condition, explanation, budget_exhausted});
  }

  // Replays an embedded chain: consecutive one-step rewrites from front to back.
  bool replay_chain(const WitnessChain& chain, const Proposition& from, const Proposition& to) {
    if (chain.empty() || chain.front() != from || chain.back() != to) return false;
    for (size_t i = 0; i + 1 < chain.size(); ++i) {
      bool stepped = false;
      for (const auto& os : one_step_reducts(R, chain[i]))
        if (os.result == chain[i + 1]) {
          stepped = true;
          break;
        }
      if (!stepped) return false;
    }
    return true;
  }

  // Verifies from ->* to; records the witness chain under `path` on success.
  // The node's embedded witness with matching endpoints is replayed when present.
  Reach require_reaches(const ProofNode& node, const std::string& path,
                        const std::string& condition, const Proposition& from,
                        const Proposition& to) {
    for (const auto& chain : node.witnesses) {
      if (chain.empty() || chain.front() != from || chain.back() != to) continue;
      if (replay_chain(chain, from, to)) {
        report.witnesses[path].push_back({condition, chain});
        return Reach::Yes;
      }
      fail(path, node.tag, condition, "embedded witness chain does not replay");
      return Reach::No;
    }
    auto r = reaches(R, from, to, budget);
    if (r.status == Reach::Yes) {
      std::vector<Proposition> chain{from};
      for (const auto& st : r.derivation->steps) chain.push_back(st.result);
      report.witnesses[path].push_back({condition, std::move(chain)});
    }
    return r.status;
  }

  void check_node(const ProofNode& node, const std::string& path) {
    const Sequent& c = node.conclusion;
    if (node.premises.size() != rule_premise_count(node.tag)) {
      fail(path, node.tag, "schema", "wrong number of premises");
      return;
    }
    switch (node.tag) {
      case RuleTag::Axiom:
        check_axiom(node, path);
        break;
      case RuleTag::BottomLeft:
        check_bottom_left(node, path);
        break;
      case RuleTag::Cut:
        check_cut(node, path);
        break;
      case RuleTag::ContrLeft:
      case RuleTag::ContrRight:
        check_contraction(node, path);
        break;
      case RuleTag::WeakLeft: {
        const Sequent& pr = node.premises[0].conclusion;
        if (pr.delta != c.delta || !c.gamma.diff_one(pr.gamma))
          fail(path, node.tag, "schema", "conclusion must add one proposition on the left");
        break;
      }
      case RuleTag::WeakRight: {
        const Sequent& pr = node.premises[0].conclusion;
        if (pr.gamma != c.gamma || !c.delta.diff_one(pr.delta))
          fail(path, node.tag, "schema", "conclusion must add one proposition on the right");
        break;
      }
      case RuleTag::ImpLeft:
      case RuleTag::ImpRight:
      case RuleTag::AndLeft:
      case RuleTag::AndRight:
      case RuleTag::OrLeft:
      case RuleTag::OrRight:
        check_connective(node, path);
        break;
      case RuleTag::ForallLeft:
      case RuleTag::ForallRight:
      case RuleTag::ExistsLeft:
      case RuleTag::ExistsRight:
        check_quantifier(node, path);
        break;
    }
    for (size_t i = 0; i < node.premises.size(); ++i)
      check_node(node.premises[i], path.empty() ? std::to_string(i) : path + "." + std::to_string(i));
  }

  void check_axiom(const ProofNode& node, const std::string& path) {
    if (node.props.size() != 1) {
      fail(path, node.tag, "schema", "axiom needs one annotated proposition");
      return;
    }
    const Proposition& a = node.props[0];
    // Some A1 in Gamma and A2 in Delta with A1 ->* A <-* A2.
    auto find_side = [&](const PropMultiset& side, const std::string& condition) {
      bool unknown = false;
      for (const auto& cand : side.items()) {
        Reach r = require_reaches(node, path, condition, cand, a);
        if (r == Reach::Yes) return Reach::Yes;
        if (r == Reach::Unknown) unknown = true;
      }
      return unknown ? Reach::Unknown : Reach::No;
    };
    Reach left = find_side(node.conclusion.gamma, "A1 ->* A");
    if (left != Reach::Yes)
      fail(path, node.tag, "A1 ->* A", "no left proposition reduces to the annotation",
           left == Reach::Unknown);
    Reach right = find_side(node.conclusion.delta, "A2 ->* A");
    if (right != Reach::Yes)
      fail(path, node.tag, "A2 ->* A", "no right proposition reduces to the annotation",
           right == Reach::Unknown);
  }

  void check_bottom_left(const ProofNode& node, const std::string& path) {
    bool unknown = false;
    for (const auto& cand : node.conclusion.gamma.items()) {
      Reach r = require_reaches(node, path, "A ->* _|_", cand, Proposition::bottom());
      if (r == Reach::Yes) return;
      if (r == Reach::Unknown) unknown = true;
    }
    fail(path, node.tag, "A ->* _|_", "no left proposition reduces to bottom", unknown);
  }

  void check_cut(const ProofNode& node, const std::string& path) {
    if (node.props.size() != 1) {
      fail(path, node.tag, "schema", "cut needs one annotated proposition");
      return;
    }
    const Sequent& c = node.conclusion;
    const Sequent& p1 = node.premises[0].conclusion;
    const Sequent& p2 = node.premises[1].conclusion;
    if (p1.gamma != c.gamma) {
      fail(path, node.tag, "schema", "first premise must keep the left context");
      return;
    }
    auto c1 = p1.delta.diff_one(c.delta);
    if (!c1) {
      fail(path, node.tag, "schema", "first premise must add one proposition on the right");
      return;
    }
    if (p2.delta != c.delta) {
      fail(path, node.tag, "schema", "second premise must keep the right context");
      return;
    }
    auto c2 = p2.gamma.diff_one(c.gamma);
    if (!c2) {
      fail(path, node.tag, "schema", "second premise must add one proposition on the left");
      return;
    }
    const Proposition& cut = node.props[0];
    Reach r1 = require_reaches(node, path, "C ->* C1", cut, *c1);
    if (r1 != Reach::Yes)
      fail(path, node.tag, "C ->* C1", "cut proposition does not reduce to the first premise's",
           r1 == Reach::Unknown);
    Reach r2 = require_reaches(node, path, "C ->* C2", cut, *c2);
    if (r2 != Reach::Yes)
      fail(path, node.tag, "C ->* C2", "cut proposition does not reduce to the second premise's",
           r2 == Reach::Unknown);
  }

  void check_contraction(const ProofNode& node, const std::string& path) {
    if (node.props.size() != 3) {
      fail(path, node.tag, "schema", "contraction needs annotations {A; A1; A2}");
      return;
    }
    const Proposition& a = node.props[0];
    const Proposition& a1 = node.props[1];
    const Proposition& a2 = node.props[2];
    const Sequent& c = node.conclusion;
    const Sequent& pr = node.premises[0].conclusion;
    bool ok;
    if (node.tag == RuleTag::ContrLeft) {
      auto base = c.gamma.minus(a);
      ok = base && pr.delta == c.delta && pr.gamma == base->plus(a1).plus(a2);
    } else {
      auto base = c.delta.minus(a);
      ok = base && pr.gamma == c.gamma && pr.delta == base->plus(a1).plus(a2);
    }
    if (!ok) {
      fail(path, node.tag, "schema", "premise must replace A by A1, A2");
      return;
    }
    Reach r1 = require_reaches(node, path, "A ->* A1", a, a1);
    if (r1 != Reach::Yes)
      fail(path, node.tag, "A ->* A1", "contracted proposition does not reduce to first copy",
           r1 == Reach::Unknown);
    Reach r2 = require_reaches(node, path, "A ->* A2", a, a2);
    if (r2 != Reach::Yes)
      fail(path, node.tag, "A ->* A2", "contracted proposition does not reduce to second copy",
           r2 == Reach::Unknown);
  }

  void check_connective(const ProofNode& node, const std::string& path) {
    if (node.props.size() != 2) {
      fail(path, node.tag, "schema", "connective rules need annotations {A; B}");
      return;
    }
    const Proposition& a = node.props[0];
    const Proposition& b = node.props[1];
    const Sequent& c = node.conclusion;
    Proposition shape = Proposition::bottom();
    std::string cond;
    switch (node.tag) {
      case RuleTag::ImpLeft:
      case RuleTag::ImpRight:
        shape = Proposition::implies(a, b);
        cond = "C ->* (A => B)";
        break;
      case RuleTag::AndLeft:
      case RuleTag::AndRight:
        shape = Proposition::and_(a, b);
        cond = "C ->* (A /\\ B)";
        break;
      default:
        shape = Proposition::or_(a, b);
        cond = "C ->* (A \\/ B)";
        break;
    }
    std::optional<Proposition> principal;
    switch (node.tag) {
      case RuleTag::ImpLeft: {
        const Sequent& p1 = node.premises[0].conclusion;
        const Sequent& p2 = node.premises[1].conclusion;
        principal = c.gamma.diff_one(p1.gamma);
        bool ok = principal && p1.delta == c.delta.plus(a) && p2.gamma == p1.gamma.plus(b) &&
                  p2.delta == c.delta;
        if (!ok) {
          fail(path, node.tag, "schema", "premises do not match the imp-left schema");
          return;
        }
        break;
      }
      case RuleTag::ImpRight: {
        const Sequent& pr = node.premises[0].conclusion;
        auto delta = pr.delta.minus(b);
        principal = delta ? c.delta.diff_one(*delta) : std::nullopt;
        bool ok = principal && pr.gamma == c.gamma.plus(a);
        if (!ok) {
          fail(path, node.tag, "schema", "premise does not match the imp-right schema");
          return;
        }
        break;
      }
      case RuleTag::AndLeft: {
        const Sequent& pr = node.premises[0].conclusion;
        auto base = pr.gamma.minus(a);
        if (base) base = base->minus(b);
        principal = base ? c.gamma.diff_one(*base) : std::nullopt;
        bool ok = principal && pr.delta == c.delta;
        if (!ok) {
          fail(path, node.tag, "schema", "premise does not match the and-left schema");
          return;
        }
        break;
      }
      case RuleTag::AndRight: {
        const Sequent& p1 = node.premises[0].conclusion;
        const Sequent& p2 = node.premises[1].conclusion;
        auto delta = p1.delta.minus(a);
        principal = delta ? c.delta.diff_one(*delta) : std::nullopt;
        bool ok = principal && p1.gamma == c.gamma && p2.gamma == c.gamma &&
                  delta && p2.delta == delta->plus(b);
        if (!ok) {
          fail(path, node.tag, "schema", "premises do not match the and-right schema");
          return;
        }
        break;
      }
      case RuleTag::OrLeft: {
        const Sequent& p1 = node.premises[0].conclusion;
        const Sequent& p2 = node.premises[1].conclusion;
        auto base = p1.gamma.minus(a);
        principal = base ? c.gamma.diff_one(*base) : std::nullopt;
        bool ok = principal && p1.delta == c.delta && p2.delta == c.delta &&
                  base && p2.gamma == base->plus(b);
        if (!ok) {
          fail(path, node.tag, "schema", "premises do not match the or-left schema");
          return;
        }
        break;
      }
      default: {  // OrRight
        const Sequent& pr = node.premises[0].conclusion;
        auto delta = pr.delta.minus(a);
        if (delta) delta = delta->minus(b);
        principal = delta ? c.delta.diff_one(*delta) : std::nullopt;
        bool ok = principal && pr.gamma == c.gamma;
        if (!ok) {
          fail(path, node.tag, "schema", "premise does not match the or-right schema");
          return;
        }
        break;
      }
    }
    Reach r = require_reaches(node, path, cond, *principal, shape);
    if (r != Reach::Yes)
      fail(path, node.tag, cond, "principal proposition does not reduce to the connective shape",
           r == Reach::Unknown);
  }

  void check_quantifier(const ProofNode& node, const std::string& path) {
    if (node.var.empty() || !node.qbody) {
      fail(path, node.tag, "schema", "quantifier rules need annotations {x; A; ...}");
      return;
    }
    bool needs_term = node.tag == RuleTag::ForallLeft || node.tag == RuleTag::ExistsRight;
    if (needs_term != node.term.has_value()) {
      fail(path, node.tag, "schema", "instantiation term annotation mismatch");
      return;
    }
    const Sequent& c = node.conclusion;
    const Sequent& pr = node.premises[0].conclusion;
    bool is_forall = node.tag == RuleTag::ForallLeft || node.tag == RuleTag::ForallRight;
    Proposition quantified = is_forall ? Proposition::forall(node.var, *node.qbody)
                                       : Proposition::exists(node.var, *node.qbody);
    std::string cond = is_forall ? "B ->* forall x. A" : "B ->* exists x. A";
    std::optional<Proposition> principal;
    switch (node.tag) {
      case RuleTag::ForallLeft: {
        Substitution inst{{node.var, *node.term}};
        auto base = pr.gamma.minus(substitute(*node.qbody, inst));
        principal = base ? c.gamma.diff_one(*base) : std::nullopt;
        if (!principal || pr.delta != c.delta) {
          fail(path, node.tag, "schema", "premise does not match the forall-left schema");
          return;
        }
        break;
      }
      case RuleTag::ExistsRight: {
        Substitution inst{{node.var, *node.term}};
        auto base = pr.delta.minus(substitute(*node.qbody, inst));
        principal = base ? c.delta.diff_one(*base) : std::nullopt;
        if (!principal || pr.gamma != c.gamma) {
          fail(path, node.tag, "schema", "premise does not match the exists-right schema");
          return;
        }
        break;
      }
      case RuleTag::ForallRight: {
        auto base = pr.delta.minus(*node.qbody);
        principal = base ? c.delta.diff_one(*base) : std::nullopt;
        if (!principal || pr.gamma != c.gamma) {
          fail(path, node.tag, "schema", "premise does not match the forall-right schema");
          return;
        }
        break;
      }
      default: {  // ExistsLeft
        auto base = pr.gamma.minus(*node.qbody);
        principal = base ? c.gamma.diff_one(*base) : std::nullopt;
        if (!principal || pr.delta != c.delta) {
          fail(path, node.tag, "schema", "premise does not match the exists-left schema");
          return;
        }
        break;
      }
    }
    if (node.tag == RuleTag::ForallRight || node.tag == RuleTag::ExistsLeft) {
      // Eigenvariable freshness against the conclusion's context (B excluded).
      bool is_right = node.tag == RuleTag::ForallRight;
      PropMultiset ctx = is_right ? *c.delta.minus(*principal) : *c.gamma.minus(*principal);
      std::set<std::string> fv = free_vars(is_right ? c.gamma : c.delta);
      std::set<std::string> fv2 = free_vars(ctx);
      fv.insert(fv2.begin(), fv2.end());
      if (fv.count(node.var)) {
        fail(path, node.tag, "x not in FV(Gamma Delta)",
             "eigenvariable occurs free in the conclusion's context");
        return;
      }
    }
    Reach r = require_reaches(node, path, cond, *principal, quantified);
    if (r != Reach::Yes)
      fail(path, node.tag, cond, "principal proposition does not reduce to the quantified shape",
           r == Reach::Unknown);
  }
};

}  // namespace

CheckReport check_proof(const RewriteSystem& R, const ProofNode& proof, const Budget& budget) {
  Checker checker{R, budget, {}};
  checker.check_node(proof, "");
  checker.report.valid = checker.report.failures.empty();
  return checker.report;
}

}  // namespace admo
