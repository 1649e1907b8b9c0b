#include "admo/atomic.hpp"

#include <algorithm>

namespace admo {

const char* sym_rule_tag_name(SymRuleTag tag) {
  switch (tag) {
    case SymRuleTag::Axiom: return "axiom";
    case SymRuleTag::Cut: return "cut";
    case SymRuleTag::ContrLeft: return "contr-left";
    case SymRuleTag::ContrRight: return "contr-right";
    case SymRuleTag::WeakLeft: return "weak-left";
    case SymRuleTag::WeakRight: return "weak-right";
  }
  return "?";
}

std::optional<SymRuleTag> sym_rule_tag_from_name(const std::string& name) {
  if (name == "axiom") return SymRuleTag::Axiom;
  if (name == "cut") return SymRuleTag::Cut;
  if (name == "contr-left") return SymRuleTag::ContrLeft;
  if (name == "contr-right") return SymRuleTag::ContrRight;
  if (name == "weak-left") return SymRuleTag::WeakLeft;
  if (name == "weak-right") return SymRuleTag::WeakRight;
  return std::nullopt;
}

bool sym_proof_equal(const SymProofNode& a, const SymProofNode& b) {
  if (a.tag != b.tag || a.props != b.props || a.conclusion != b.conclusion ||
      a.premises.size() != b.premises.size())
    return false;
  for (size_t i = 0; i < a.premises.size(); ++i)
    if (!sym_proof_equal(a.premises[i], b.premises[i])) return false;
  return true;
}

bool sym_is_cut_free(const SymProofNode& p) {
  if (p.tag == SymRuleTag::Cut) return false;
  for (const auto& pr : p.premises)
    if (!sym_is_cut_free(pr)) return false;
  return true;
}

size_t sym_cut_count(const SymProofNode& p) {
  size_t n = p.tag == SymRuleTag::Cut ? 1 : 0;
  for (const auto& pr : p.premises) n += sym_cut_count(pr);
  return n;
}

namespace {

struct SymChecker {
  const RewriteSystem& R;
  Budget budget;
  CheckReport report;

  void fail(const std::string& path, const std::string& condition,
            const std::string& explanation, bool budget_exhausted = false) {
    report.failures.push_back({path, RuleTag::Axiom, condition, explanation, budget_exhausted});
  }

  Reach convertible_check(const Proposition& a, const Proposition& b) {
    auto r = convertible(R, a, b, budget);
    if (r.seq) return Reach::Yes;
    return r.exact ? Reach::No : Reach::Unknown;
  }

  void check(const SymProofNode& node, const std::string& path) {
    const Sequent& c = node.conclusion;
    if (!sequent_atomic(c)) {
      fail(path, "schema", "all propositions must be atomic");
      return;
    }
    size_t want = node.tag == SymRuleTag::Axiom ? 0 : (node.tag == SymRuleTag::Cut ? 2 : 1);
    if (node.premises.size() != want) {
      fail(path, "schema", "wrong number of premises");
      return;
    }
    switch (node.tag) {
      case SymRuleTag::Axiom: {
        if (node.props.size() != 2) {
          fail(path, "schema", "axiom needs a pair {A; B}");
          break;
        }
        if (!c.gamma.contains(node.props[0]) || !c.delta.contains(node.props[1])) {
          fail(path, "schema", "annotated pair must occur across the turnstile");
          break;
        }
        Reach r = convertible_check(node.props[0], node.props[1]);
        if (r != Reach::Yes)
          fail(path, "A = B mod R", "annotated pair is not convertible", r == Reach::Unknown);
        break;
      }
      case SymRuleTag::Cut: {
        if (node.props.size() != 2) {
          fail(path, "schema", "cut needs a pair {C1; C2}");
          break;
        }
        const Sequent& p1 = node.premises[0].conclusion;
        const Sequent& p2 = node.premises[1].conclusion;
        auto c1 = p1.delta.diff_one(c.delta);
        auto c2 = p2.gamma.diff_one(c.gamma);
        if (p1.gamma != c.gamma || !c1 || *c1 != node.props[0] || p2.delta != c.delta || !c2 ||
            *c2 != node.props[1]) {
          fail(path, "schema", "premises do not match the cut schema");
          break;
        }
        Reach r = convertible_check(node.props[0], node.props[1]);
        if (r != Reach::Yes)
          fail(path, "C1 = C2 mod R", "cut pair is not convertible", r == Reach::Unknown);
        break;
      }
      case SymRuleTag::ContrLeft:
      case SymRuleTag::ContrRight: {
        bool left = node.tag == SymRuleTag::ContrLeft;
        const Sequent& pr = node.premises[0].conclusion;
        const PropMultiset& cside = left ? c.gamma : c.delta;
        const PropMultiset& pside = left ? pr.gamma : pr.delta;
        const PropMultiset& cother = left ? c.delta : c.gamma;
        const PropMultiset& pother = left ? pr.delta : pr.gamma;
        if (cother != pother) {
          fail(path, "schema", "contraction must keep the other side");
          break;
        }
        bool ok = false;
        bool unknown = false;
        for (const auto& a : cside.items()) {
          auto base = cside.minus(a);
          auto rest = pside.minus_all(*base);
          if (!rest || rest->size() != 2) continue;
          Reach r1 = convertible_check(a, rest->items()[0]);
          Reach r2 = convertible_check(a, rest->items()[1]);
          if (r1 == Reach::Yes && r2 == Reach::Yes) {
            ok = true;
            break;
          }
          if (r1 == Reach::Unknown || r2 == Reach::Unknown) unknown = true;
        }
        if (!ok)
          fail(path, "A = A1 = A2 mod R", "no valid contraction decomposition", unknown);
        break;
      }
      case SymRuleTag::WeakLeft: {
        const Sequent& pr = node.premises[0].conclusion;
        if (pr.delta != c.delta || !c.gamma.diff_one(pr.gamma))
          fail(path, "schema", "conclusion must add one proposition on the left");
        break;
      }
      case SymRuleTag::WeakRight: {
        const Sequent& pr = node.premises[0].conclusion;
        if (pr.gamma != c.gamma || !c.delta.diff_one(pr.delta))
          fail(path, "schema", "conclusion must add one proposition on the right");
        break;
      }
    }
    for (size_t i = 0; i < node.premises.size(); ++i)
      check(node.premises[i],
            path.empty() ? std::to_string(i) : path + "." + std::to_string(i));
  }
};

void require_atomic(const Sequent& s) {
  if (!sequent_atomic(s))
    throw std::invalid_argument("non-atomic-input: sequent contains a connective or quantifier");
}

// Complete symmetric closures of all sequent members; nullopt when truncated.
std::optional<ClosureCertificate> closure_certificate(const RewriteSystem& R, const Sequent& s,
                                                      const Budget& budget) {
  ClosureCertificate cert;
  for (const auto& side : {s.gamma.items(), s.delta.items()}) {
    for (const auto& p : side) {
      auto cl = symmetric_closure(R, p, budget);
      if (!cl.complete) return std::nullopt;
      cert.classes.emplace_back(p, cl.elements());
    }
  }
  return cert;
}

}  // namespace

CheckReport check_sym_proof(const RewriteSystem& R, const SymProofNode& proof,
                            const Budget& budget) {
  SymChecker checker{R, budget, {}};
  checker.check(proof, "");
  checker.report.valid = checker.report.failures.empty();
  return checker.report;
}

SymAnswer provable_atomic_sym(const RewriteSystem& R, const Sequent& s, const Budget& budget) {
  require_atomic(s);
  SymAnswer ans;
  bool unknown = false;
  for (const auto& a : s.gamma.items()) {
    for (const auto& b : s.delta.items()) {
      auto conv = convertible(R, a, b, budget);
      if (conv.seq) {
        ans.kind = SymAnswer::Kind::Provable;
        SymProofNode ax;
        ax.tag = SymRuleTag::Axiom;
        ax.props = {a, b};
        ax.conclusion = s;
        ans.proof = std::move(ax);
        ans.conversion = std::move(conv.seq);
        return ans;
      }
      if (!conv.exact) unknown = true;
    }
  }
  if (unknown) {
    ans.kind = SymAnswer::Kind::Unknown;
    ans.note = "conversion search truncated by budget";
    return ans;
  }
  auto cert = closure_certificate(R, s, budget);
  if (!cert) {
    ans.kind = SymAnswer::Kind::Unknown;
    ans.note = "closure truncated by budget";
    return ans;
  }
  ans.kind = SymAnswer::Kind::NotProvable;
  ans.certificate = std::move(cert);
  return ans;
}

namespace {

// Topmost-leftmost cut whose premise subproofs are cut free; replaces it by a
// single axiom on a convertible pair of its conclusion.
bool reduce_one_sym_cut(const RewriteSystem& R, SymProofNode& node, const Budget& budget) {
  for (auto& pr : node.premises)
    if (reduce_one_sym_cut(R, pr, budget)) return true;
  if (node.tag != SymRuleTag::Cut) return false;
  for (const auto& pr : node.premises)
    if (!sym_is_cut_free(pr)) return false;  // handled deeper on a later pass
  for (const auto& a : node.conclusion.gamma.items()) {
    for (const auto& b : node.conclusion.delta.items()) {
      auto conv = convertible(R, a, b, budget);
      if (!conv.seq) continue;
      SymProofNode ax;
      ax.tag = SymRuleTag::Axiom;
      ax.props = {a, b};
      ax.conclusion = node.conclusion;
      node = std::move(ax);
      return true;
    }
  }
  throw std::runtime_error(
      "symmetric reduction: no convertible pair found within budget; is the proof valid?");
}

}  // namespace

SymReduction reduce_symmetric_atomic(const RewriteSystem& R, const SymProofNode& proof,
                                     const Budget& budget) {
  SymReduction out;
  out.proof = proof;
  while (!sym_is_cut_free(out.proof)) {
    reduce_one_sym_cut(R, out.proof, budget);
    ++out.steps;
  }
  return out;
}

ProofNode proof_from_conversion(const RewriteSystem& R, const Sequent& s, const Proposition& a,
                                const Proposition& b,
                                const ConversionSequence<Proposition>& c) {
  if (!validate_sequence(R, c) || c.objects.front() != a || c.objects.back() != b ||
      !s.gamma.contains(a) || !s.delta.contains(b))
    throw std::invalid_argument("invalid-sequence: conversion does not fit the sequent");
  auto peaks = find_peaks(c);
  if (peaks.empty()) return make_axiom(s, valley_floor(c));
  size_t i = peaks.front();
  const Proposition& ci = c.objects[i];
  Sequent left_seq{s.gamma, s.delta.plus(ci)};
  Sequent right_seq{s.gamma.plus(ci), s.delta};
  ProofNode left = proof_from_conversion(R, left_seq, a, ci, subsequence(c, 0, i));
  ProofNode right = proof_from_conversion(R, right_seq, ci, b,
                                          subsequence(c, i, c.objects.size() - 1));
  return make_cut(ci, s, std::move(left), std::move(right));
}

AsymAnswer provable_atomic_asym(const RewriteSystem& R, const Sequent& s, const Budget& budget) {
  require_atomic(s);
  AsymAnswer ans;
  bool unknown = false;
  for (const auto& a : s.gamma.items()) {
    for (const auto& b : s.delta.items()) {
      auto conv = convertible(R, a, b, budget);
      if (conv.seq) {
        ans.kind = AsymAnswer::Kind::Provable;
        ans.proof = proof_from_conversion(R, s, a, b, *conv.seq);
        ans.conversion = std::move(conv.seq);
        return ans;
      }
      if (!conv.exact) unknown = true;
    }
  }
  if (unknown) {
    ans.kind = AsymAnswer::Kind::Unknown;
    ans.note = "conversion search truncated by budget";
    return ans;
  }
  auto cert = closure_certificate(R, s, budget);
  if (!cert) {
    ans.kind = AsymAnswer::Kind::Unknown;
    ans.note = "closure truncated by budget";
    return ans;
  }
  ans.kind = AsymAnswer::Kind::NotProvable;
  ans.certificate = std::move(cert);
  return ans;
}

AsymAnswer cut_free_provable_atomic(const RewriteSystem& R, const Sequent& s,
                                    const Budget& budget) {
  require_atomic(s);
  AsymAnswer ans;
  bool unknown = false;
  for (const auto& a : s.gamma.items()) {
    for (const auto& b : s.delta.items()) {
      auto join = joinable(R, a, b, budget);
      if (join.meet) {
        ans.kind = AsymAnswer::Kind::Provable;
        ans.proof = make_axiom(s, *join.meet);
        return ans;
      }
      if (!join.exact) unknown = true;
    }
  }
  if (unknown) {
    ans.kind = AsymAnswer::Kind::Unknown;
    ans.note = "joinability search truncated by budget";
    return ans;
  }
  ans.kind = AsymAnswer::Kind::NotProvable;
  ClosureCertificate cert;
  for (const auto& side : {s.gamma.items(), s.delta.items()})
    for (const auto& p : side) {
      auto rs = reducts(R, p, budget);
      cert.classes.emplace_back(p, rs.elements());
    }
  ans.certificate = std::move(cert);
  return ans;
}

EquivalenceReport cut_redundancy_vs_confluence(const RewriteSystem& R,
                                               const std::vector<Term>& universe,
                                               const Budget& budget) {
  EquivalenceReport rep;
  // Close the carrier under convertibility so peak elimination stays inside it.
  std::map<Term, SymClosure<Term>, Less<Term>> closures;
  std::vector<Term> carrier;
  for (const Term& t : universe) {
    if (closures.count(t)) continue;
    auto cl = symmetric_closure(R, t, budget);
    if (!cl.complete) {
      rep.note = "symmetric closure truncated by budget";
      return rep;
    }
    for (const auto& u : cl.elements()) {
      if (!closures.count(u)) carrier.push_back(u);
      closures.emplace(u, cl);
    }
  }
  std::sort(carrier.begin(), carrier.end(), Less<Term>{});
  carrier.erase(std::unique(carrier.begin(), carrier.end()), carrier.end());
  rep.carrier = carrier;

  rep.cut_redundant = AnalysisVerdict::Kind::Holds;
  for (const Term& t : carrier) {
    const auto& cl = closures.at(t);
    for (const Term& u : carrier) {
      if (!(compare(t, u) < 0) || !cl.contains(u)) continue;
      auto join = joinable(R, t, u, budget);
      if (join.meet) continue;
      if (!join.exact) {
        rep.note = "joinability search truncated by budget";
        return rep;
      }
      rep.cut_redundant = AnalysisVerdict::Kind::Fails;
      rep.witness = std::make_pair(t, u);
      break;
    }
    if (rep.cut_redundant == AnalysisVerdict::Kind::Fails) break;
  }

  AnalysisVerdict conf = confluent(R, carrier, budget);
  rep.confluence = conf.kind;
  if (conf.kind == AnalysisVerdict::Kind::Unknown) {
    rep.note = "confluence check truncated by budget";
    return rep;
  }
  if (!rep.witness && conf.nonjoinable)
    rep.witness = std::make_pair(conf.nonjoinable->left, conf.nonjoinable->right);
  rep.definite = true;
  rep.agree = (rep.cut_redundant == AnalysisVerdict::Kind::Holds) ==
              (rep.confluence == AnalysisVerdict::Kind::Holds);
  return rep;
}

}  // namespace admo
