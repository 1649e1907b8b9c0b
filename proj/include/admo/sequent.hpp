#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "admo/rewriting.hpp"
#include "admo/term.hpp"

namespace admo {

/// Multiset of propositions kept in canonical order; exchange is implicit.
class PropMultiset {
 public:
  PropMultiset() = default;
  explicit PropMultiset(std::vector<Proposition> props);

  void insert(Proposition p);
  bool erase_one(const Proposition& p);
  bool contains(const Proposition& p) const;
  size_t count(const Proposition& p) const;
  size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }

  PropMultiset plus(const Proposition& p) const;
  /// Removes one occurrence; nullopt when absent.
  std::optional<PropMultiset> minus(const Proposition& p) const;
  /// Removes one occurrence of every element of `other`; nullopt when short.
  std::optional<PropMultiset> minus_all(const PropMultiset& other) const;
  /// The single extra element of *this over `smaller`, if the difference is
  /// exactly one occurrence.
  std::optional<Proposition> diff_one(const PropMultiset& smaller) const;
  bool superset_of(const PropMultiset& other) const;

  const std::vector<Proposition>& items() const { return items_; }
  bool operator==(const PropMultiset& o) const { return items_ == o.items_; }
  bool operator!=(const PropMultiset& o) const { return items_ != o.items_; }

 private:
  std::vector<Proposition> items_;  // sorted
};

struct Sequent {
  PropMultiset gamma;
  PropMultiset delta;

  bool operator==(const Sequent& o) const { return gamma == o.gamma && delta == o.delta; }
  bool operator!=(const Sequent& o) const { return !(*this == o); }
};

bool sequent_atomic(const Sequent& s);
std::set<std::string> free_vars(const PropMultiset& m);

enum class RuleTag {
  Axiom,
  Cut,
  ContrLeft,
  ContrRight,
  WeakLeft,
  WeakRight,
  ImpLeft,
  ImpRight,
  AndLeft,
  AndRight,
  OrLeft,
  OrRight,
  BottomLeft,
  ForallLeft,
  ForallRight,
  ExistsLeft,
  ExistsRight,
};

const char* rule_tag_name(RuleTag tag);
std::optional<RuleTag> rule_tag_from_name(const std::string& name);
size_t rule_premise_count(RuleTag tag);

/// Explicit rewrite chain a proof file may embed for one ->* side condition.
using WitnessChain = std::vector<Proposition>;

/// Node of an asymmetric sequent calculus proof. Annotation fields by tag:
///   Axiom, Cut:             props = {A} / {C}
///   ContrLeft, ContrRight:  props = {A, A1, A2}
///   Imp/And/Or rules:       props = {A, B}
///   ForallLeft, ExistsRight: var, qbody, term
///   ForallRight, ExistsLeft: var, qbody
struct ProofNode {
  RuleTag tag = RuleTag::Axiom;
  std::vector<Proposition> props;
  std::string var;
  std::optional<Proposition> qbody;
  std::optional<Term> term;
  Sequent conclusion;
  std::vector<ProofNode> premises;
  std::vector<WitnessChain> witnesses;
};

bool proof_equal(const ProofNode& a, const ProofNode& b);
bool proof_atomic(const ProofNode& p);
size_t proof_size(const ProofNode& p);
std::set<std::string> proof_free_vars(const ProofNode& p);

struct CheckFailure {
  std::string path;
  RuleTag tag = RuleTag::Axiom;
  std::string condition;
  std::string explanation;
  bool budget_exhausted = false;
};

struct ConditionWitness {
  std::string condition;
  std::vector<Proposition> chain;  // endpoints included
};

struct CheckReport {
  bool valid = false;
  std::vector<CheckFailure> failures;
  std::map<std::string, std::vector<ConditionWitness>> witnesses;  // by tree path

  bool budget_only() const {
    if (failures.empty()) return false;
    for (const auto& f : failures)
      if (!f.budget_exhausted) return false;
    return true;
  }
};

/// Validates every inference of the proof: multiset bookkeeping, all ->* side
/// conditions (searched within the budget, or replayed exactly from embedded
/// witnesses), and eigenvariable freshness. Reports all failures.
CheckReport check_proof(const RewriteSystem& R, const ProofNode& proof, const Budget& budget);

bool is_cut_free(const ProofNode& proof);
std::vector<Proposition> cut_propositions(const ProofNode& proof);

enum class Side { Left, Right };

/// Height-preserving admissible weakening: adds `p` to one side of every
/// sequent, renaming eigenvariables that would clash with FV(p).
ProofNode weaken_proof(const ProofNode& proof, Side side, const Proposition& p);

/// Applies a substitution to every sequent and annotation, renaming
/// eigenvariables to avoid capture.
ProofNode substitute_proof(const ProofNode& proof, const Substitution& s);

// Constructors for the shapes the engines emit.
ProofNode make_axiom(Sequent concl, Proposition a);
ProofNode make_cut(Proposition c, Sequent concl, ProofNode left, ProofNode right);

}  // namespace admo
