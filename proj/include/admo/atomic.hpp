#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "admo/rewriting.hpp"
#include "admo/sequent.hpp"

namespace admo {

/// Proof in the atomic fragment of symmetric deduction modulo: only axiom,
/// cut and the structural rules, with convertibility side conditions.
enum class SymRuleTag { Axiom, Cut, ContrLeft, ContrRight, WeakLeft, WeakRight };

const char* sym_rule_tag_name(SymRuleTag tag);
std::optional<SymRuleTag> sym_rule_tag_from_name(const std::string& name);

struct SymProofNode {
  SymRuleTag tag = SymRuleTag::Axiom;
  std::vector<Proposition> props;  // Axiom: {A, B} with A = B mod R; Cut: {C1, C2}
  Sequent conclusion;
  std::vector<SymProofNode> premises;
};

bool sym_proof_equal(const SymProofNode& a, const SymProofNode& b);
bool sym_is_cut_free(const SymProofNode& p);
size_t sym_cut_count(const SymProofNode& p);

CheckReport check_sym_proof(const RewriteSystem& R, const SymProofNode& proof,
                            const Budget& budget);

/// Equivalence-class certificate: each sequent member with its complete
/// closure under the symmetric one-step relation.
struct ClosureCertificate {
  std::vector<std::pair<Proposition, std::vector<Proposition>>> classes;
};

template <typename ProofT>
struct AtomicAnswer {
  enum class Kind { Provable, NotProvable, Unknown };

  Kind kind = Kind::Unknown;
  std::optional<ProofT> proof;
  std::optional<ConversionSequence<Proposition>> conversion;
  std::optional<ClosureCertificate> certificate;
  std::string note;

  bool provable() const { return kind == Kind::Provable; }
};

using SymAnswer = AtomicAnswer<SymProofNode>;
using AsymAnswer = AtomicAnswer<ProofNode>;

/// Decides an atomic sequent in symmetric deduction modulo: provable iff some
/// pair across the turnstile is convertible. Throws std::invalid_argument on
/// non-atomic input.
SymAnswer provable_atomic_sym(const RewriteSystem& R, const Sequent& s, const Budget& budget);

struct SymReduction {
  SymProofNode proof;
  size_t steps = 0;
};

/// Cut elimination for the symmetric atomic fragment: replaces the topmost
/// cut with cut-free premises by a single axiom until none remain. Terminates
/// in exactly the initial number of cuts.
SymReduction reduce_symmetric_atomic(const RewriteSystem& R, const SymProofNode& proof,
                                     const Budget& budget);

/// Decides an atomic sequent in asymmetric deduction modulo; a positive answer
/// carries a proof built by proof_from_conversion.
AsymAnswer provable_atomic_asym(const RewriteSystem& R, const Sequent& s, const Budget& budget);

/// Builds an asymmetric proof of `s` from a conversion sequence between A in
/// Gamma and B in Delta, by induction on its peaks: one cut per peak, always
/// splitting at the leftmost one. Throws std::invalid_argument when the
/// sequence does not validate.
ProofNode proof_from_conversion(const RewriteSystem& R, const Sequent& s, const Proposition& a,
                                const Proposition& b, const ConversionSequence<Proposition>& c);

/// Cut-free provability: some pair across the turnstile has a common reduct.
AsymAnswer cut_free_provable_atomic(const RewriteSystem& R, const Sequent& s,
                                    const Budget& budget);

/// Machine check of the main equivalence on a finite carrier: the cut rule is
/// redundant for atomic sequents over the carrier iff the system is confluent
/// on it. The carrier is first closed under convertibility so both sides
/// quantify over the same objects.
struct EquivalenceReport {
  AnalysisVerdict::Kind cut_redundant = AnalysisVerdict::Kind::Unknown;
  AnalysisVerdict::Kind confluence = AnalysisVerdict::Kind::Unknown;
  bool definite = false;
  bool agree = false;
  std::vector<Term> carrier;
  std::optional<std::pair<Term, Term>> witness;  // convertible but not joinable
  std::string note;
};

EquivalenceReport cut_redundancy_vs_confluence(const RewriteSystem& R,
                                               const std::vector<Term>& universe,
                                               const Budget& budget);

}  // namespace admo
