#pragma once

#include <optional>
#include <string>

#include "admo/atomic.hpp"
#include "admo/rewriting.hpp"
#include "admo/sequent.hpp"
#include "admo/term.hpp"

namespace admo {

enum class ProofKind { Asym, Sym };

/// Parsed problem file: signature and rules, plus an optional goal sequent and
/// an optional proof. parse -> render -> parse is the identity on values;
/// render output is canonical and stable under reparsing.
struct ProblemFile {
  RewriteSystem system;
  std::optional<Sequent> sequent;
  ProofKind proof_kind = ProofKind::Asym;
  std::optional<ProofNode> proof;
  std::optional<SymProofNode> sym_proof;
};

ProblemFile parse_problem(const std::string& text);

/// Standalone parsers used by tests and tools. Undeclared function symbols are
/// added to the signature with their observed arity; undeclared bare names
/// u..z (with digits or primes) are variables.
Term parse_term(const std::string& text, Signature& sig);
Proposition parse_proposition(const std::string& text, Signature& sig);
Sequent parse_sequent(const std::string& text, Signature& sig);

std::string render(const Term& t, const Signature& sig);
std::string render(const Proposition& p, const Signature& sig);
std::string render(const Sequent& s, const Signature& sig);
std::string render(const ProofNode& p, const Signature& sig);
std::string render(const SymProofNode& p, const Signature& sig);
std::string render(const ProblemFile& pf);

/// Indented one-line-per-inference view of a proof.
std::string render_derivation(const ProofNode& p, const Signature& sig);

std::string render_conversion(const ConversionSequence<Proposition>& seq,
                              const RewriteSystem& R);
std::string render_conversion(const ConversionSequence<Term>& seq, const RewriteSystem& R);

}  // namespace admo
