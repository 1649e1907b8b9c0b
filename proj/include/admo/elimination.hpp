#pragma once

#include <optional>
#include <string>
#include <vector>

#include "admo/rewriting.hpp"
#include "admo/sequent.hpp"

namespace admo {

/// One scripted choice for the splitting case: which one-step reducts of the
/// cut proposition to use for the two new cuts, and optionally the joiner.
struct ScriptChoice {
  std::optional<Proposition> left;    // C'1
  std::optional<Proposition> right;   // C'2
  std::optional<Proposition> joiner;  // C'
};

/// Strategy for the choices the reduction leaves open. The default follows
/// rule order and the case priority of the definition; scripted policies can
/// force the splitting case even when an axiom case applies, which is what
/// reproduces the looping runs.
struct StepPolicy {
  enum class Mode { RuleOrder, Scripted };

  Mode mode = Mode::RuleOrder;
  bool force_split = false;
  bool cycle = false;  // reuse the script from the start when exhausted
  std::vector<ScriptChoice> choices;

  static StepPolicy rule_order() { return {}; }
};

struct PolicyState {
  const StepPolicy* policy;
  size_t index = 0;

  ScriptChoice take();
  bool force_split() const;
};

struct StepOutcome {
  enum class Kind { ReducedToAxiom, ShortCircuit, SplitIntoTwoCuts, Stuck, NotApplicable };

  Kind kind = Kind::NotApplicable;
  std::optional<ProofNode> proof;  // replacement proof, absent for Stuck
  // SplitIntoTwoCuts:
  std::optional<Proposition> c1p, c2p, joiner;
  // ShortCircuit: true when B = C (axiom on D), false when C = D (axiom on B)
  bool b_equals_c = false;
  // Stuck divergence C'1 <-1 C ->1 C'2:
  std::optional<Proposition> div_left, div_center, div_right;
  bool budget_limited = false;  // joiner search truncated, not a definite failure
  std::string note;
};

struct TraceEntry {
  Proposition cut_prop;                 // the cut this step eliminated
  std::string kind;                     // axiom | short-circuit | split | key-case-* | stuck
  std::vector<Proposition> introduced;  // cut propositions created by the step
  std::vector<Proposition> cuts_after;  // snapshot of the whole proof's cuts
};

struct ReductionTrace {
  std::vector<Proposition> initial_cuts;
  std::vector<TraceEntry> entries;
};

struct EliminationResult {
  enum class Kind { CutFree, Failed, BudgetExhausted };

  Kind kind = Kind::BudgetExhausted;
  ProofNode proof;  // final proof: cut-free on success, last state otherwise
  ReductionTrace trace;
  std::optional<StepOutcome> stuck;
  size_t steps = 0;
};

/// One reduction of a proof whose root is a cut with cut-free premises, per
/// the Newman-style case analysis: (i) the contexts already share a common
/// reduct; (ii) one side short-circuits; (iii) split into two cuts on
/// one-step reducts of the cut proposition; (iv) stuck on the divergence.
/// Returns NotApplicable when the premise end-sequents do not expose the
/// joinable pairs the atomic fragment guarantees.
StepOutcome newman_step(const RewriteSystem& R, const ProofNode& p, PolicyState& policy,
                        const Budget& budget);

/// Repeated newman_step on the highest cut with cut-free premises.
/// Throws std::invalid_argument unless the proof is atomic.
EliminationResult eliminate_cuts_atomic_asym(const RewriteSystem& R, const ProofNode& p,
                                             const StepPolicy& policy, size_t step_budget,
                                             const Budget& budget);

/// Rewrites every axiom on a non-atomic proposition into logical rules over
/// its subformulas, so the axiom rule is used on atomic propositions only.
ProofNode normalize_axioms(const RewriteSystem& R, const ProofNode& p, const Budget& budget);

/// Full cut elimination: the Newman stepper for atomic cuts, the structural
/// reconstruction with subformula key cases for non-atomic ones.
EliminationResult eliminate_cuts_full(const RewriteSystem& R, const ProofNode& p,
                                      const StepPolicy& policy, size_t step_budget,
                                      const Budget& budget);

struct MeasureReport {
  enum class Status { Decreasing, Violation, NotTerminating, Truncated };

  Status status = Status::Decreasing;
  std::string detail;
  size_t checked_steps = 0;

  bool ok() const { return status == Status::Decreasing; }
};

/// Verifies a trace against the reduction ordering on the carrier: split
/// steps replace the cut proposition by one-step reducts, and the cut
/// multiset strictly decreases in the multiset extension at every step.
MeasureReport instrument_measure(const RewriteSystem& R, const ReductionTrace& trace,
                                 const std::vector<Proposition>& carrier, const Budget& budget);

}  // namespace admo
