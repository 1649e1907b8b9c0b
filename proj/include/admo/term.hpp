#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace admo {

/// First-order signature: function and predicate symbols with fixed arities.
struct Signature {
  std::map<std::string, int> functions;
  std::map<std::string, int> predicates;

  void declare_function(const std::string& name, int arity);
  void declare_predicate(const std::string& name, int arity);
  std::optional<int> function_arity(const std::string& name) const;
  std::optional<int> predicate_arity(const std::string& name) const;
};

/// First-order terms in locally nameless form: free variables carry names,
/// variables bound by an enclosing quantifier are de Bruijn indices.
struct Term {
  enum class Kind { Var, Bound, App };

  Kind kind = Kind::Var;
  std::string name;        // Var: variable name; App: function symbol
  int index = 0;           // Bound: de Bruijn index
  std::vector<Term> args;  // App

  static Term var(std::string n);
  static Term bound(int i);
  static Term app(std::string f, std::vector<Term> a = {});
};

int compare(const Term& a, const Term& b);
bool operator==(const Term& a, const Term& b);
bool operator!=(const Term& a, const Term& b);
bool operator<(const Term& a, const Term& b);

struct Proposition {
  enum class Kind { Atom, Bottom, Implies, And, Or, Forall, Exists };

  Kind kind = Kind::Bottom;
  std::string name;                 // Atom: predicate; Forall/Exists: name hint
  std::vector<Term> args;           // Atom
  std::vector<Proposition> kids;    // Implies/And/Or: 2, Forall/Exists: 1

  static Proposition atom(std::string p, std::vector<Term> a = {});
  static Proposition bottom();
  static Proposition implies(Proposition l, Proposition r);
  static Proposition and_(Proposition l, Proposition r);
  static Proposition or_(Proposition l, Proposition r);
  /// Binds free occurrences of `x` in `body`.
  static Proposition forall(const std::string& x, Proposition body);
  static Proposition exists(const std::string& x, Proposition body);

  bool is_atom() const { return kind == Kind::Atom; }
  bool is_quantifier() const { return kind == Kind::Forall || kind == Kind::Exists; }
};

/// Structural order ignoring binder name hints, so equality is alpha-equivalence.
int compare(const Proposition& a, const Proposition& b);
bool operator==(const Proposition& a, const Proposition& b);
bool operator!=(const Proposition& a, const Proposition& b);
bool operator<(const Proposition& a, const Proposition& b);

bool alpha_equal(const Proposition& a, const Proposition& b);

/// Finite map from variable names to terms. Identity bindings are dropped.
struct Substitution {
  std::map<std::string, Term> map;

  Substitution() = default;
  Substitution(std::initializer_list<std::pair<const std::string, Term>> init);
  void bind(const std::string& x, Term t);
  const Term* lookup(const std::string& x) const;
  bool empty() const { return map.empty(); }
};

bool operator==(const Substitution& a, const Substitution& b);

Term substitute(const Term& t, const Substitution& s);
Proposition substitute(const Proposition& p, const Substitution& s);

std::set<std::string> free_vars(const Term& t);
std::set<std::string> free_vars(const Proposition& p);
void collect_free_vars(const Term& t, std::set<std::string>& out);
void collect_free_vars(const Proposition& p, std::set<std::string>& out);

/// Replaces index-0 bound occurrences in a quantifier body with `t`.
Proposition instantiate(const Proposition& body, const Term& t);
/// A name based on `hint` that avoids everything in `taken`.
std::string fresh_name(const std::string& hint, const std::set<std::string>& taken);

/// Matching: substitution over the pattern's variables with s(pattern) == subject,
/// treating the subject's variables and bound indices as rigid constants.
std::optional<Substitution> match_pattern(const Term& pattern, const Term& subject);
bool match_into(const Term& pattern, const Term& subject, Substitution& s);

/// Most general unifier with occurs check. Callers rename apart first.
std::optional<Substitution> unify(const Term& t, const Term& u);

/// Path of child indices from the root; for propositions the path first walks
/// connective/quantifier children, then atom arguments, then subterms.
struct Position {
  std::vector<int> path;

  Position() = default;
  explicit Position(std::vector<int> p) : path(std::move(p)) {}
  Position child(int i) const;
  bool operator==(const Position& o) const { return path == o.path; }
  bool operator<(const Position& o) const { return path < o.path; }
};

const Term* subterm_at(const Term& t, const Position& p);
const Term* subterm_at(const Proposition& p, const Position& pos);
std::optional<Term> replace_at(const Term& t, const Position& p, const Term& replacement);
std::optional<Proposition> replace_at(const Proposition& p, const Position& pos,
                                      const Term& replacement);

/// All term-sorted positions of an object, leftmost-outermost.
std::vector<Position> term_positions(const Term& t);
std::vector<Position> term_positions(const Proposition& p);

bool well_formed(const Term& t, const Signature& sig);
bool well_formed(const Proposition& p, const Signature& sig);

struct ParseError : std::runtime_error {
  int line = 0;
  int column = 0;
  ParseError(const std::string& msg, int l, int c);
};

}  // namespace admo
