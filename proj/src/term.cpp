#include "admo/term.hpp"

#include <algorithm>

namespace admo {

void Signature::declare_function(const std::string& name, int arity) {
  if (arity < 0) throw std::invalid_argument("negative arity for " + name);
  auto it = functions.find(name);
  if (it != functions.end()) {
    if (it->second != arity)
      throw std::invalid_argument("conflicting arity for function " + name);
    return;
  }
  if (predicates.count(name))
    throw std::invalid_argument("symbol declared as both function and predicate: " + name);
  functions.emplace(name, arity);
}

void Signature::declare_predicate(const std::string& name, int arity) {
  if (arity < 0) throw std::invalid_argument("negative arity for " + name);
  auto it = predicates.find(name);
  if (it != predicates.end()) {
    if (it->second != arity)
      throw std::invalid_argument("conflicting arity for predicate " + name);
    return;
  }
  if (functions.count(name))
    throw std::invalid_argument("symbol declared as both function and predicate: " + name);
  predicates.emplace(name, arity);
}

std::optional<int> Signature::function_arity(const std::string& name) const {
  auto it = functions.find(name);
  if (it == functions.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Signature::predicate_arity(const std::string& name) const {
  auto it = predicates.find(name);
  if (it == predicates.end()) return std::nullopt;
  return it->second;
}

Term Term::var(std::string n) {
  Term t;
  t.kind = Kind::Var;
  t.name = std::move(n);
  if (t.name.empty()) throw std::invalid_argument("empty variable name");
  return t;
}

Term Term::bound(int i) {
  Term t;
  t.kind = Kind::Bound;
  t.index = i;
  return t;
}

Term Term::app(std::string f, std::vector<Term> a) {
  Term t;
  t.kind = Kind::App;
  t.name = std::move(f);
  t.args = std::move(a);
  return t;
}

int compare(const Term& a, const Term& b) {
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  switch (a.kind) {
    case Term::Kind::Var:
      return a.name.compare(b.name) < 0 ? -1 : (a.name == b.name ? 0 : 1);
    case Term::Kind::Bound:
      return a.index < b.index ? -1 : (a.index == b.index ? 0 : 1);
    case Term::Kind::App: {
      if (int c = a.name.compare(b.name); c != 0) return c < 0 ? -1 : 1;
      if (a.args.size() != b.args.size()) return a.args.size() < b.args.size() ? -1 : 1;
      for (size_t i = 0; i < a.args.size(); ++i)
        if (int c = compare(a.args[i], b.args[i]); c != 0) return c;
      return 0;
    }
  }
  return 0;
}

bool operator==(const Term& a, const Term& b) { return compare(a, b) == 0; }
bool operator!=(const Term& a, const Term& b) { return compare(a, b) != 0; }
bool operator<(const Term& a, const Term& b) { return compare(a, b) < 0; }

Proposition Proposition::atom(std::string p, std::vector<Term> a) {
  Proposition r;
  r.kind = Kind::Atom;
  r.name = std::move(p);
  r.args = std::move(a);
  return r;
}

Proposition Proposition::bottom() {
  Proposition r;
  r.kind = Kind::Bottom;
  return r;
}

static Proposition binary(Proposition::Kind k, Proposition l, Proposition r) {
  Proposition p;
  p.kind = k;
  p.kids.push_back(std::move(l));
  p.kids.push_back(std::move(r));
  return p;
}

Proposition Proposition::implies(Proposition l, Proposition r) {
  return binary(Kind::Implies, std::move(l), std::move(r));
}
Proposition Proposition::and_(Proposition l, Proposition r) {
  return binary(Kind::And, std::move(l), std::move(r));
}
Proposition Proposition::or_(Proposition l, Proposition r) {
  return binary(Kind::Or, std::move(l), std::move(r));
}

static Term abstract_term(const Term& t, const std::string& x, int depth) {
  switch (t.kind) {
    case Term::Kind::Var:
      if (t.name == x) return Term::bound(depth);
      return t;
    case Term::Kind::Bound:
      return t;
    case Term::Kind::App: {
      Term r = t;
      for (auto& a : r.args) a = abstract_term(a, x, depth);
      return r;
    }
  }
  return t;
}

static Proposition abstract_prop(const Proposition& p, const std::string& x, int depth) {
  Proposition r = p;
  switch (p.kind) {
    case Proposition::Kind::Atom:
      for (auto& a : r.args) a = abstract_term(a, x, depth);
      return r;
    case Proposition::Kind::Bottom:
      return r;
    case Proposition::Kind::Implies:
    case Proposition::Kind::And:
    case Proposition::Kind::Or:
      for (auto& k : r.kids) k = abstract_prop(k, x, depth);
      return r;
    case Proposition::Kind::Forall:
    case Proposition::Kind::Exists:
      r.kids[0] = abstract_prop(p.kids[0], x, depth + 1);
      return r;
  }
  return r;
}

static Proposition quantifier(Proposition::Kind k, const std::string& x, Proposition body) {
  Proposition p;
  p.kind = k;
  p.name = x;
  p.kids.push_back(abstract_prop(body, x, 0));
  return p;
}

Proposition Proposition::forall(const std::string& x, Proposition body) {
  return quantifier(Kind::Forall, x, std::move(body));
}
Proposition Proposition::exists(const std::string& x, Proposition body) {
  return quantifier(Kind::Exists, x, std::move(body));
}

int compare(const Proposition& a, const Proposition& b) {
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  switch (a.kind) {
    case Proposition::Kind::Atom: {
      if (int c = a.name.compare(b.name); c != 0) return c < 0 ? -1 : 1;
      if (a.args.size() != b.args.size()) return a.args.size() < b.args.size() ? -1 : 1;
      for (size_t i = 0; i < a.args.size(); ++i)
        if (int c = compare(a.args[i], b.args[i]); c != 0) return c;
      return 0;
    }
    case Proposition::Kind::Bottom:
      return 0;
    default:
      // Name hints on binders are ignored: equality is alpha-equivalence.
      for (size_t i = 0; i < a.kids.size(); ++i)
        if (int c = compare(a.kids[i], b.kids[i]); c != 0) return c;
      return 0;
  }
}

bool operator==(const Proposition& a, const Proposition& b) { return compare(a, b) == 0; }
bool operator!=(const Proposition& a, const Proposition& b) { return compare(a, b) != 0; }
bool operator<(const Proposition& a, const Proposition& b) { return compare(a, b) < 0; }

bool alpha_equal(const Proposition& a, const Proposition& b) { return compare(a, b) == 0; }

Substitution::Substitution(std::initializer_list<std::pair<const std::string, Term>> init) {
  for (const auto& [x, t] : init) bind(x, t);
}

void Substitution::bind(const std::string& x, Term t) {
  if (t.kind == Term::Kind::Var && t.name == x) return;  // drop identity bindings
  map.insert_or_assign(x, std::move(t));
}

const Term* Substitution::lookup(const std::string& x) const {
  auto it = map.find(x);
  return it == map.end() ? nullptr : &it->second;
}

bool operator==(const Substitution& a, const Substitution& b) { return a.map == b.map; }

Term substitute(const Term& t, const Substitution& s) {
  switch (t.kind) {
    case Term::Kind::Var:
      if (const Term* r = s.lookup(t.name)) return *r;
      return t;
    case Term::Kind::Bound:
      return t;
    case Term::Kind::App: {
      Term r = t;
      for (auto& a : r.args) a = substitute(a, s);
      return r;
    }
  }
  return t;
}

Proposition substitute(const Proposition& p, const Substitution& s) {
  Proposition r = p;
  switch (p.kind) {
    case Proposition::Kind::Atom:
      for (auto& a : r.args) a = substitute(a, s);
      return r;
    case Proposition::Kind::Bottom:
      return r;
    default:
      // Bound variables are indices, so replacement terms are never captured.
      for (auto& k : r.kids) k = substitute(k, s);
      return r;
  }
}

void collect_free_vars(const Term& t, std::set<std::string>& out) {
  switch (t.kind) {
    case Term::Kind::Var:
      out.insert(t.name);
      break;
    case Term::Kind::Bound:
      break;
    case Term::Kind::App:
      for (const auto& a : t.args) collect_free_vars(a, out);
      break;
  }
}

void collect_free_vars(const Proposition& p, std::set<std::string>& out) {
  if (p.kind == Proposition::Kind::Atom)
    for (const auto& a : p.args) collect_free_vars(a, out);
  else
    for (const auto& k : p.kids) collect_free_vars(k, out);
}

std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> out;
  collect_free_vars(t, out);
  return out;
}

std::set<std::string> free_vars(const Proposition& p) {
  std::set<std::string> out;
  collect_free_vars(p, out);
  return out;
}

static Term instantiate_term(const Term& t, const Term& repl, int depth) {
  switch (t.kind) {
    case Term::Kind::Var:
      return t;
    case Term::Kind::Bound:
      return t.index == depth ? repl : t;
    case Term::Kind::App: {
      Term r = t;
      for (auto& a : r.args) a = instantiate_term(a, repl, depth);
      return r;
    }
  }
  return t;
}

static Proposition instantiate_prop(const Proposition& p, const Term& repl, int depth) {
  Proposition r = p;
  switch (p.kind) {
    case Proposition::Kind::Atom:
      for (auto& a : r.args) a = instantiate_term(a, repl, depth);
      return r;
    case Proposition::Kind::Bottom:
      return r;
    case Proposition::Kind::Forall:
    case Proposition::Kind::Exists:
      r.kids[0] = instantiate_prop(p.kids[0], repl, depth + 1);
      return r;
    default:
      for (auto& k : r.kids) k = instantiate_prop(k, repl, depth);
      return r;
  }
}

Proposition instantiate(const Proposition& body, const Term& t) {
  return instantiate_prop(body, t, 0);
}

std::string fresh_name(const std::string& hint, const std::set<std::string>& taken) {
  std::string base = hint.empty() ? "x" : hint;
  std::string cand = base;
  while (taken.count(cand)) cand += '\'';
  return cand;
}

bool match_into(const Term& pattern, const Term& subject, Substitution& s) {
  switch (pattern.kind) {
    case Term::Kind::Var: {
      if (const Term* bound = s.lookup(pattern.name)) return *bound == subject;
      if (subject.kind == Term::Kind::Var && subject.name == pattern.name) return true;
      s.bind(pattern.name, subject);
      return true;
    }
    case Term::Kind::Bound:
      return subject.kind == Term::Kind::Bound && subject.index == pattern.index;
    case Term::Kind::App: {
      if (subject.kind != Term::Kind::App || subject.name != pattern.name ||
          subject.args.size() != pattern.args.size())
        return false;
      for (size_t i = 0; i < pattern.args.size(); ++i)
        if (!match_into(pattern.args[i], subject.args[i], s)) return false;
      return true;
    }
  }
  return false;
}

std::optional<Substitution> match_pattern(const Term& pattern, const Term& subject) {
  Substitution s;
  if (match_into(pattern, subject, s)) return s;
  return std::nullopt;
}

static bool occurs(const std::string& x, const Term& t, const Substitution& s) {
  switch (t.kind) {
    case Term::Kind::Var: {
      if (t.name == x) return true;
      if (const Term* b = s.lookup(t.name)) return occurs(x, *b, s);
      return false;
    }
    case Term::Kind::Bound:
      return false;
    case Term::Kind::App:
      for (const auto& a : t.args)
        if (occurs(x, a, s)) return true;
      return false;
  }
  return false;
}

static Term walk(Term t, const Substitution& s) {
  while (t.kind == Term::Kind::Var) {
    const Term* b = s.lookup(t.name);
    if (!b) break;
    t = *b;
  }
  return t;
}

static bool unify_into(const Term& t, const Term& u, Substitution& s) {
  Term a = walk(t, s);
  Term b = walk(u, s);
  if (a.kind == Term::Kind::Var) {
    if (b.kind == Term::Kind::Var && b.name == a.name) return true;
    if (occurs(a.name, b, s)) return false;
    s.bind(a.name, b);
    return true;
  }
  if (b.kind == Term::Kind::Var) return unify_into(b, a, s);
  if (a.kind == Term::Kind::Bound || b.kind == Term::Kind::Bound)
    return a.kind == b.kind && a.index == b.index;
  if (a.name != b.name || a.args.size() != b.args.size()) return false;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (!unify_into(a.args[i], b.args[i], s)) return false;
  return true;
}

static Term resolve(const Term& t, const Substitution& s) {
  Term a = walk(t, s);
  if (a.kind == Term::Kind::App)
    for (auto& arg : a.args) arg = resolve(arg, s);
  return a;
}

std::optional<Substitution> unify(const Term& t, const Term& u) {
  Substitution s;
  if (!unify_into(t, u, s)) return std::nullopt;
  // Resolve chains so the result is an idempotent substitution.
  Substitution out;
  for (const auto& [x, bound] : s.map) out.bind(x, resolve(bound, s));
  return out;
}

Position Position::child(int i) const {
  Position p = *this;
  p.path.push_back(i);
  return p;
}

const Term* subterm_at(const Term& t, const Position& p) {
  const Term* cur = &t;
  for (int i : p.path) {
    if (cur->kind != Term::Kind::App || i < 0 || i >= static_cast<int>(cur->args.size()))
      return nullptr;
    cur = &cur->args[i];
  }
  return cur;
}

const Term* subterm_at(const Proposition& p, const Position& pos) {
  const Proposition* cur = &p;
  size_t k = 0;
  while (k < pos.path.size()) {
    int i = pos.path[k];
    if (cur->kind == Proposition::Kind::Atom) {
      if (i < 0 || i >= static_cast<int>(cur->args.size())) return nullptr;
      Position rest(std::vector<int>(pos.path.begin() + k + 1, pos.path.end()));
      return subterm_at(cur->args[i], rest);
    }
    if (i < 0 || i >= static_cast<int>(cur->kids.size())) return nullptr;
    cur = &cur->kids[i];
    ++k;
  }
  return nullptr;  // the path addresses a proposition node, not a term
}

std::optional<Term> replace_at(const Term& t, const Position& p, const Term& replacement) {
  if (p.path.empty()) return replacement;
  if (t.kind != Term::Kind::App) return std::nullopt;
  int i = p.path.front();
  if (i < 0 || i >= static_cast<int>(t.args.size())) return std::nullopt;
  Position rest(std::vector<int>(p.path.begin() + 1, p.path.end()));
  auto sub = replace_at(t.args[i], rest, replacement);
  if (!sub) return std::nullopt;
  Term r = t;
  r.args[i] = std::move(*sub);
  return r;
}

std::optional<Proposition> replace_at(const Proposition& p, const Position& pos,
                                      const Term& replacement) {
  if (pos.path.empty()) return std::nullopt;
  int i = pos.path.front();
  Position rest(std::vector<int>(pos.path.begin() + 1, pos.path.end()));
  if (p.kind == Proposition::Kind::Atom) {
    if (i < 0 || i >= static_cast<int>(p.args.size())) return std::nullopt;
    auto sub = replace_at(p.args[i], rest, replacement);
    if (!sub) return std::nullopt;
    Proposition r = p;
    r.args[i] = std::move(*sub);
    return r;
  }
  if (i < 0 || i >= static_cast<int>(p.kids.size())) return std::nullopt;
  auto sub = replace_at(p.kids[i], rest, replacement);
  if (!sub) return std::nullopt;
  Proposition r = p;
  r.kids[i] = std::move(*sub);
  return r;
}

static void term_positions_into(const Term& t, Position here, std::vector<Position>& out) {
  out.push_back(here);
  if (t.kind == Term::Kind::App)
    for (size_t i = 0; i < t.args.size(); ++i)
      term_positions_into(t.args[i], here.child(static_cast<int>(i)), out);
}

std::vector<Position> term_positions(const Term& t) {
  std::vector<Position> out;
  term_positions_into(t, Position{}, out);
  return out;
}

static void prop_term_positions_into(const Proposition& p, Position here,
                                     std::vector<Position>& out) {
  if (p.kind == Proposition::Kind::Atom) {
    for (size_t i = 0; i < p.args.size(); ++i) {
      std::vector<Position> sub = term_positions(p.args[i]);
      for (auto& s : sub) {
        Position full = here.child(static_cast<int>(i));
        full.path.insert(full.path.end(), s.path.begin(), s.path.end());
        out.push_back(std::move(full));
      }
    }
    return;
  }
  for (size_t i = 0; i < p.kids.size(); ++i)
    prop_term_positions_into(p.kids[i], here.child(static_cast<int>(i)), out);
}

std::vector<Position> term_positions(const Proposition& p) {
  std::vector<Position> out;
  prop_term_positions_into(p, Position{}, out);
  return out;
}

static bool well_formed_term(const Term& t, const Signature& sig, int depth) {
  switch (t.kind) {
    case Term::Kind::Var:
      return !t.name.empty();
    case Term::Kind::Bound:
      return t.index >= 0 && t.index < depth;
    case Term::Kind::App: {
      auto a = sig.function_arity(t.name);
      if (!a || *a != static_cast<int>(t.args.size())) return false;
      for (const auto& arg : t.args)
        if (!well_formed_term(arg, sig, depth)) return false;
      return true;
    }
  }
  return false;
}

bool well_formed(const Term& t, const Signature& sig) { return well_formed_term(t, sig, 0); }

static bool well_formed_prop(const Proposition& p, const Signature& sig, int depth) {
  switch (p.kind) {
    case Proposition::Kind::Atom: {
      auto a = sig.predicate_arity(p.name);
      if (!a || *a != static_cast<int>(p.args.size())) return false;
      for (const auto& arg : p.args)
        if (!well_formed_term(arg, sig, depth)) return false;
      return true;
    }
    case Proposition::Kind::Bottom:
      return true;
    case Proposition::Kind::Forall:
    case Proposition::Kind::Exists:
      return p.kids.size() == 1 && well_formed_prop(p.kids[0], sig, depth + 1);
    default:
      if (p.kids.size() != 2) return false;
      return well_formed_prop(p.kids[0], sig, depth) && well_formed_prop(p.kids[1], sig, depth);
  }
}

bool well_formed(const Proposition& p, const Signature& sig) {
  return well_formed_prop(p, sig, 0);
}

ParseError::ParseError(const std::string& msg, int l, int c)
    : std::runtime_error("line " + std::to_string(l) + ", column " + std::to_string(c) + ": " +
                         msg),
      line(l),
      column(c) {}

}  // namespace admo
