#include "admo/io.hpp"

#include <cctype>
#include <sstream>

namespace admo {

namespace {

// ---------------------------------------------------------------- lexer

enum class Tok {
  Ident,
  Number,
  LParen,
  RParen,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  Comma,
  Semi,
  Dot,
  Slash,
  Arrow,      // ->
  Turnstile,  // |-
  ImpOp,      // =>
  AndOp,      // /\ .
  OrOp,       // \/ .
  BottomTok,  // _|_
  Tilde,
  Eof,
};

struct Token {
  Tok kind = Tok::Eof;
  std::string text;
  long number = 0;
  int line = 1;
  int column = 1;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto push = [&](Tok k, std::string t, long n = 0) {
    out.push_back({k, std::move(t), n, line, col});
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++col;
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    int start_col = col;
    auto advance = [&](size_t n) {
      i += n;
      col += static_cast<int>(n);
    };
    auto push_at = [&](Tok k, std::string t, long n = 0) {
      out.push_back({k, std::move(t), n, line, start_col});
    };
    if (text.compare(i, 3, "_|_") == 0) {
      push_at(Tok::BottomTok, "_|_");
      advance(3);
      continue;
    }
    if (text.compare(i, 2, "->") == 0) {
      push_at(Tok::Arrow, "->");
      advance(2);
      continue;
    }
    if (text.compare(i, 2, "|-") == 0) {
      push_at(Tok::Turnstile, "|-");
      advance(2);
      continue;
    }
    if (text.compare(i, 2, "=>") == 0) {
      push_at(Tok::ImpOp, "=>");
      advance(2);
      continue;
    }
    if (text.compare(i, 2, "/\\") == 0) {
      push_at(Tok::AndOp, "/\\");
      advance(2);
      continue;
    }
    if (text.compare(i, 2, "\\/") == 0) {
      push_at(Tok::OrOp, "\\/");
      advance(2);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      std::string digits = text.substr(i, j - i);
      push_at(Tok::Number, digits, std::stol(digits));
      advance(j - i);
      continue;
    }
    if (ident_start(c)) {
      size_t j = i + 1;
      while (j < text.size() && ident_char(text[j])) ++j;
      push_at(Tok::Ident, text.substr(i, j - i));
      advance(j - i);
      continue;
    }
    switch (c) {
      case '(': push_at(Tok::LParen, "("); break;
      case ')': push_at(Tok::RParen, ")"); break;
      case '{': push_at(Tok::LBrace, "{"); break;
      case '}': push_at(Tok::RBrace, "}"); break;
      case '[': push_at(Tok::LBracket, "["); break;
      case ']': push_at(Tok::RBracket, "]"); break;
      case ',': push_at(Tok::Comma, ","); break;
      case ';': push_at(Tok::Semi, ";"); break;
      case '.': push_at(Tok::Dot, "."); break;
      case '/': push_at(Tok::Slash, "/"); break;
      case '~': push_at(Tok::Tilde, "~"); break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line, start_col);
    }
    advance(1);
    (void)push;
  }
  out.push_back({Tok::Eof, "", 0, line, col});
  return out;
}

bool is_keyword(const std::string& s) {
  return s == "sig" || s == "pred" || s == "rules" || s == "end" || s == "sequent" ||
         s == "proof" || s == "sym" || s == "witness" || s == "forall" || s == "exists";
}

bool variable_name(const std::string& s) {
  if (s.empty()) return false;
  char c = s[0];
  if (c < 'u' || c > 'z') return false;
  for (size_t i = 1; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i])) && s[i] != '\'') return false;
  return true;
}

// ---------------------------------------------------------------- parser

struct Parser {
  std::vector<Token> toks;
  size_t pos = 0;
  Signature* sig;

  const Token& peek(size_t k = 0) const { return toks[std::min(pos + k, toks.size() - 1)]; }
  const Token& next() { return toks[std::min(pos++, toks.size() - 1)]; }

  [[noreturn]] void error(const std::string& msg, const Token& at) const {
    throw ParseError(msg, at.line, at.column);
  }

  bool at_ident(const std::string& word) const {
    return peek().kind == Tok::Ident && peek().text == word;
  }

  Token expect(Tok kind, const std::string& what) {
    if (peek().kind != kind) error("expected " + what, peek());
    return next();
  }

  void expect_ident(const std::string& word) {
    if (!at_ident(word)) error("expected '" + word + "'", peek());
    next();
  }

  Term numeral(long n, const Token& at) {
    if (n < 0) error("negative numeral", at);
    if (!sig->function_arity("0")) sig->declare_function("0", 0);
    if (n > 0 && !sig->function_arity("S")) sig->declare_function("S", 1);
    if (sig->function_arity("0") != 0 || (n > 0 && sig->function_arity("S") != 1))
      error("numerals need 0/0 and S/1", at);
    Term t = Term::app("0");
    for (long k = 0; k < n; ++k) t = Term::app("S", {t});
    return t;
  }

  Term parse_term(const std::vector<std::string>& binders) {
    const Token& tok = peek();
    if (tok.kind == Tok::Number) {
      next();
      return numeral(tok.number, tok);
    }
    if (tok.kind != Tok::Ident) error("expected a term", tok);
    if (is_keyword(tok.text)) error("unexpected keyword '" + tok.text + "' in term", tok);
    std::string name = next().text;
    // Innermost binder wins.
    for (size_t k = 0; k < binders.size(); ++k) {
      if (binders[binders.size() - 1 - k] == name) {
        if (peek().kind == Tok::LParen) error("bound variable applied to arguments", tok);
        return Term::bound(static_cast<int>(k));
      }
    }
    if (peek().kind == Tok::LParen) {
      next();
      std::vector<Term> args;
      if (peek().kind != Tok::RParen) {
        args.push_back(parse_term(binders));
        while (peek().kind == Tok::Comma) {
          next();
          args.push_back(parse_term(binders));
        }
      }
      expect(Tok::RParen, "')'");
      if (sig->predicate_arity(name)) error(name + " is a predicate, not a function", tok);
      auto arity = sig->function_arity(name);
      if (!arity)
        sig->declare_function(name, static_cast<int>(args.size()));
      else if (*arity != static_cast<int>(args.size()))
        error("arity mismatch for " + name + ": declared " + std::to_string(*arity) + ", used " +
                  std::to_string(args.size()),
              tok);
      return Term::app(name, std::move(args));
    }
    if (auto arity = sig->function_arity(name)) {
      if (*arity != 0) error(name + "/" + std::to_string(*arity) + " used without arguments", tok);
      return Term::app(name);
    }
    if (sig->predicate_arity(name)) error(name + " is a predicate, not a term", tok);
    if (variable_name(name)) return Term::var(name);
    sig->declare_function(name, 0);
    return Term::app(name);
  }

  Proposition parse_atom_or_group(std::vector<std::string>& binders) {
    const Token& tok = peek();
    if (tok.kind == Tok::BottomTok) {
      next();
      return Proposition::bottom();
    }
    if (tok.kind == Tok::LParen) {
      next();
      Proposition p = parse_prop(binders);
      expect(Tok::RParen, "')'");
      return p;
    }
    if (tok.kind != Tok::Ident || is_keyword(tok.text))
      error("expected a proposition", tok);
    std::string name = next().text;
    std::vector<Term> args;
    if (peek().kind == Tok::LParen) {
      next();
      if (peek().kind != Tok::RParen) {
        args.push_back(parse_term(binders));
        while (peek().kind == Tok::Comma) {
          next();
          args.push_back(parse_term(binders));
        }
      }
      expect(Tok::RParen, "')'");
    }
    auto arity = sig->predicate_arity(name);
    if (!arity) {
      if (sig->function_arity(name)) error(name + " is a function, not a predicate", tok);
      error("unbound predicate symbol " + name, tok);
    }
    if (*arity != static_cast<int>(args.size()))
      error("arity mismatch for predicate " + name, tok);
    return Proposition::atom(name, std::move(args));
  }

  Proposition parse_unary(std::vector<std::string>& binders) {
    if (peek().kind == Tok::Tilde) {
      next();
      Proposition p = parse_unary(binders);
      return Proposition::implies(std::move(p), Proposition::bottom());
    }
    if (at_ident("forall") || at_ident("exists")) {
      bool is_forall = peek().text == "forall";
      next();
      Token var = expect(Tok::Ident, "a bound variable name");
      if (is_keyword(var.text)) error("keyword cannot be a bound variable", var);
      expect(Tok::Dot, "'.'");
      binders.push_back(var.text);
      Proposition body = parse_prop(binders);
      binders.pop_back();
      // The body was parsed with the binder in scope, so bound occurrences are
      // already indices; reuse the raw-quantifier layout.
      Proposition q;
      q.kind = is_forall ? Proposition::Kind::Forall : Proposition::Kind::Exists;
      q.name = var.text;
      q.kids.push_back(shift_binder(body));
      return q;
    }
    return parse_atom_or_group(binders);
  }

  // parse_term returns Bound(k) counted from the innermost binder, which is
  // exactly the de Bruijn index; nothing to adjust.
  static Proposition shift_binder(Proposition p) { return p; }

  Proposition parse_and(std::vector<std::string>& binders) {
    Proposition p = parse_unary(binders);
    while (peek().kind == Tok::AndOp) {
      next();
      p = Proposition::and_(std::move(p), parse_unary(binders));
    }
    return p;
  }

  Proposition parse_or(std::vector<std::string>& binders) {
    Proposition p = parse_and(binders);
    while (peek().kind == Tok::OrOp) {
      next();
      p = Proposition::or_(std::move(p), parse_and(binders));
    }
    return p;
  }

  Proposition parse_prop(std::vector<std::string>& binders) {
    Proposition p = parse_or(binders);
    if (peek().kind == Tok::ImpOp) {
      next();
      return Proposition::implies(std::move(p), parse_prop(binders));
    }
    return p;
  }

  Proposition parse_prop_closed() {
    std::vector<std::string> binders;
    return parse_prop(binders);
  }

  Sequent parse_sequent_body() {
    Sequent s;
    if (peek().kind != Tok::Turnstile) {
      s.gamma.insert(parse_prop_closed());
      while (peek().kind == Tok::Comma) {
        next();
        s.gamma.insert(parse_prop_closed());
      }
    }
    expect(Tok::Turnstile, "'|-'");
    if (peek().kind != Tok::RParen && peek().kind != Tok::Eof &&
        !(peek().kind == Tok::Ident && is_keyword(peek().text) && !at_ident("forall") &&
          !at_ident("exists"))) {
      s.delta.insert(parse_prop_closed());
      while (peek().kind == Tok::Comma) {
        next();
        s.delta.insert(parse_prop_closed());
      }
    }
    return s;
  }

  // -------------------------------------------------------------- proofs

  std::vector<Proposition> parse_prop_annotations() {
    std::vector<Proposition> props;
    if (peek().kind != Tok::LBrace) return props;
    next();
    if (peek().kind != Tok::RBrace) {
      props.push_back(parse_prop_closed());
      while (peek().kind == Tok::Semi) {
        next();
        props.push_back(parse_prop_closed());
      }
    }
    expect(Tok::RBrace, "'}'");
    return props;
  }

  void parse_quantifier_annotations(ProofNode& node, bool needs_term) {
    expect(Tok::LBrace, "'{'");
    Token var = expect(Tok::Ident, "a variable name");
    node.var = var.text;
    expect(Tok::Semi, "';'");
    std::vector<std::string> binders;
    node.qbody = parse_prop(binders);
    if (needs_term) {
      expect(Tok::Semi, "';'");
      node.term = parse_term(binders);
    }
    expect(Tok::RBrace, "'}'");
  }

  std::vector<WitnessChain> parse_witnesses() {
    std::vector<WitnessChain> out;
    if (!at_ident("witness")) return out;
    next();
    expect(Tok::LBrace, "'{'");
    auto chain = [&]() {
      WitnessChain c{parse_prop_closed()};
      while (peek().kind == Tok::Arrow) {
        next();
        c.push_back(parse_prop_closed());
      }
      return c;
    };
    out.push_back(chain());
    while (peek().kind == Tok::Semi) {
      next();
      out.push_back(chain());
    }
    expect(Tok::RBrace, "'}'");
    return out;
  }

  ProofNode parse_proof_node() {
    expect(Tok::LParen, "'('");
    Token tag_tok = expect(Tok::Ident, "a rule tag");
    auto tag = rule_tag_from_name(tag_tok.text);
    if (!tag) error("unknown rule tag " + tag_tok.text, tag_tok);
    ProofNode node;
    node.tag = *tag;
    switch (*tag) {
      case RuleTag::ForallLeft:
      case RuleTag::ExistsRight:
        parse_quantifier_annotations(node, true);
        break;
      case RuleTag::ForallRight:
      case RuleTag::ExistsLeft:
        parse_quantifier_annotations(node, false);
        break;
      default:
        node.props = parse_prop_annotations();
        break;
    }
    expect(Tok::LParen, "'(' before the conclusion sequent");
    node.conclusion = parse_sequent_body();
    expect(Tok::RParen, "')'");
    node.witnesses = parse_witnesses();
    while (peek().kind == Tok::LParen) node.premises.push_back(parse_proof_node());
    expect(Tok::RParen, "')'");
    return node;
  }

  SymProofNode parse_sym_proof_node() {
    expect(Tok::LParen, "'('");
    Token tag_tok = expect(Tok::Ident, "a rule tag");
    auto tag = sym_rule_tag_from_name(tag_tok.text);
    if (!tag) error("unknown symmetric rule tag " + tag_tok.text, tag_tok);
    SymProofNode node;
    node.tag = *tag;
    node.props = parse_prop_annotations();
    expect(Tok::LParen, "'(' before the conclusion sequent");
    node.conclusion = parse_sequent_body();
    expect(Tok::RParen, "')'");
    while (peek().kind == Tok::LParen) node.premises.push_back(parse_sym_proof_node());
    expect(Tok::RParen, "')'");
    return node;
  }

  // -------------------------------------------------------------- file

  ProblemFile parse_file() {
    ProblemFile pf;
    sig = &pf.system.signature;
    while (peek().kind != Tok::Eof) {
      if (at_ident("sig")) {
        next();
        parse_declarations(false);
        continue;
      }
      if (at_ident("pred")) {
        next();
        parse_declarations(true);
        continue;
      }
      if (at_ident("rules")) {
        next();
        while (!at_ident("end")) parse_rule(pf.system);
        next();
        continue;
      }
      if (at_ident("sequent")) {
        next();
        pf.sequent = parse_sequent_body();
        continue;
      }
      if (at_ident("proof")) {
        next();
        if (at_ident("sym")) {
          next();
          pf.proof_kind = ProofKind::Sym;
          pf.sym_proof = parse_sym_proof_node();
        } else {
          pf.proof_kind = ProofKind::Asym;
          pf.proof = parse_proof_node();
        }
        expect_ident("end");
        continue;
      }
      // Bare rule lines: "a -> b".
      if (peek().kind == Tok::Ident || peek().kind == Tok::Number ||
          peek().kind == Tok::LBracket) {
        parse_rule(pf.system);
        continue;
      }
      error("expected a declaration, rules, sequent or proof", peek());
    }
    return pf;
  }

  void parse_declarations(bool predicates) {
    while (true) {
      if (peek().kind != Tok::Ident && peek().kind != Tok::Number)
        error("expected a symbol name", peek());
      Token name = next();
      if (name.kind == Tok::Ident && is_keyword(name.text))
        error("keyword cannot be declared", name);
      expect(Tok::Slash, "'/'");
      Token arity = expect(Tok::Number, "an arity");
      try {
        if (predicates)
          sig->declare_predicate(name.text, static_cast<int>(arity.number));
        else
          sig->declare_function(name.text, static_cast<int>(arity.number));
      } catch (const std::invalid_argument& e) {
        error(e.what(), name);
      }
      if (peek().kind == Tok::Comma) {
        next();
        continue;
      }
      break;
    }
    expect(Tok::Semi, "';'");
  }

  void parse_rule(RewriteSystem& system) {
    std::string label;
    if (peek().kind == Tok::LBracket) {
      next();
      label = expect(Tok::Ident, "a rule label").text;
      expect(Tok::RBracket, "']'");
    }
    Token at = peek();
    std::vector<std::string> binders;
    Term lhs = parse_term(binders);
    expect(Tok::Arrow, "'->'");
    Term rhs = parse_term(binders);
    if (peek().kind == Tok::Semi) next();
    try {
      system.add_rule(std::move(lhs), std::move(rhs), std::move(label));
    } catch (const std::invalid_argument& e) {
      error(e.what(), at);
    }
  }
};

// ---------------------------------------------------------------- printer

bool is_numeral(const Term& t, const Signature& sig, long& value) {
  if (!sig.function_arity("0") || *sig.function_arity("0") != 0) return false;
  const Term* cur = &t;
  long n = 0;
  while (cur->kind == Term::Kind::App && cur->name == "S" && cur->args.size() == 1) {
    if (!sig.function_arity("S") || *sig.function_arity("S") != 1) return false;
    ++n;
    cur = &cur->args[0];
  }
  if (cur->kind == Term::Kind::App && cur->name == "0" && cur->args.empty()) {
    value = n;
    return true;
  }
  return false;
}

struct Printer {
  const Signature& sig;

  void term(std::ostringstream& os, const Term& t, const std::vector<std::string>& binders) const {
    long value = 0;
    if (is_numeral(t, sig, value)) {
      os << value;
      return;
    }
    switch (t.kind) {
      case Term::Kind::Var:
        os << t.name;
        return;
      case Term::Kind::Bound: {
        size_t k = static_cast<size_t>(t.index);
        if (k < binders.size())
          os << binders[binders.size() - 1 - k];
        else
          os << "#" << t.index;
        return;
      }
      case Term::Kind::App:
        os << t.name;
        if (!t.args.empty()) {
          os << "(";
          for (size_t i = 0; i < t.args.size(); ++i) {
            if (i) os << ", ";
            term(os, t.args[i], binders);
          }
          os << ")";
        }
        return;
    }
  }

  // Precedence contexts: 0 lowest (=> and quantifier bodies), 1 \/, 2 /\, 3 unary.
  void prop(std::ostringstream& os, const Proposition& p, std::vector<std::string>& binders,
            int ctx) const {
    switch (p.kind) {
      case Proposition::Kind::Atom:
        os << p.name;
        if (!p.args.empty()) {
          os << "(";
          for (size_t i = 0; i < p.args.size(); ++i) {
            if (i) os << ", ";
            term(os, p.args[i], binders);
          }
          os << ")";
        }
        return;
      case Proposition::Kind::Bottom:
        os << "_|_";
        return;
      case Proposition::Kind::Implies: {
        if (p.kids[1].kind == Proposition::Kind::Bottom) {
          os << "~";
          prop(os, p.kids[0], binders, 3);
          return;
        }
        bool parens = ctx > 0;
        if (parens) os << "(";
        prop(os, p.kids[0], binders, 1);
        os << " => ";
        prop(os, p.kids[1], binders, 0);
        if (parens) os << ")";
        return;
      }
      case Proposition::Kind::Or: {
        bool parens = ctx > 1;
        if (parens) os << "(";
        prop(os, p.kids[0], binders, 1);
        os << " \\/ ";
        prop(os, p.kids[1], binders, 2);
        if (parens) os << ")";
        return;
      }
      case Proposition::Kind::And: {
        bool parens = ctx > 2;
        if (parens) os << "(";
        prop(os, p.kids[0], binders, 2);
        os << " /\\ ";
        prop(os, p.kids[1], binders, 3);
        if (parens) os << ")";
        return;
      }
      case Proposition::Kind::Forall:
      case Proposition::Kind::Exists: {
        bool parens = ctx > 0;
        if (parens) os << "(";
        std::set<std::string> taken = free_vars(p);
        for (const auto& b : binders) taken.insert(b);
        std::string name = fresh_name(p.name, taken);
        os << (p.kind == Proposition::Kind::Forall ? "forall " : "exists ") << name << ". ";
        binders.push_back(name);
        prop(os, p.kids[0], binders, 0);
        binders.pop_back();
        if (parens) os << ")";
        return;
      }
    }
  }

  std::string prop_str(const Proposition& p) const {
    std::ostringstream os;
    std::vector<std::string> binders;
    prop(os, p, binders, 0);
    return os.str();
  }

  std::string term_str(const Term& t) const {
    std::ostringstream os;
    term(os, t, {});
    return os.str();
  }

  std::string sequent_str(const Sequent& s) const {
    std::ostringstream os;
    for (size_t i = 0; i < s.gamma.items().size(); ++i) {
      if (i) os << ", ";
      os << prop_str(s.gamma.items()[i]);
    }
    os << (s.gamma.empty() ? "|-" : " |-");
    for (size_t i = 0; i < s.delta.items().size(); ++i) {
      os << (i ? ", " : " ");
      os << prop_str(s.delta.items()[i]);
    }
    return os.str();
  }

  void proof_node(std::ostringstream& os, const ProofNode& n, int indent) const {
    std::string pad(static_cast<size_t>(indent), ' ');
    os << pad << "(" << rule_tag_name(n.tag);
    switch (n.tag) {
      case RuleTag::ForallLeft:
      case RuleTag::ExistsRight:
        os << " {" << n.var << "; " << prop_str(*n.qbody) << "; " << term_str(*n.term) << "}";
        break;
      case RuleTag::ForallRight:
      case RuleTag::ExistsLeft:
        os << " {" << n.var << "; " << prop_str(*n.qbody) << "}";
        break;
      default:
        if (!n.props.empty()) {
          os << " {";
          for (size_t i = 0; i < n.props.size(); ++i) {
            if (i) os << "; ";
            os << prop_str(n.props[i]);
          }
          os << "}";
        }
        break;
    }
    os << " (" << sequent_str(n.conclusion) << ")";
    if (!n.witnesses.empty()) {
      os << " witness {";
      for (size_t i = 0; i < n.witnesses.size(); ++i) {
        if (i) os << "; ";
        for (size_t k = 0; k < n.witnesses[i].size(); ++k) {
          if (k) os << " -> ";
          os << prop_str(n.witnesses[i][k]);
        }
      }
      os << "}";
    }
    for (const auto& pr : n.premises) {
      os << "\n";
      proof_node(os, pr, indent + 2);
    }
    os << ")";
  }

  void sym_proof_node(std::ostringstream& os, const SymProofNode& n, int indent) const {
    std::string pad(static_cast<size_t>(indent), ' ');
    os << pad << "(" << sym_rule_tag_name(n.tag);
    if (!n.props.empty()) {
      os << " {";
      for (size_t i = 0; i < n.props.size(); ++i) {
        if (i) os << "; ";
        os << prop_str(n.props[i]);
      }
      os << "}";
    }
    os << " (" << sequent_str(n.conclusion) << ")";
    for (const auto& pr : n.premises) {
      os << "\n";
      sym_proof_node(os, pr, indent + 2);
    }
    os << ")";
  }
};

}  // namespace

ProblemFile parse_problem(const std::string& text) {
  Parser parser{lex(text), 0, nullptr};
  return parser.parse_file();
}

Term parse_term(const std::string& text, Signature& sig) {
  Parser parser{lex(text), 0, &sig};
  std::vector<std::string> binders;
  Term t = parser.parse_term(binders);
  parser.expect(Tok::Eof, "end of input");
  return t;
}

Proposition parse_proposition(const std::string& text, Signature& sig) {
  Parser parser{lex(text), 0, &sig};
  Proposition p = parser.parse_prop_closed();
  parser.expect(Tok::Eof, "end of input");
  return p;
}

Sequent parse_sequent(const std::string& text, Signature& sig) {
  Parser parser{lex(text), 0, &sig};
  Sequent s = parser.parse_sequent_body();
  parser.expect(Tok::Eof, "end of input");
  return s;
}

std::string render(const Term& t, const Signature& sig) { return Printer{sig}.term_str(t); }

std::string render(const Proposition& p, const Signature& sig) {
  return Printer{sig}.prop_str(p);
}

std::string render(const Sequent& s, const Signature& sig) {
  return Printer{sig}.sequent_str(s);
}

std::string render(const ProofNode& p, const Signature& sig) {
  std::ostringstream os;
  Printer{sig}.proof_node(os, p, 0);
  return os.str();
}

std::string render(const SymProofNode& p, const Signature& sig) {
  std::ostringstream os;
  Printer{sig}.sym_proof_node(os, p, 0);
  return os.str();
}

std::string render(const ProblemFile& pf) {
  std::ostringstream os;
  const Signature& sig = pf.system.signature;
  Printer printer{sig};
  if (!sig.functions.empty()) {
    os << "sig ";
    bool first = true;
    for (const auto& [name, arity] : sig.functions) {
      if (!first) os << ", ";
      os << name << "/" << arity;
      first = false;
    }
    os << ";\n";
  }
  if (!sig.predicates.empty()) {
    os << "pred ";
    bool first = true;
    for (const auto& [name, arity] : sig.predicates) {
      if (!first) os << ", ";
      os << name << "/" << arity;
      first = false;
    }
    os << ";\n";
  }
  if (!pf.system.rules.empty()) {
    os << "\nrules\n";
    for (const auto& rule : pf.system.rules) {
      os << "  ";
      if (!rule.name.empty()) os << "[" << rule.name << "] ";
      os << printer.term_str(rule.lhs) << " -> " << printer.term_str(rule.rhs) << "\n";
    }
    os << "end\n";
  }
  if (pf.sequent) os << "\nsequent " << printer.sequent_str(*pf.sequent) << "\n";
  if (pf.proof_kind == ProofKind::Sym && pf.sym_proof) {
    std::ostringstream body;
    printer.sym_proof_node(body, *pf.sym_proof, 2);
    os << "\nproof sym\n" << body.str() << "\nend\n";
  } else if (pf.proof) {
    std::ostringstream body;
    printer.proof_node(body, *pf.proof, 2);
    os << "\nproof\n" << body.str() << "\nend\n";
  }
  return os.str();
}

namespace {

void derivation_lines(const Printer& printer, const ProofNode& n, int depth,
                      std::ostringstream& os) {
  os << std::string(static_cast<size_t>(2 * depth), ' ') << rule_tag_name(n.tag);
  if (!n.props.empty() || n.qbody) {
    os << " (";
    if (n.qbody) {
      os << n.var << "; " << printer.prop_str(*n.qbody);
      if (n.term) os << "; " << printer.term_str(*n.term);
    } else {
      for (size_t i = 0; i < n.props.size(); ++i) {
        if (i) os << "; ";
        os << printer.prop_str(n.props[i]);
      }
    }
    os << ")";
  }
  os << ": " << printer.sequent_str(n.conclusion) << "\n";
  for (const auto& pr : n.premises) derivation_lines(printer, pr, depth + 1, os);
}

template <typename T>
std::string conversion_str(const ConversionSequence<T>& seq, const RewriteSystem& R) {
  Printer printer{R.signature};
  std::ostringstream os;
  for (size_t i = 0; i < seq.objects.size(); ++i) {
    if (i) {
      const auto& st = seq.steps[i - 1];
      os << (st.dir == Direction::Forward ? " -> " : " <- ");
      os << "[" << R.rule_label(st.rule) << "] ";
    }
    if constexpr (std::is_same_v<T, Term>)
      os << printer.term_str(seq.objects[i]);
    else
      os << printer.prop_str(seq.objects[i]);
  }
  return os.str();
}

}  // namespace

std::string render_derivation(const ProofNode& p, const Signature& sig) {
  std::ostringstream os;
  derivation_lines(Printer{sig}, p, 0, os);
  return os.str();
}

std::string render_conversion(const ConversionSequence<Proposition>& seq,
                              const RewriteSystem& R) {
  return conversion_str(seq, R);
}

std::string render_conversion(const ConversionSequence<Term>& seq, const RewriteSystem& R) {
  return conversion_str(seq, R);
}

}  // namespace admo
