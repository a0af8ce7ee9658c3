#include "cgs/formulas.hpp"

#include <cctype>
#include <sstream>

namespace cgs {

namespace {

FormulaPtr make(NodeKind k, FormulaPtr l = nullptr, FormulaPtr r = nullptr) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->lhs = std::move(l);
  f->rhs = std::move(r);
  return f;
}

}  // namespace

FormulaPtr f_atom(std::string name) {
  auto f = std::make_shared<Formula>();
  f->kind = NodeKind::Atom;
  f->atom = std::move(name);
  return f;
}

FormulaPtr f_true() { return make(NodeKind::True); }
FormulaPtr f_false() { return f_not(f_true()); }
FormulaPtr f_not(FormulaPtr f) { return make(NodeKind::Not, std::move(f)); }
FormulaPtr f_or(FormulaPtr a, FormulaPtr b) {
  return make(NodeKind::Or, std::move(a), std::move(b));
}
FormulaPtr f_and(FormulaPtr a, FormulaPtr b) {
  return f_not(f_or(f_not(std::move(a)), f_not(std::move(b))));
}
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) {
  return f_or(f_not(std::move(a)), std::move(b));
}
FormulaPtr f_next(FormulaPtr f) { return make(NodeKind::Next, std::move(f)); }
FormulaPtr f_until(FormulaPtr a, FormulaPtr b) {
  return make(NodeKind::Until, std::move(a), std::move(b));
}
FormulaPtr f_eventually(FormulaPtr f) { return f_until(f_true(), std::move(f)); }
FormulaPtr f_globally(FormulaPtr f) {
  return f_not(f_until(f_true(), f_not(std::move(f))));
}
FormulaPtr f_coalition(std::set<AgentId> members, FormulaPtr body) {
  auto f = std::make_shared<Formula>();
  f->kind = NodeKind::Coalition;
  f->coalition = std::move(members);
  f->lhs = std::move(body);
  return f;
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case NodeKind::Atom: return a->atom == b->atom;
    case NodeKind::True: return true;
    case NodeKind::Not:
    case NodeKind::Next: return equal(a->lhs, b->lhs);
    case NodeKind::Or:
    case NodeKind::Until: return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    case NodeKind::Coalition:
      return a->coalition == b->coalition && equal(a->lhs, b->lhs);
  }
  return false;
}

bool is_state_formula(const FormulaPtr& f) {
  switch (f->kind) {
    case NodeKind::Atom:
    case NodeKind::True:
    case NodeKind::Coalition: return true;
    case NodeKind::Not: return is_state_formula(f->lhs);
    case NodeKind::Or: return is_state_formula(f->lhs) && is_state_formula(f->rhs);
    case NodeKind::Next:
    case NodeKind::Until: return false;
  }
  return false;
}

bool contains_coalition(const FormulaPtr& f) {
  if (f->kind == NodeKind::Coalition) return true;
  if (f->lhs && contains_coalition(f->lhs)) return true;
  if (f->rhs && contains_coalition(f->rhs)) return true;
  return false;
}

const char* fragment_name(FragmentTag t) {
  switch (t) {
    case FragmentTag::LTL: return "LTL";
    case FragmentTag::ATL: return "ATL";
    case FragmentTag::ATLSTAR: return "ATL*";
  }
  return "?";
}

namespace {

bool atl_state(const FormulaPtr& f);

bool atl_path_shape(const FormulaPtr& f) {
  // The coalition body must be X phi or phi1 U phi2 over state formulas.
  if (f->kind == NodeKind::Next) return atl_state(f->lhs);
  if (f->kind == NodeKind::Until) return atl_state(f->lhs) && atl_state(f->rhs);
  return false;
}

bool atl_state(const FormulaPtr& f) {
  switch (f->kind) {
    case NodeKind::Atom:
    case NodeKind::True: return true;
    case NodeKind::Not: return atl_state(f->lhs);
    case NodeKind::Or: return atl_state(f->lhs) && atl_state(f->rhs);
    case NodeKind::Coalition: return atl_path_shape(f->lhs);
    case NodeKind::Next:
    case NodeKind::Until: return false;
  }
  return false;
}

}  // namespace

FragmentTag classify(const FormulaPtr& f) {
  if (!contains_coalition(f)) return FragmentTag::LTL;
  if (atl_state(f)) return FragmentTag::ATL;
  return FragmentTag::ATLSTAR;
}

ParseError::ParseError(const std::string& what, int l, int c)
    : InputError("parse error at " + std::to_string(l) + ":" + std::to_string(c) +
                 ": " + what),
      line(l),
      column(c) {}

namespace {

struct Token {
  enum Kind { Atom, Int, LPar, RPar, Tilde, Bar, Amp, Arrow, LCoal, RCoal, Comma, End };
  Kind kind;
  std::string text;
  int line;
  int column;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
    tok_.line = line_;
    tok_.column = col_;
    if (pos_ >= text_.size()) {
      tok_ = {Token::End, "", line_, col_};
      return;
    }
    char c = text_[pos_];
    auto single = [&](Token::Kind k) {
      tok_ = {k, std::string(1, c), line_, col_};
      ++pos_;
      ++col_;
    };
    if (c == '(') return single(Token::LPar);
    if (c == ')') return single(Token::RPar);
    if (c == '~') return single(Token::Tilde);
    if (c == '|') return single(Token::Bar);
    if (c == '&') return single(Token::Amp);
    if (c == ',') return single(Token::Comma);
    if (c == '-') {
      if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
        tok_ = {Token::Arrow, "->", line_, col_};
        pos_ += 2;
        col_ += 2;
        return;
      }
      throw ParseError("stray '-'", line_, col_);
    }
    if (c == '<') {
      if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '<') {
        tok_ = {Token::LCoal, "<<", line_, col_};
        pos_ += 2;
        col_ += 2;
        return;
      }
      throw ParseError("stray '<'", line_, col_);
    }
    if (c == '>') {
      if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
        tok_ = {Token::RCoal, ">>", line_, col_};
        pos_ += 2;
        col_ += 2;
        return;
      }
      throw ParseError("stray '>'", line_, col_);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string n;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        n += text_[pos_++];
        ++col_;
      }
      tok_ = {Token::Int, n, line_, tok_.column};
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string w;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        w += text_[pos_++];
        ++col_;
      }
      tok_ = {Token::Atom, w, line_, tok_.column};
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_;
};

// Precedence climbing; '->' loosest, then 'U' (right associative), '|', '&',
// then the prefix operators.
class Parser {
 public:
  explicit Parser(const std::string& text) : lex_(text) {}

  FormulaPtr parse() {
    FormulaPtr f = implication();
    const Token& t = lex_.peek();
    if (t.kind != Token::End)
      throw ParseError("unexpected '" + t.text + "'", t.line, t.column);
    return f;
  }

 private:
  FormulaPtr implication() {
    FormulaPtr l = until();
    if (lex_.peek().kind == Token::Arrow) {
      lex_.take();
      return f_implies(std::move(l), implication());
    }
    return l;
  }

  FormulaPtr until() {
    FormulaPtr l = disjunction();
    const Token& t = lex_.peek();
    if (t.kind == Token::Atom && t.text == "U") {
      lex_.take();
      return f_until(std::move(l), until());
    }
    return l;
  }

  FormulaPtr disjunction() {
    FormulaPtr l = conjunction();
    while (lex_.peek().kind == Token::Bar) {
      lex_.take();
      l = f_or(std::move(l), conjunction());
    }
    return l;
  }

  FormulaPtr conjunction() {
    FormulaPtr l = unary();
    while (lex_.peek().kind == Token::Amp) {
      lex_.take();
      l = f_and(std::move(l), unary());
    }
    return l;
  }

  FormulaPtr unary() {
    Token t = lex_.peek();
    switch (t.kind) {
      case Token::Tilde:
        lex_.take();
        return f_not(unary());
      case Token::LCoal: {
        lex_.take();
        std::set<AgentId> members;
        while (lex_.peek().kind == Token::Int) {
          members.insert(std::stoi(lex_.take().text));
          if (lex_.peek().kind == Token::Comma)
            lex_.take();
          else
            break;
        }
        Token close = lex_.take();
        if (close.kind != Token::RCoal)
          throw ParseError("expected '>>'", close.line, close.column);
        return f_coalition(std::move(members), unary());
      }
      case Token::Atom:
        if (t.text == "X") {
          lex_.take();
          return f_next(unary());
        }
        if (t.text == "F") {
          lex_.take();
          return f_eventually(unary());
        }
        if (t.text == "G") {
          lex_.take();
          return f_globally(unary());
        }
        return primary();
      default:
        return primary();
    }
  }

  FormulaPtr primary() {
    Token t = lex_.take();
    switch (t.kind) {
      case Token::LPar: {
        FormulaPtr f = implication();
        Token close = lex_.take();
        if (close.kind != Token::RPar)
          throw ParseError("expected ')'", close.line, close.column);
        return f;
      }
      case Token::Atom:
        if (t.text == "true") return f_true();
        if (t.text == "false") return f_false();
        if (t.text == "U" || t.text == "X" || t.text == "F" || t.text == "G")
          throw ParseError("'" + t.text + "' is an operator, not an atom", t.line,
                           t.column);
        return f_atom(t.text);
      default:
        throw ParseError("unexpected '" + (t.text.empty() ? "end of input" : t.text) +
                             "'",
                         t.line, t.column);
    }
  }

  Lexer lex_;
};

}  // namespace

FormulaPtr parse_formula(const std::string& text) { return Parser(text).parse(); }

namespace {

void render_to(const FormulaPtr& f, std::ostream& os) {
  switch (f->kind) {
    case NodeKind::Atom:
      os << f->atom;
      return;
    case NodeKind::True:
      os << "true";
      return;
    case NodeKind::Not:
      os << '~';
      render_to(f->lhs, os);
      return;
    case NodeKind::Or:
      os << '(';
      render_to(f->lhs, os);
      os << " | ";
      render_to(f->rhs, os);
      os << ')';
      return;
    case NodeKind::Next:
      os << "X ";
      render_to(f->lhs, os);
      return;
    case NodeKind::Until:
      os << '(';
      render_to(f->lhs, os);
      os << " U ";
      render_to(f->rhs, os);
      os << ')';
      return;
    case NodeKind::Coalition: {
      os << "<<";
      bool first = true;
      for (AgentId i : f->coalition) {
        if (!first) os << ',';
        os << i;
        first = false;
      }
      os << ">> ";
      render_to(f->lhs, os);
      return;
    }
  }
}

}  // namespace

std::string render(const FormulaPtr& f) {
  std::ostringstream os;
  render_to(f, os);
  return os.str();
}

FormulaPtr translate_tr(const FormulaPtr& f) {
  switch (f->kind) {
    case NodeKind::Atom:
    case NodeKind::True:
      return f;
    case NodeKind::Not:
      return f_not(translate_tr(f->lhs));
    case NodeKind::Or:
      return f_or(translate_tr(f->lhs), translate_tr(f->rhs));
    case NodeKind::Next:
      return f_next(f_next(translate_tr(f->lhs)));
    case NodeKind::Until:
      return f_until(translate_tr(f->lhs), translate_tr(f->rhs));
    case NodeKind::Coalition:
      return f_coalition(f->coalition, translate_tr(f->lhs));
  }
  return f;
}

NodeCounts count_nodes(const FormulaPtr& f) {
  NodeCounts c;
  switch (f->kind) {
    case NodeKind::Atom: c.atoms = 1; break;
    case NodeKind::True: c.truths = 1; break;
    case NodeKind::Not: c.nots = 1; break;
    case NodeKind::Or: c.ors = 1; break;
    case NodeKind::Next: c.nexts = 1; break;
    case NodeKind::Until: c.untils = 1; break;
    case NodeKind::Coalition: c.coalitions = 1; break;
  }
  for (const FormulaPtr* child : {&f->lhs, &f->rhs}) {
    if (!*child) continue;
    NodeCounts d = count_nodes(*child);
    c.atoms += d.atoms;
    c.truths += d.truths;
    c.nots += d.nots;
    c.ors += d.ors;
    c.nexts += d.nexts;
    c.untils += d.untils;
    c.coalitions += d.coalitions;
  }
  return c;
}

std::set<std::string> formula_atoms(const FormulaPtr& f) {
  std::set<std::string> out;
  if (f->kind == NodeKind::Atom) out.insert(f->atom);
  for (const FormulaPtr* child : {&f->lhs, &f->rhs})
    if (*child)
      for (const auto& a : formula_atoms(*child)) out.insert(a);
  return out;
}

std::set<AgentId> formula_agents(const FormulaPtr& f) {
  std::set<AgentId> out;
  if (f->kind == NodeKind::Coalition)
    out.insert(f->coalition.begin(), f->coalition.end());
  for (const FormulaPtr* child : {&f->lhs, &f->rhs})
    if (*child)
      for (AgentId i : formula_agents(*child)) out.insert(i);
  return out;
}

}  // namespace cgs
