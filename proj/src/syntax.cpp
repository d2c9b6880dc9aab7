#include "gamealg/syntax.hpp"

#include <cctype>
#include <optional>
#include <sstream>

namespace gamealg {

namespace {

const char* const kProdTerm = "term := choice1";
const char* const kProdChoice1 = "choice1 := choice2 { \"+\" choice2 }";
const char* const kProdChoice2 = "choice2 := comp { \"&\" comp }";
const char* const kProdComp = "comp := par { \".\" par }";
const char* const kProdPar = "par := unary { \"||\" unary }";
const char* const kProdUnary = "unary := primary [ \"^d\" ]";
const char* const kProdPrimary =
    "primary := atom | \"iota\" | \"abs\" \"{\" atomlist \"}\" \"(\" term \")\" | \"<\" var \"|\" "
    "specname \">\" | \"(\" term \")\"";
const char* const kProdSpec = "specfile := { \"spec\" NAME \"{\" { VAR \"=\" term \";\" } \"}\" }";

enum class Tok {
  End,
  Lower,
  Upper,
  Plus,
  Amp,
  Dot,
  Parallel,
  Bar,
  DualMark,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Lt,
  Gt,
  Eq,
  Semi,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;
};

std::string describe(const Token& t) {
  return t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
}

bool is_reserved(const std::string& w) { return w == "iota" || w == "abs" || w == "spec"; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c))) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                      src_[pos_] == '_' || src_[pos_] == '\'')) {
          advance();
        }
        t.text = std::string(src_.substr(start, pos_ - start));
        t.kind = std::islower(static_cast<unsigned char>(c)) ? Tok::Lower : Tok::Upper;
        out.push_back(t);
        continue;
      }
      auto single = [&](Tok k) {
        t.kind = k;
        t.text = std::string(1, c);
        advance();
        out.push_back(t);
      };
      switch (c) {
        case '+': single(Tok::Plus); break;
        case '&': single(Tok::Amp); break;
        case '.': single(Tok::Dot); break;
        case '(': single(Tok::LParen); break;
        case ')': single(Tok::RParen); break;
        case '{': single(Tok::LBrace); break;
        case '}': single(Tok::RBrace); break;
        case ',': single(Tok::Comma); break;
        case '<': single(Tok::Lt); break;
        case '>': single(Tok::Gt); break;
        case '=': single(Tok::Eq); break;
        case ';': single(Tok::Semi); break;
        case '|':
          if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '|') {
            t.kind = Tok::Parallel;
            t.text = "||";
            advance();
            advance();
            out.push_back(t);
          } else {
            single(Tok::Bar);
          }
          break;
        case '^':
          if (pos_ + 1 < src_.size() && src_[pos_ + 1] == 'd') {
            t.kind = Tok::DualMark;
            t.text = "^d";
            advance();
            advance();
            out.push_back(t);
          } else {
            fail("expected 'd' after '^'", kProdUnary);
          }
          break;
        case '\\': {
          std::string seq = "\\";
          if (pos_ + 1 < src_.size()) seq += src_[pos_ + 1];
          fail("unknown escape sequence '" + seq + "'", kProdPrimary);
        }
        default:
          fail(std::string("unexpected character '") + c + "'", kProdPrimary);
      }
    }
  }

 private:
  [[noreturn]] void fail(const std::string& what, const char* production) const {
    std::ostringstream os;
    os << "syntax error at line " << line_ << ", column " << col_ << ": " << what;
    throw ParseError(os.str(), line_, col_, production);
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Term parse_whole_term() {
    Term t = term();
    expect(Tok::End, "end of input", kProdTerm);
    return t;
  }

  std::vector<RecSpec> parse_specs() {
    std::vector<RecSpec> out;
    while (!at(Tok::End)) {
      const Token& kw = peek();
      if (kw.kind != Tok::Lower || kw.text != "spec") fail("expected 'spec'", kProdSpec);
      next();
      const Token& name = peek();
      if (name.kind != Tok::Lower && name.kind != Tok::Upper) {
        fail("expected specification name", kProdSpec);
      }
      if (is_reserved(name.text)) fail("reserved word '" + name.text + "' used as name", kProdSpec);
      RecSpec spec;
      spec.name = name.text;
      next();
      expect(Tok::LBrace, "'{'", kProdSpec);
      context_ = spec.name;
      while (!at(Tok::RBrace)) {
        const Token& var = peek();
        if (var.kind != Tok::Upper) fail("expected recursion variable", kProdSpec);
        if (spec.binds(var.text)) fail("duplicate equation for " + var.text, kProdSpec);
        std::string v = var.text;
        next();
        expect(Tok::Eq, "'='", kProdSpec);
        Term rhs = term();
        spec.equations.emplace_back(v, rhs);
        if (at(Tok::Semi)) {
          next();
        } else if (!at(Tok::RBrace)) {
          fail("expected ';'", kProdSpec);
        }
      }
      next();
      context_.reset();
      if (spec.equations.empty()) fail("specification " + spec.name + " has no equations", kProdSpec);
      for (const auto& s : out) {
        if (s.name == spec.name) fail("duplicate specification " + spec.name, kProdSpec);
      }
      out.push_back(std::move(spec));
    }
    return out;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool at(Tok k) const { return peek().kind == k; }
  void next() {
    if (!at(Tok::End)) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what, const char* production) const {
    const Token& t = peek();
    std::ostringstream os;
    if (t.kind == Tok::End) {
      os << "syntax error at end of input: " << what;
    } else {
      os << "syntax error at line " << t.line << ", column " << t.column << ": " << what
         << " near " << describe(t);
    }
    throw ParseError(os.str(), t.line, t.column, production);
  }

  void expect(Tok k, const std::string& what, const char* production) {
    if (!at(k)) fail("expected " + what, production);
    next();
  }

  Term term() { return choice1(); }

  Term choice1() {
    Term t = choice2();
    while (at(Tok::Plus)) {
      next();
      t = Term::join(t, choice2());
    }
    return t;
  }

  Term choice2() {
    Term t = comp();
    while (at(Tok::Amp)) {
      next();
      t = Term::meet(t, comp());
    }
    return t;
  }

  Term comp() {
    Term t = par();
    while (at(Tok::Dot)) {
      next();
      t = Term::comp(t, par());
    }
    return t;
  }

  Term par() {
    Term t = unary();
    while (at(Tok::Parallel)) {
      next();
      t = Term::par(t, unary());
    }
    return t;
  }

  Term unary() {
    Term t = primary();
    if (at(Tok::DualMark)) {
      next();
      t = Term::dual(t);
      if (at(Tok::DualMark)) fail("repeated '^d' needs parentheses, as in (x^d)^d", kProdUnary);
    }
    return t;
  }

  Term primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Lower: {
        if (t.text == "iota") {
          next();
          return Term::idle();
        }
        if (t.text == "abs") {
          next();
          if (!at(Tok::LBrace)) fail("reserved word 'abs' must be followed by '{'", kProdPrimary);
          next();
          AtomSet hide = atom_list();
          expect(Tok::RBrace, "'}'", kProdPrimary);
          expect(Tok::LParen, "'('", kProdPrimary);
          Term body = term();
          expect(Tok::RParen, "')'", kProdPrimary);
          return Term::abs(std::move(hide), body);
        }
        if (t.text == "spec") fail("reserved word 'spec' cannot be used as an atom", kProdPrimary);
        std::string name = t.text;
        next();
        return Term::atom(name);
      }
      case Tok::Upper: {
        if (!context_) {
          fail("bare recursion variable outside a specification; write <" + t.text + "|E>",
               kProdPrimary);
        }
        std::string v = t.text;
        next();
        return Term::rec(v, *context_);
      }
      case Tok::Lt: {
        next();
        if (!at(Tok::Upper)) fail("expected recursion variable", kProdPrimary);
        std::string v = peek().text;
        next();
        expect(Tok::Bar, "'|'", kProdPrimary);
        if (!at(Tok::Upper) && !at(Tok::Lower)) fail("expected specification name", kProdPrimary);
        std::string s = peek().text;
        next();
        expect(Tok::Gt, "'>'", kProdPrimary);
        return Term::rec(v, s);
      }
      case Tok::LParen: {
        next();
        Term inner = term();
        expect(Tok::RParen, "')'", kProdPrimary);
        return inner;
      }
      default:
        fail("expected a term", kProdPrimary);
    }
  }

  AtomSet atom_list() {
    AtomSet out;
    if (at(Tok::RBrace)) return out;
    for (;;) {
      const Token& t = peek();
      if (t.kind != Tok::Lower) fail("expected atom in hide set", kProdPrimary);
      if (t.text == "iota") fail("reserved word 'iota' cannot be hidden", kProdPrimary);
      if (is_reserved(t.text)) fail("reserved word '" + t.text + "' used as an atom", kProdPrimary);
      out.insert(t.text);
      next();
      if (!at(Tok::Comma)) return out;
      next();
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::optional<std::string> context_;
};

int precedence(const Term& t) {
  switch (t.kind()) {
    case Kind::Join: return 1;
    case Kind::Meet: return 2;
    case Kind::Comp: return 3;
    case Kind::Par: return 4;
    case Kind::Dual: return 5;
    default: return 6;
  }
}

const char* op_text(Kind k) {
  switch (k) {
    case Kind::Join: return " + ";
    case Kind::Meet: return " & ";
    case Kind::Comp: return " . ";
    case Kind::Par: return " || ";
    default: return "";
  }
}

void print(const Term& t, const std::string* ctx, std::ostream& os) {
  auto wrapped = [&](const Term& u, bool parens) {
    if (parens) os << '(';
    print(u, ctx, os);
    if (parens) os << ')';
  };
  switch (t.kind()) {
    case Kind::Idle:
      os << "iota";
      return;
    case Kind::Atom:
      os << t.name();
      return;
    case Kind::Dual:
      wrapped(t.body(), precedence(t.body()) < 6);
      os << "^d";
      return;
    case Kind::Abs:
      os << "abs" << format_atoms(t.hide()) << '(';
      print(t.body(), ctx, os);
      os << ')';
      return;
    case Kind::Rec:
      if (ctx != nullptr && *ctx == t.spec()) {
        os << t.name();
      } else {
        os << '<' << t.name() << '|' << t.spec() << '>';
      }
      return;
    default: {
      int p = precedence(t);
      wrapped(t.left(), precedence(t.left()) < p);
      os << op_text(t.kind());
      wrapped(t.right(), precedence(t.right()) <= p);
    }
  }
}

}  // namespace

ParseError::ParseError(const std::string& message, int line, int column, std::string production)
    : Error(message), line_(line), column_(column), production_(std::move(production)) {}

const std::string& term_grammar() {
  static const std::string g = [] {
    std::ostringstream os;
    for (const char* p : {kProdTerm, kProdChoice1, kProdChoice2, kProdComp, kProdPar, kProdUnary,
                          kProdPrimary}) {
      os << p << '\n';
    }
    return os.str();
  }();
  return g;
}

Term parse_term(std::string_view text) {
  Parser p(Lexer(text).run());
  return p.parse_whole_term();
}

std::vector<RecSpec> parse_spec_file(std::string_view text) {
  Parser p(Lexer(text).run());
  return p.parse_specs();
}

RecSpec parse_spec(std::string_view text) {
  auto specs = parse_spec_file(text);
  if (specs.size() != 1) {
    throw ParseError("expected exactly one specification, found " + std::to_string(specs.size()),
                     1, 1, kProdSpec);
  }
  return std::move(specs.front());
}

std::string format_term(const Term& t) {
  std::ostringstream os;
  print(t, nullptr, os);
  return os.str();
}

std::string format_term_in(const Term& t, const std::string& spec) {
  std::ostringstream os;
  print(t, &spec, os);
  return os.str();
}

std::string format_spec(const RecSpec& spec) {
  std::ostringstream os;
  os << "spec " << spec.name << " {\n";
  for (const auto& [v, rhs] : spec.equations) {
    os << "  " << v << " = " << format_term_in(rhs, spec.name) << ";\n";
  }
  os << "}\n";
  return os.str();
}

std::string format_atoms(const AtomSet& atoms) {
  std::string out = "{";
  bool first = true;
  for (const auto& a : atoms) {
    if (!first) out += ",";
    out += a;
    first = false;
  }
  return out + "}";
}

}  // namespace gamealg
