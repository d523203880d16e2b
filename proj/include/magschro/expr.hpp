#pragma once

// Tiny arithmetic language for vertex-indexed data, e.g. "-(n^2)".
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | 'n' | func '(' args ')' | '(' expr ')'
//   func    := sqrt | abs | min | max
//
// So "-n^2" is -(n^2) and "2^-1" is 0.5.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "magschro/error.hpp"

namespace magschro {

class ExprError : public InputError {
 public:
  ExprError(const std::string& what, std::size_t position)
      : InputError(what, "position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class EvalError : public InputError {
 public:
  EvalError(const std::string& what, double n)
      : InputError(what, "n = " + format_n(n)), n_(n) {}
  double n() const noexcept { return n_; }

 private:
  static std::string format_n(double n) {
    std::ostringstream os;
    os << n;
    return os.str();
  }
  double n_;
};

enum class BinaryOp { add, sub, mul, div, pow };
enum class Function { sqrt, abs, min, max };

class Expr {
 public:
  struct Number {
    double value;
  };
  struct Variable {};
  struct Negate;
  struct Binary;
  struct Call;
  using Node = std::variant<Number, Variable, Negate, Binary, Call>;

  Expr();
  explicit Expr(Node node);

  const Node& node() const;

  static Expr number(double v);
  static Expr variable();
  static Expr negate(Expr e);
  static Expr binary(BinaryOp op, Expr l, Expr r);
  static Expr call(Function fn, std::vector<Expr> args);

  /// Evaluation; division by zero and non-finite results raise EvalError.
  double operator()(double n) const;

  bool depends_on_n() const;

 private:
  static double eval(const Number& x, double) { return x.value; }
  static double eval(const Variable&, double n) { return n; }
  static double eval(const Negate& x, double n);
  static double eval(const Binary& x, double n);
  static double eval(const Call& x, double n);

  std::shared_ptr<const Node> node_;
};

struct Expr::Negate {
  Expr operand;
};
struct Expr::Binary {
  BinaryOp op;
  Expr lhs, rhs;
};
struct Expr::Call {
  Function fn;
  std::vector<Expr> args;
};

inline Expr::Expr() : node_(std::make_shared<const Node>(Number{0})) {}
inline Expr::Expr(Node node) : node_(std::make_shared<const Node>(std::move(node))) {}

inline const Expr::Node& Expr::node() const { return *node_; }

inline Expr Expr::number(double v) { return Expr(Number{v}); }
inline Expr Expr::variable() { return Expr(Variable{}); }
inline Expr Expr::negate(Expr e) { return Expr(Negate{std::move(e)}); }
inline Expr Expr::binary(BinaryOp op, Expr l, Expr r) { return Expr(Binary{op, std::move(l), std::move(r)}); }
inline Expr Expr::call(Function fn, std::vector<Expr> args) { return Expr(Call{fn, std::move(args)}); }

inline double Expr::operator()(double n) const {
  const double v = std::visit([n](const auto& x) { return eval(x, n); }, *node_);
  if (!std::isfinite(v)) throw EvalError("non-finite value", n);
  return v;
}

inline bool Expr::depends_on_n() const {
  return std::visit(
      [](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Number>) return false;
        else if constexpr (std::is_same_v<T, Variable>) return true;
        else if constexpr (std::is_same_v<T, Negate>) return x.operand.depends_on_n();
        else if constexpr (std::is_same_v<T, Binary>) return x.lhs.depends_on_n() || x.rhs.depends_on_n();
        else {
          for (const auto& a : x.args)
            if (a.depends_on_n()) return true;
          return false;
        }
      },
      *node_);
}

inline double Expr::eval(const Negate& x, double n) { return -x.operand(n); }

inline double Expr::eval(const Binary& x, double n) {
  const double l = x.lhs(n), r = x.rhs(n);
  switch (x.op) {
    case BinaryOp::add: return l + r;
    case BinaryOp::sub: return l - r;
    case BinaryOp::mul: return l * r;
    case BinaryOp::div:
      if (r == 0) throw EvalError("division by zero", n);
      return l / r;
    case BinaryOp::pow: return std::pow(l, r);
  }
  return 0;
}

inline double Expr::eval(const Call& x, double n) {
  switch (x.fn) {
    case Function::sqrt: return std::sqrt(x.args[0](n));
    case Function::abs: return std::abs(x.args[0](n));
    case Function::min: return std::min(x.args[0](n), x.args[1](n));
    case Function::max: return std::max(x.args[0](n), x.args[1](n));
  }
  return 0;
}

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  Expr parse() {
    Expr e = expression();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ExprError(msg, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr expression() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) lhs = Expr::binary(BinaryOp::add, lhs, term());
      else if (accept('-')) lhs = Expr::binary(BinaryOp::sub, lhs, term());
      else return lhs;
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = Expr::binary(BinaryOp::mul, lhs, unary());
      else if (accept('/')) lhs = Expr::binary(BinaryOp::div, lhs, unary());
      else return lhs;
    }
  }

  Expr unary() {
    if (accept('-')) return Expr::negate(unary());
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) return Expr::binary(BinaryOp::pow, base, unary());
    return base;
  }

  Expr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expression();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string_view name = text_.substr(start, pos_ - start);
      if (name == "n") return Expr::variable();
      Function fn;
      std::size_t arity;
      if (name == "sqrt") fn = Function::sqrt, arity = 1;
      else if (name == "abs") fn = Function::abs, arity = 1;
      else if (name == "min") fn = Function::min, arity = 2;
      else if (name == "max") fn = Function::max, arity = 2;
      else {
        pos_ = start;
        fail("unknown identifier '" + std::string(name) + "'");
      }
      expect('(');
      std::vector<Expr> args{expression()};
      while (accept(',')) args.push_back(expression());
      if (args.size() != arity) fail("wrong number of arguments to " + std::string(name));
      expect(')');
      return Expr::call(fn, std::move(args));
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  Expr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        pos_ = p;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    const std::string literal(text_.substr(start, pos_ - start));
    if (literal == ".") {
      pos_ = start;
      fail("malformed number");
    }
    return Expr::number(std::strtod(literal.c_str(), nullptr));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Expr parse_expr(std::string_view text) { return detail::ExprParser(text).parse(); }

/// Minimal-parenthesis rendering that parses back to the same tree.
inline std::string to_string(const Expr& e) {
  // precedence: 1 = + -, 2 = * /, 3 = unary minus, 4 = ^, 5 = atoms
  struct Printer {
    static int prec(const Expr& e) {
      return std::visit(
          [](const auto& x) -> int {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Expr::Binary>) {
              switch (x.op) {
                case BinaryOp::add:
                case BinaryOp::sub: return 1;
                case BinaryOp::mul:
                case BinaryOp::div: return 2;
                case BinaryOp::pow: return 4;
              }
              return 0;
            } else if constexpr (std::is_same_v<T, Expr::Negate>) {
              return 3;
            } else if constexpr (std::is_same_v<T, Expr::Number>) {
              return x.value < 0 ? 3 : 5;
            } else {
              return 5;
            }
          },
          e.node());
    }
    static std::string wrap(const Expr& e, bool paren) {
      return paren ? "(" + print(e) + ")" : print(e);
    }
    static std::string print(const Expr& e) {
      return std::visit(
          [&](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Expr::Number>) {
              std::ostringstream os;
              os.precision(17);
              os << x.value;
              return os.str();
            } else if constexpr (std::is_same_v<T, Expr::Variable>) {
              return "n";
            } else if constexpr (std::is_same_v<T, Expr::Negate>) {
              return "-" + wrap(x.operand, prec(x.operand) < 3);
            } else if constexpr (std::is_same_v<T, Expr::Binary>) {
              const int p = prec(e);
              switch (x.op) {
                case BinaryOp::add:
                  return wrap(x.lhs, prec(x.lhs) < 1) + " + " + wrap(x.rhs, prec(x.rhs) <= 1);
                case BinaryOp::sub:
                  return wrap(x.lhs, prec(x.lhs) < 1) + " - " + wrap(x.rhs, prec(x.rhs) <= 1);
                case BinaryOp::mul:
                  return wrap(x.lhs, prec(x.lhs) < 2) + " * " + wrap(x.rhs, prec(x.rhs) <= 2);
                case BinaryOp::div:
                  return wrap(x.lhs, prec(x.lhs) < 2) + " / " + wrap(x.rhs, prec(x.rhs) <= 2);
                case BinaryOp::pow:
                  // base binds tighter than ^; exponent may be a unary chain
                  return wrap(x.lhs, prec(x.lhs) <= p) + "^" + wrap(x.rhs, prec(x.rhs) < 3);
              }
              return {};
            } else {
              static const char* names[] = {"sqrt", "abs", "min", "max"};
              std::string s = names[static_cast<int>(x.fn)];
              s += '(';
              for (std::size_t i = 0; i < x.args.size(); ++i) s += (i ? ", " : "") + print(x.args[i]);
              return s + ')';
            }
          },
          e.node());
    }
  };
  return Printer::print(e);
}

// ---------------------------------------------------------------------------
// Asymptotics as n -> infinity

/// Leading behavior c * n^p of an expression. `zero` marks an expression that
/// vanishes identically for large n.
struct Asymptote {
  double coefficient{0};
  double exponent{0};
  bool zero{false};
};

namespace detail {

inline std::optional<Asymptote> combine_sum(const Asymptote& l, const Asymptote& r) {
  if (l.zero) return r;
  if (r.zero) return l;
  constexpr double eps = 1e-12;
  if (l.exponent > r.exponent + eps) return l;
  if (r.exponent > l.exponent + eps) return r;
  const double c = l.coefficient + r.coefficient;
  if (std::abs(c) <= eps * std::max(std::abs(l.coefficient), std::abs(r.coefficient)))
    return std::nullopt;  // leading terms cancel; next order unknown
  return Asymptote{c, l.exponent, false};
}

inline std::optional<Asymptote> leading_term(const Expr& e) {
  return std::visit(
      [&](const auto& x) -> std::optional<Asymptote> {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::Number>) {
          return x.value == 0 ? Asymptote{0, 0, true} : Asymptote{x.value, 0, false};
        } else if constexpr (std::is_same_v<T, Expr::Variable>) {
          return Asymptote{1, 1, false};
        } else if constexpr (std::is_same_v<T, Expr::Negate>) {
          auto a = leading_term(x.operand);
          if (a) a->coefficient = -a->coefficient;
          return a;
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          auto l = leading_term(x.lhs);
          if (!l) return std::nullopt;
          if (x.op == BinaryOp::pow) {
            if (x.rhs.depends_on_n()) return std::nullopt;
            const double k = x.rhs(1.0);
            if (l->zero) return k > 0 ? std::optional<Asymptote>(Asymptote{0, 0, true}) : std::nullopt;
            if (l->coefficient < 0 && k != std::floor(k)) return std::nullopt;
            return Asymptote{std::pow(l->coefficient, k), l->exponent * k, false};
          }
          auto r = leading_term(x.rhs);
          if (!r) return std::nullopt;
          switch (x.op) {
            case BinaryOp::add: return combine_sum(*l, *r);
            case BinaryOp::sub: return combine_sum(*l, Asymptote{-r->coefficient, r->exponent, r->zero});
            case BinaryOp::mul:
              if (l->zero || r->zero) return Asymptote{0, 0, true};
              return Asymptote{l->coefficient * r->coefficient, l->exponent + r->exponent, false};
            case BinaryOp::div:
              if (r->zero) return std::nullopt;
              if (l->zero) return Asymptote{0, 0, true};
              return Asymptote{l->coefficient / r->coefficient, l->exponent - r->exponent, false};
            default: return std::nullopt;
          }
        } else {
          std::vector<Asymptote> args;
          for (const auto& a : x.args) {
            auto v = leading_term(a);
            if (!v) return std::nullopt;
            args.push_back(*v);
          }
          switch (x.fn) {
            case Function::sqrt:
              if (args[0].zero) return args[0];
              if (args[0].coefficient < 0) return std::nullopt;
              return Asymptote{std::sqrt(args[0].coefficient), args[0].exponent / 2, false};
            case Function::abs:
              return Asymptote{std::abs(args[0].coefficient), args[0].exponent, args[0].zero};
            case Function::min:
            case Function::max: {
              auto diff = combine_sum(args[0], Asymptote{-args[1].coefficient, args[1].exponent, args[1].zero});
              if (!diff) return args[0];  // asymptotically equal leading terms
              const bool first_larger = !diff->zero && diff->coefficient > 0;
              const bool pick_first = (x.fn == Function::max) == first_larger || diff->zero;
              return pick_first ? args[0] : args[1];
            }
          }
          return std::nullopt;
        }
      },
      e.node());
}

}  // namespace detail

/// Leading-order behavior, or nullopt when it cannot be determined
/// symbolically (cancellation, n-dependent exponents, negative roots).
inline std::optional<Asymptote> asymptote(const Expr& e) { return detail::leading_term(e); }

}  // namespace magschro
