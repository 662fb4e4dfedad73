#include "lintegra/expr.hpp"

#include <cctype>

namespace lintegra {

ExprPtr Expr::make_const(Rational v) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Const;
  e->value = std::move(v);
  return e;
}

ExprPtr Expr::make_sym(std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Sym;
  e->name = std::move(name);
  return e;
}

ExprPtr Expr::make_bin(ExprKind k, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  return e;
}

ExprPtr Expr::make_neg(ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Neg;
  e->lhs = std::move(a);
  return e;
}

ExprPtr Expr::make_pow(ExprPtr base, unsigned exp) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Pow;
  e->lhs = std::move(base);
  e->exponent = exp;
  return e;
}

namespace {

bool is_const(const ExprPtr& e, long v) {
  return e->kind == ExprKind::Const && e->value == Rational(v);
}

}  // namespace

ExprPtr expr_const(const Rational& v) {
  if (v.sign() < 0) return Expr::make_neg(Expr::make_const(-v));
  return Expr::make_const(v);
}

ExprPtr expr_sym(const std::string& name) { return Expr::make_sym(name); }

ExprPtr expr_add(ExprPtr a, ExprPtr b) {
  if (is_const(a, 0)) return b;
  if (is_const(b, 0)) return a;
  if (a->kind == ExprKind::Const && b->kind == ExprKind::Const)
    return expr_const(a->value + b->value);
  return Expr::make_bin(ExprKind::Add, std::move(a), std::move(b));
}

ExprPtr expr_sub(ExprPtr a, ExprPtr b) {
  if (is_const(b, 0)) return a;
  if (a->kind == ExprKind::Const && b->kind == ExprKind::Const)
    return expr_const(a->value - b->value);
  if (is_const(a, 0)) return expr_neg(std::move(b));
  return Expr::make_bin(ExprKind::Sub, std::move(a), std::move(b));
}

ExprPtr expr_mul(ExprPtr a, ExprPtr b) {
  if (is_const(a, 0) || is_const(b, 0)) return Expr::make_const(Rational(0));
  if (is_const(a, 1)) return b;
  if (is_const(b, 1)) return a;
  if (a->kind == ExprKind::Const && b->kind == ExprKind::Const)
    return expr_const(a->value * b->value);
  return Expr::make_bin(ExprKind::Mul, std::move(a), std::move(b));
}

ExprPtr expr_div(ExprPtr a, ExprPtr b) {
  if (is_const(b, 1)) return a;
  if (is_const(a, 0) && !is_const(b, 0)) return a;
  if (a->kind == ExprKind::Const && b->kind == ExprKind::Const && !b->value.is_zero())
    return expr_const(a->value / b->value);
  return Expr::make_bin(ExprKind::Div, std::move(a), std::move(b));
}

ExprPtr expr_neg(ExprPtr a) {
  if (a->kind == ExprKind::Const && a->value.is_zero()) return a;
  if (a->kind == ExprKind::Neg) return a->lhs;
  return Expr::make_neg(std::move(a));
}

ExprPtr expr_pow(ExprPtr a, unsigned e) {
  if (e == 0) return Expr::make_const(Rational(1));
  if (e == 1) return a;
  return Expr::make_pow(std::move(a), e);
}

// --- parser ------------------------------------------------------------------

namespace {

class Parser {
 public:
  Parser(const std::string& text, const std::set<std::string>& declared)
      : s_(text), declared_(declared) {}

  ExprPtr run() {
    ExprPtr e = parse_sum();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, pos_);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  ExprPtr parse_sum() {
    ExprPtr e = parse_term();
    for (;;) {
      char c = peek();
      if (c != '+' && c != '-') return e;
      ++pos_;
      e = Expr::make_bin(c == '+' ? ExprKind::Add : ExprKind::Sub, e, parse_term());
    }
  }

  ExprPtr parse_term() {
    ExprPtr e = parse_factor();
    for (;;) {
      char c = peek();
      if (c != '*' && c != '/') return e;
      ++pos_;
      e = Expr::make_bin(c == '*' ? ExprKind::Mul : ExprKind::Div, e, parse_factor());
    }
  }

  ExprPtr parse_factor() {
    if (peek() == '-') {
      ++pos_;
      return Expr::make_neg(parse_factor());
    }
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_atom();
    if (peek() != '^') return base;
    ++pos_;
    skip_ws();
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
      fail("exponent must be a non-negative integer literal");
    std::string digits = read_digits();
    unsigned long e = std::stoul(digits);
    if (e > 64u) fail("exponent too large");
    return Expr::make_pow(base, static_cast<unsigned>(e));
  }

  ExprPtr parse_atom() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      ExprPtr e = parse_sum();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      return Expr::make_const(Rational(mpz_class(read_digits())));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      std::string id;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
        id += s_[pos_++];
      }
      if (!declared_.count(id)) {
        pos_ = start;
        fail("undeclared symbol '" + id + "'");
      }
      return Expr::make_sym(id);
    }
    if (c == '\0') fail("unexpected end of expression");
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string read_digits() {
    std::string out;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
      out += s_[pos_++];
    return out;
  }

  const std::string& s_;
  const std::set<std::string>& declared_;
  std::size_t pos_ = 0;
};

}  // namespace

ExprPtr parse_expr(const std::string& text, const std::set<std::string>& declared) {
  return Parser(text, declared).run();
}

// --- printing ----------------------------------------------------------------

namespace {

// Precedence: Add/Sub 1, Mul/Div 2, Neg 3, Pow 4, atoms 5.
int prec(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Add:
    case ExprKind::Sub:
      return 1;
    case ExprKind::Mul:
    case ExprKind::Div:
      return 2;
    case ExprKind::Neg:
      return 3;
    case ExprKind::Pow:
      return 4;
    default:
      return 5;
  }
}

void render(const ExprPtr& e, std::string& out);

void render_child(const ExprPtr& child, int min_prec, std::string& out) {
  if (prec(*child) < min_prec) {
    out += '(';
    render(child, out);
    out += ')';
  } else {
    render(child, out);
  }
}

void render(const ExprPtr& e, std::string& out) {
  switch (e->kind) {
    case ExprKind::Const:
      out += e->value.str();
      return;
    case ExprKind::Sym:
      out += e->name;
      return;
    case ExprKind::Add:
      render_child(e->lhs, 1, out);
      out += " + ";
      render_child(e->rhs, 2, out);
      return;
    case ExprKind::Sub:
      render_child(e->lhs, 1, out);
      out += " - ";
      render_child(e->rhs, 2, out);
      return;
    case ExprKind::Mul:
      render_child(e->lhs, 2, out);
      out += "*";
      render_child(e->rhs, 3, out);
      return;
    case ExprKind::Div:
      render_child(e->lhs, 2, out);
      out += "/";
      render_child(e->rhs, 3, out);
      return;
    case ExprKind::Neg:
      out += "-";
      render_child(e->lhs, 3, out);
      return;
    case ExprKind::Pow:
      render_child(e->lhs, 5, out);
      out += "^" + std::to_string(e->exponent);
      return;
  }
}

}  // namespace

std::string expr_str(const ExprPtr& e) {
  std::string out;
  render(e, out);
  return out;
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case ExprKind::Const:
      return a->value == b->value;
    case ExprKind::Sym:
      return a->name == b->name;
    case ExprKind::Neg:
      return expr_equal(a->lhs, b->lhs);
    case ExprKind::Pow:
      return a->exponent == b->exponent && expr_equal(a->lhs, b->lhs);
    default:
      return expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
  }
}

std::set<std::string> free_symbols(const ExprPtr& e) {
  std::set<std::string> out;
  struct Walk {
    std::set<std::string>& out;
    void operator()(const ExprPtr& e) {
      if (!e) return;
      if (e->kind == ExprKind::Sym) out.insert(e->name);
      (*this)(e->lhs);
      (*this)(e->rhs);
    }
  } walk{out};
  walk(e);
  return out;
}

ExprPtr expr_subst(const ExprPtr& e, const std::string& name, const ExprPtr& replacement) {
  switch (e->kind) {
    case ExprKind::Const:
      return e;
    case ExprKind::Sym:
      return e->name == name ? replacement : e;
    case ExprKind::Neg:
      return expr_neg(expr_subst(e->lhs, name, replacement));
    case ExprKind::Pow:
      return expr_pow(expr_subst(e->lhs, name, replacement), e->exponent);
    case ExprKind::Add:
      return expr_add(expr_subst(e->lhs, name, replacement),
                      expr_subst(e->rhs, name, replacement));
    case ExprKind::Sub:
      return expr_sub(expr_subst(e->lhs, name, replacement),
                      expr_subst(e->rhs, name, replacement));
    case ExprKind::Mul:
      return expr_mul(expr_subst(e->lhs, name, replacement),
                      expr_subst(e->rhs, name, replacement));
    case ExprKind::Div:
      return expr_div(expr_subst(e->lhs, name, replacement),
                      expr_subst(e->rhs, name, replacement));
  }
  throw DomainError("corrupt expression node");
}

ExprPtr shift_n(const ExprPtr& e, long k) {
  if (k == 0) return e;
  ExprPtr n = expr_sym("n");
  ExprPtr shifted = k > 0 ? expr_add(n, expr_const(Rational(k)))
                          : expr_sub(n, expr_const(Rational(-k)));
  return expr_subst(e, "n", shifted);
}

ExprPtr expr_diff(const ExprPtr& e, const std::string& var) {
  switch (e->kind) {
    case ExprKind::Const:
      return Expr::make_const(Rational(0));
    case ExprKind::Sym:
      return Expr::make_const(Rational(e->name == var ? 1 : 0));
    case ExprKind::Neg:
      return expr_neg(expr_diff(e->lhs, var));
    case ExprKind::Add:
      return expr_add(expr_diff(e->lhs, var), expr_diff(e->rhs, var));
    case ExprKind::Sub:
      return expr_sub(expr_diff(e->lhs, var), expr_diff(e->rhs, var));
    case ExprKind::Mul:
      return expr_add(expr_mul(expr_diff(e->lhs, var), e->rhs),
                      expr_mul(e->lhs, expr_diff(e->rhs, var)));
    case ExprKind::Div:
      return expr_div(expr_sub(expr_mul(expr_diff(e->lhs, var), e->rhs),
                               expr_mul(e->lhs, expr_diff(e->rhs, var))),
                      expr_pow(e->rhs, 2));
    case ExprKind::Pow: {
      if (e->exponent == 0) return Expr::make_const(Rational(0));
      ExprPtr inner = expr_diff(e->lhs, var);
      ExprPtr scaled = expr_mul(expr_const(Rational(static_cast<long>(e->exponent))),
                                expr_pow(e->lhs, e->exponent - 1));
      return expr_mul(scaled, inner);
    }
  }
  throw DomainError("corrupt expression node");
}

}  // namespace lintegra
