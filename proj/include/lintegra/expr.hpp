#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>

#include "lintegra/errors.hpp"
#include "lintegra/laurent.hpp"
#include "lintegra/primefield.hpp"
#include "lintegra/ratfun.hpp"
#include "lintegra/rational.hpp"

namespace lintegra {

enum class ExprKind { Const, Sym, Add, Sub, Mul, Div, Neg, Pow };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Immutable expression node. Constants are non-negative by construction
// (negative values are represented as Neg(Const)), so printing roundtrips.
struct Expr {
  ExprKind kind;
  Rational value;     // Const
  std::string name;   // Sym
  ExprPtr lhs, rhs;   // binary ops; Neg and Pow use lhs only
  unsigned exponent;  // Pow

  static ExprPtr make_const(Rational v);
  static ExprPtr make_sym(std::string name);
  static ExprPtr make_bin(ExprKind k, ExprPtr a, ExprPtr b);
  static ExprPtr make_neg(ExprPtr a);
  static ExprPtr make_pow(ExprPtr base, unsigned e);
};

// Folding builders for programmatic construction (0/1 absorption, constant
// folding). The parser never folds, preserving the written structure.
ExprPtr expr_const(const Rational& v);
ExprPtr expr_sym(const std::string& name);
ExprPtr expr_add(ExprPtr a, ExprPtr b);
ExprPtr expr_sub(ExprPtr a, ExprPtr b);
ExprPtr expr_mul(ExprPtr a, ExprPtr b);
ExprPtr expr_div(ExprPtr a, ExprPtr b);
ExprPtr expr_neg(ExprPtr a);
ExprPtr expr_pow(ExprPtr a, unsigned e);

// Grammar: + - * / ^ with standard precedence, left associativity, unary
// minus, parentheses, integer literals, identifiers. ^ takes a non-negative
// integer literal exponent. Free symbols must lie in `declared`.
ExprPtr parse_expr(const std::string& text, const std::set<std::string>& declared);

std::string expr_str(const ExprPtr& e);
bool expr_equal(const ExprPtr& a, const ExprPtr& b);
std::set<std::string> free_symbols(const ExprPtr& e);
ExprPtr expr_subst(const ExprPtr& e, const std::string& name, const ExprPtr& replacement);
// n -> n + k
ExprPtr shift_n(const ExprPtr& e, long k);
ExprPtr expr_diff(const ExprPtr& e, const std::string& var);

// --- generic ring plumbing -------------------------------------------------

inline Rational ring_from_rational(const Rational&, const Rational& v) { return v; }
inline double ring_from_rational(const double&, const Rational& v) { return v.to_double(); }
template <std::uint64_t P>
Fp<P> ring_from_rational(const Fp<P>&, const Rational& v) {
  return Fp<P>::from_rational(v);
}
inline LaurentSeries ring_from_rational(const LaurentSeries& proto, const Rational& v) {
  return LaurentSeries::from_rational(v, proto.window());
}
template <class R2>
RatFun<R2> ring_from_rational(const RatFun<R2>&, const Rational& v) {
  return RatFun<R2>::constant(ring_from_rational(R2(0), v));
}

inline bool ring_is_zero(const Rational& v) { return v.is_zero(); }
inline bool ring_is_zero(double v) { return v == 0.0; }
template <std::uint64_t P>
bool ring_is_zero(const Fp<P>& v) {
  return v.is_zero();
}
inline bool ring_is_zero(const LaurentSeries& s) { return s.is_zero(); }
template <class R2>
bool ring_is_zero(const RatFun<R2>& f) {
  return f.is_zero();
}

// Evaluate over any scalar ring; `proto` carries ring context (prime, series
// window) for constants. Division by an exact ring zero is a DomainError;
// series division may instead surface PrecisionExhausted.
template <class R>
R eval_expr(const ExprPtr& e, const std::map<std::string, R>& env, const R& proto) {
  switch (e->kind) {
    case ExprKind::Const:
      return ring_from_rational(proto, e->value);
    case ExprKind::Sym: {
      auto it = env.find(e->name);
      if (it == env.end()) throw DomainError("unbound symbol '" + e->name + "'");
      return it->second;
    }
    case ExprKind::Add:
      return eval_expr(e->lhs, env, proto) + eval_expr(e->rhs, env, proto);
    case ExprKind::Sub:
      return eval_expr(e->lhs, env, proto) - eval_expr(e->rhs, env, proto);
    case ExprKind::Mul:
      return eval_expr(e->lhs, env, proto) * eval_expr(e->rhs, env, proto);
    case ExprKind::Div: {
      R num = eval_expr(e->lhs, env, proto);
      R den = eval_expr(e->rhs, env, proto);
      if (ring_is_zero(den)) throw DomainError("division by zero in expression");
      return num / den;
    }
    case ExprKind::Neg:
      return -eval_expr(e->lhs, env, proto);
    case ExprKind::Pow: {
      R base = eval_expr(e->lhs, env, proto);
      R acc = ring_from_rational(proto, Rational(1));
      unsigned k = e->exponent;
      while (k) {
        if (k & 1u) acc = acc * base;
        if (k >>= 1u) base = base * base;
      }
      return acc;
    }
  }
  throw DomainError("corrupt expression node");
}

}  // namespace lintegra
