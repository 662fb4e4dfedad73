#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lintegra/expr.hpp"
#include "lintegra/rational.hpp"

namespace lintegra {

// A rational-valued sequence in the step index n: a closed-form expression in
// n, a value table (optionally periodic), or an opaque callback. Immutable.
class CoeffSeq {
 public:
  CoeffSeq() : CoeffSeq(constant(Rational(0))) {}

  static CoeffSeq constant(Rational v);
  static CoeffSeq closed(ExprPtr expr_in_n);
  // values[i] is the value at n = offset + i; periodic tables wrap, finite
  // tables throw DomainError outside their range.
  static CoeffSeq table(std::vector<Rational> values, long offset = 0,
                        std::optional<long> period = std::nullopt);
  static CoeffSeq fn(std::function<Rational(long)> f, std::string description);

  Rational at(long n) const;
  // shifted(k).at(n) == at(n + k)
  CoeffSeq shifted(long k) const;
  // value if the sequence is provably constant, nullopt otherwise
  std::optional<Rational> constant_value() const;
  std::string str() const;

 private:
  enum class Kind { Closed, Table, Fn };
  CoeffSeq(Kind k) : kind_(k) {}

  Kind kind_;
  ExprPtr expr_;
  std::vector<Rational> values_;
  long offset_ = 0;
  std::optional<long> period_;
  std::function<Rational(long)> fn_;
  std::string desc_;
};

}  // namespace lintegra
