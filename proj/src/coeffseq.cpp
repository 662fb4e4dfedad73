#include "lintegra/coeffseq.hpp"

#include <set>
#include <stdexcept>

#include "lintegra/errors.hpp"

namespace lintegra {

CoeffSeq CoeffSeq::constant(Rational v) {
  CoeffSeq s(Kind::Closed);
  s.expr_ = expr_const(v);
  return s;
}

CoeffSeq CoeffSeq::closed(ExprPtr expr_in_n) {
  for (const auto& sym : free_symbols(expr_in_n)) {
    if (sym != "n") throw DomainError("coefficient expression may only reference n, got " + sym);
  }
  CoeffSeq s(Kind::Closed);
  s.expr_ = std::move(expr_in_n);
  return s;
}

CoeffSeq CoeffSeq::table(std::vector<Rational> values, long offset,
                         std::optional<long> period) {
  if (values.empty()) throw DomainError("coefficient table must be nonempty");
  if (period && (*period <= 0 || static_cast<size_t>(*period) > values.size()))
    throw DomainError("table period must be in [1, table size]");
  CoeffSeq s(Kind::Table);
  s.values_ = std::move(values);
  s.offset_ = offset;
  s.period_ = period;
  return s;
}

CoeffSeq CoeffSeq::fn(std::function<Rational(long)> f, std::string description) {
  CoeffSeq s(Kind::Fn);
  s.fn_ = std::move(f);
  s.desc_ = std::move(description);
  return s;
}

Rational CoeffSeq::at(long n) const {
  switch (kind_) {
    case Kind::Closed:
      return eval_expr<Rational>(expr_, {{"n", Rational(n)}}, Rational(0));
    case Kind::Table: {
      long i = n - offset_;
      if (period_) {
        long p = *period_;
        i %= p;
        if (i < 0) i += p;
      } else if (i < 0 || static_cast<size_t>(i) >= values_.size()) {
        throw DomainError("coefficient table exhausted at n = " + std::to_string(n));
      }
      return values_[static_cast<size_t>(i)];
    }
    case Kind::Fn:
      return fn_(n);
  }
  throw std::logic_error("unreachable");
}

CoeffSeq CoeffSeq::shifted(long k) const {
  switch (kind_) {
    case Kind::Closed: {
      CoeffSeq s(Kind::Closed);
      s.expr_ = shift_n(expr_, k);
      return s;
    }
    case Kind::Table: {
      CoeffSeq s(*this);
      s.offset_ -= k;
      return s;
    }
    case Kind::Fn: {
      auto f = fn_;
      return fn([f, k](long n) { return f(n + k); },
                desc_ + " shifted by " + std::to_string(k));
    }
  }
  throw std::logic_error("unreachable");
}

std::optional<Rational> CoeffSeq::constant_value() const {
  switch (kind_) {
    case Kind::Closed:
      if (free_symbols(expr_).empty())
        return eval_expr<Rational>(expr_, {}, Rational(0));
      return std::nullopt;
    case Kind::Table: {
      for (const auto& v : values_)
        if (v != values_.front()) return std::nullopt;
      if (!period_ && values_.size() > 0 && offset_ != 0) {
        // finite non-periodic table still throws outside its range
      }
      return values_.front();
    }
    case Kind::Fn:
      return std::nullopt;
  }
  return std::nullopt;
}

std::string CoeffSeq::str() const {
  switch (kind_) {
    case Kind::Closed:
      return expr_str(expr_);
    case Kind::Table: {
      std::string out = "table ";
      for (size_t i = 0; i < values_.size(); ++i) {
        if (i) out += ", ";
        out += values_[i].str();
      }
      if (period_) out += " period " + std::to_string(*period_);
      if (offset_ != 0) out += " offset " + std::to_string(offset_);
      return out;
    }
    case Kind::Fn:
      return desc_;
  }
  return "";
}

}  // namespace lintegra
