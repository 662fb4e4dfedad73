#include "lintegra/sparsepoly.hpp"

#include <algorithm>
#include <sstream>

#include "lintegra/errors.hpp"

namespace lintegra {

SparsePoly SparsePoly::constant(const Rational& c) {
  SparsePoly p;
  if (!c.is_zero()) p.terms_[{}] = c;
  return p;
}

SparsePoly SparsePoly::variable(const std::string& name) {
  SparsePoly p;
  p.terms_[{{name, 1u}}] = Rational(1);
  return p;
}

bool SparsePoly::is_constant() const {
  if (terms_.empty()) return true;
  return terms_.size() == 1 && terms_.begin()->first.empty();
}

Rational SparsePoly::constant_value() const {
  if (terms_.empty()) return Rational(0);
  if (!is_constant()) throw DomainError("polynomial is not constant");
  return terms_.begin()->second;
}

std::set<std::string> SparsePoly::free_vars() const {
  std::set<std::string> vars;
  for (const auto& [m, c] : terms_)
    for (const auto& [v, e] : m) vars.insert(v);
  return vars;
}

int SparsePoly::degree(const std::string& var) const {
  int d = 0;
  for (const auto& [m, c] : terms_) {
    auto it = m.find(var);
    if (it != m.end()) d = std::max(d, static_cast<int>(it->second));
  }
  return d;
}

int SparsePoly::total_degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) {
    int t = 0;
    for (const auto& [v, e] : m) t += static_cast<int>(e);
    d = std::max(d, t);
  }
  return d;
}

void SparsePoly::add_term(Monomial m, const Rational& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(std::move(m), c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

SparsePoly SparsePoly::operator-() const {
  SparsePoly r(*this);
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

SparsePoly operator+(const SparsePoly& a, const SparsePoly& b) {
  SparsePoly r(a);
  for (const auto& [m, c] : b.terms_) r.add_term(m, c);
  return r;
}

SparsePoly operator-(const SparsePoly& a, const SparsePoly& b) {
  SparsePoly r(a);
  for (const auto& [m, c] : b.terms_) r.add_term(m, -c);
  return r;
}

SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) {
  SparsePoly r;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      SparsePoly::Monomial m = ma;
      for (const auto& [v, e] : mb) m[v] += e;
      r.add_term(std::move(m), ca * cb);
    }
  }
  return r;
}

SparsePoly SparsePoly::scaled(const Rational& c) const {
  SparsePoly r;
  if (c.is_zero()) return r;
  for (const auto& [m, v] : terms_) r.terms_[m] = v * c;
  return r;
}

SparsePoly SparsePoly::pow(unsigned k) const {
  SparsePoly acc = constant(Rational(1)), base = *this;
  while (k) {
    if (k & 1u) acc = acc * base;
    if (k >>= 1u) base = base * base;
  }
  return acc;
}

std::vector<SparsePoly> SparsePoly::coeffs_in(const std::string& var) const {
  std::vector<SparsePoly> out(static_cast<size_t>(degree(var)) + 1);
  for (const auto& [m, c] : terms_) {
    Monomial rest = m;
    unsigned k = 0;
    auto it = rest.find(var);
    if (it != rest.end()) {
      k = it->second;
      rest.erase(it);
    }
    out[k].add_term(std::move(rest), c);
  }
  return out;
}

SparsePoly SparsePoly::subst(const std::string& var, const Rational& value) const {
  SparsePoly r;
  for (const auto& [m, c] : terms_) {
    Monomial rest = m;
    unsigned k = 0;
    auto it = rest.find(var);
    if (it != rest.end()) {
      k = it->second;
      rest.erase(it);
    }
    r.add_term(std::move(rest), c * value.pow(k));
  }
  return r;
}

SparsePoly SparsePoly::subst(const std::string& var, const SparsePoly& value) const {
  SparsePoly r;
  auto cs = coeffs_in(var);
  for (auto it = cs.rbegin(); it != cs.rend(); ++it) r = r * value + *it;
  return r;
}

SparsePoly SparsePoly::derivative(const std::string& var) const {
  SparsePoly r;
  for (const auto& [m, c] : terms_) {
    auto it = m.find(var);
    if (it == m.end()) continue;
    Monomial dm = m;
    unsigned e = it->second;
    if (e == 1) dm.erase(var);
    else dm[var] = e - 1;
    r.add_term(std::move(dm), c * Rational(static_cast<long>(e)));
  }
  return r;
}

Rational SparsePoly::eval(const std::map<std::string, Rational>& env) const {
  Rational acc(0);
  for (const auto& [m, c] : terms_) {
    Rational t = c;
    for (const auto& [v, e] : m) {
      auto it = env.find(v);
      if (it == env.end()) throw DomainError("unbound variable '" + v + "' in evaluation");
      t *= it->second.pow(e);
    }
    acc += t;
  }
  return acc;
}

UniPoly<Rational> SparsePoly::as_unipoly(const std::string& var) const {
  std::vector<Rational> cs(static_cast<size_t>(degree(var)) + 1, Rational(0));
  for (const auto& [m, c] : terms_) {
    unsigned k = 0;
    for (const auto& [v, e] : m) {
      if (v == var) {
        k = e;
      } else {
        throw DomainError("polynomial depends on '" + v + "', not univariate in '" + var + "'");
      }
    }
    cs[k] += c;
  }
  return UniPoly<Rational>(cs);
}

std::string SparsePoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c.str();
    for (const auto& [v, e] : m) {
      os << "*" << v;
      if (e > 1) os << "^" << e;
    }
  }
  return os.str();
}

PolyFrac::PolyFrac(SparsePoly num, SparsePoly den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw DomainError("fraction with zero denominator");
  normalize();
}

void PolyFrac::normalize() {
  if (num_.is_zero()) {
    den_ = SparsePoly::constant(Rational(1));
    return;
  }
  // Cancel the monomial content shared by every term of both parts.
  std::map<std::string, unsigned> content;
  bool start = true;
  auto fold = [&](const SparsePoly& p) {
    for (const auto& [m, c] : p.terms()) {
      if (start) {
        content = m;
        start = false;
        continue;
      }
      for (auto it = content.begin(); it != content.end();) {
        auto jt = m.find(it->first);
        if (jt == m.end()) {
          it = content.erase(it);
        } else {
          it->second = std::min(it->second, jt->second);
          ++it;
        }
      }
    }
  };
  fold(num_);
  fold(den_);
  if (!content.empty()) {
    auto strip = [&](const SparsePoly& p) {
      SparsePoly out;
      for (const auto& [m, c] : p.terms()) {
        SparsePoly::Monomial r = m;
        for (const auto& [v, e] : content) {
          auto it = r.find(v);
          if (it->second == e) {
            r.erase(it);
          } else {
            it->second -= e;
          }
        }
        SparsePoly mono = SparsePoly::constant(c);
        for (const auto& [v, e] : r) mono = mono * SparsePoly::variable(v).pow(e);
        out = out + mono;
      }
      return out;
    };
    num_ = strip(num_);
    den_ = strip(den_);
  }
  // Scale so the denominator's first term has coefficient 1.
  Rational l = den_.terms().begin()->second;
  if (!l.is_one()) {
    Rational inv = l.inverse();
    num_ = num_.scaled(inv);
    den_ = den_.scaled(inv);
  }
}

PolyFrac PolyFrac::operator-() const {
  PolyFrac r(*this);
  r.num_ = -r.num_;
  return r;
}

PolyFrac operator+(const PolyFrac& a, const PolyFrac& b) {
  return PolyFrac(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

PolyFrac operator-(const PolyFrac& a, const PolyFrac& b) {
  return PolyFrac(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

PolyFrac operator*(const PolyFrac& a, const PolyFrac& b) {
  return PolyFrac(a.num_ * b.num_, a.den_ * b.den_);
}

PolyFrac operator/(const PolyFrac& a, const PolyFrac& b) {
  if (b.is_zero()) throw DomainError("division by zero fraction");
  return PolyFrac(a.num_ * b.den_, a.den_ * b.num_);
}

PolyFrac PolyFrac::pow(unsigned k) const {
  PolyFrac acc = constant(Rational(1)), base = *this;
  while (k) {
    if (k & 1u) acc = acc * base;
    if (k >>= 1u) base = base * base;
  }
  return acc;
}

Rational PolyFrac::eval(const std::map<std::string, Rational>& env) const {
  Rational d = den_.eval(env);
  if (d.is_zero()) throw DomainError("fraction evaluation hits a zero denominator");
  return num_.eval(env) / d;
}

std::string PolyFrac::str() const {
  if (den_.is_constant() && den_.constant_value().is_one()) return num_.str();
  return "(" + num_.str() + ") / (" + den_.str() + ")";
}

}  // namespace lintegra
