#include "lintegra/laurent.hpp"

#include <algorithm>
#include <sstream>

namespace lintegra {

LaurentSeries LaurentSeries::from_rational(const Rational& c, int window) {
  LaurentSeries s;
  s.window_ = window;
  if (!c.is_zero()) {
    s.lead_ = 0;
    s.coeffs_ = {c};
  }
  return s;
}

LaurentSeries LaurentSeries::epsilon(int window) {
  return monomial(Rational(1), 1, window);
}

LaurentSeries LaurentSeries::monomial(const Rational& c, int exponent, int window) {
  LaurentSeries s;
  s.window_ = window;
  if (!c.is_zero()) {
    s.lead_ = exponent;
    s.coeffs_ = {c};
  }
  return s;
}

LaurentSeries LaurentSeries::from_terms(int lead, std::vector<Rational> coeffs, int horizon,
                                        int window) {
  LaurentSeries s;
  s.lead_ = lead;
  s.coeffs_ = std::move(coeffs);
  s.horizon_ = horizon;
  s.window_ = window;
  s.normalize();
  return s;
}

int LaurentSeries::lead() const {
  if (is_zero()) throw DomainError("leading exponent of the zero series");
  if (coeffs_.empty()) throw PrecisionExhausted(horizon_);
  return lead_;
}

Rational LaurentSeries::coeff(int exponent) const {
  if (exponent >= horizon_) throw PrecisionExhausted(horizon_);
  if (coeffs_.empty() || exponent < lead_) return Rational(0);
  size_t i = static_cast<size_t>(exponent - lead_);
  if (i >= coeffs_.size()) return Rational(0);
  return coeffs_[i];
}

void LaurentSeries::normalize() {
  // Drop known-zero leading terms, then anything at or past the horizon.
  size_t skip = 0;
  while (skip < coeffs_.size() && coeffs_[skip].is_zero()) ++skip;
  if (skip) {
    coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<long>(skip));
    lead_ += static_cast<int>(skip);
  }
  if (horizon_ != kExactHorizon && !coeffs_.empty() &&
      lead_ + static_cast<int>(coeffs_.size()) > horizon_) {
    coeffs_.resize(static_cast<size_t>(horizon_ - lead_));
  }
  // Window clamp: keep at most window_ terms past the lead.
  if (!coeffs_.empty()) {
    int cap = lead_ + window_;
    if (horizon_ > cap) horizon_ = cap;
    if (horizon_ != kExactHorizon && lead_ + static_cast<int>(coeffs_.size()) > horizon_) {
      coeffs_.resize(static_cast<size_t>(horizon_ - lead_));
    }
  }
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
  if (coeffs_.empty()) lead_ = 0;
}

LaurentSeries LaurentSeries::operator-() const {
  LaurentSeries r(*this);
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) {
  LaurentSeries r;
  r.window_ = std::min(a.window_, b.window_);
  r.horizon_ = std::min(a.horizon_, b.horizon_);
  if (a.coeffs_.empty() && b.coeffs_.empty()) {
    r.normalize();
    return r;
  }
  int lo = std::min(a.coeffs_.empty() ? b.lead_ : a.lead_,
                    b.coeffs_.empty() ? a.lead_ : b.lead_);
  int hi_a = a.lead_ + static_cast<int>(a.coeffs_.size());
  int hi_b = b.lead_ + static_cast<int>(b.coeffs_.size());
  int hi = std::max(a.coeffs_.empty() ? lo : hi_a, b.coeffs_.empty() ? lo : hi_b);
  if (r.horizon_ != kExactHorizon) hi = std::min(hi, r.horizon_);
  if (hi <= lo) {
    r.normalize();
    return r;
  }
  r.lead_ = lo;
  r.coeffs_.assign(static_cast<size_t>(hi - lo), Rational(0));
  auto accumulate = [&](const LaurentSeries& s) {
    for (size_t i = 0; i < s.coeffs_.size(); ++i) {
      int e = s.lead_ + static_cast<int>(i);
      if (e >= hi) break;
      r.coeffs_[static_cast<size_t>(e - lo)] += s.coeffs_[i];
    }
  };
  accumulate(a);
  accumulate(b);
  r.normalize();
  return r;
}

LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return a + (-b); }

LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
  LaurentSeries r;
  r.window_ = std::min(a.window_, b.window_);
  if (a.is_zero() || b.is_zero()) {
    r.window_ = std::min(a.window_, b.window_);
    return r;
  }
  long ha = (a.horizon_ == kExactHorizon) ? kExactHorizon
                                          : static_cast<long>(a.horizon_) + b.lead_bound();
  long hb = (b.horizon_ == kExactHorizon) ? kExactHorizon
                                          : static_cast<long>(b.horizon_) + a.lead_bound();
  long h = std::min({ha, hb, static_cast<long>(kExactHorizon)});
  r.horizon_ = static_cast<int>(h);
  if (!a.coeffs_.empty() && !b.coeffs_.empty()) {
    int lo = a.lead_ + b.lead_;
    int hi = lo + static_cast<int>(a.coeffs_.size() + b.coeffs_.size()) - 1;
    if (r.horizon_ != kExactHorizon) hi = std::min(hi, r.horizon_);
    if (hi > lo) {
      r.lead_ = lo;
      r.coeffs_.assign(static_cast<size_t>(hi - lo), Rational(0));
      for (size_t i = 0; i < a.coeffs_.size(); ++i) {
        for (size_t j = 0; j < b.coeffs_.size(); ++j) {
          int e = a.lead_ + static_cast<int>(i) + b.lead_ + static_cast<int>(j);
          if (e >= hi) break;
          r.coeffs_[static_cast<size_t>(e - lo)] += a.coeffs_[i] * b.coeffs_[j];
        }
      }
    }
  }
  r.normalize();
  return r;
}

LaurentSeries LaurentSeries::inverse() const {
  if (is_zero()) throw DomainError("inverse of the zero series");
  if (coeffs_.empty()) throw PrecisionExhausted(horizon_);
  LaurentSeries r;
  r.window_ = window_;
  r.lead_ = -lead_;
  // Relative precision carries over: K - L known terms past the lead.
  r.horizon_ = (horizon_ == kExactHorizon) ? -lead_ + window_
                                           : horizon_ - 2 * lead_;
  int terms = std::min(r.horizon_ - r.lead_, window_);
  if (terms <= 0) {
    r.coeffs_.clear();
    r.lead_ = 0;
    r.horizon_ = std::min(r.horizon_, r.lead_);
    return r;
  }
  std::vector<Rational> b(static_cast<size_t>(terms), Rational(0));
  Rational inv0 = coeffs_[0].inverse();
  b[0] = inv0;
  for (int m = 1; m < terms; ++m) {
    Rational acc(0);
    for (int k = 1; k <= m; ++k) {
      Rational ak = (static_cast<size_t>(k) < coeffs_.size()) ? coeffs_[static_cast<size_t>(k)]
                                                              : Rational(0);
      if (!ak.is_zero()) acc += ak * b[static_cast<size_t>(m - k)];
    }
    b[static_cast<size_t>(m)] = -inv0 * acc;
  }
  r.coeffs_ = std::move(b);
  r.normalize();
  return r;
}

LaurentSeries operator/(const LaurentSeries& a, const LaurentSeries& b) {
  return a * b.inverse();
}

LaurentSeries LaurentSeries::pow(unsigned k) const {
  LaurentSeries acc = from_rational(Rational(1), window_);
  LaurentSeries base = *this;
  while (k) {
    if (k & 1u) acc = acc * base;
    if (k >>= 1u) base = base * base;
  }
  return acc;
}

std::string LaurentSeries::str() const {
  std::ostringstream os;
  if (coeffs_.empty()) {
    if (horizon_ == kExactHorizon) return "0";
    os << "O(e^" << horizon_ << ")";
    return os.str();
  }
  bool first = true;
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    int e = lead_ + static_cast<int>(i);
    os << coeffs_[i].str();
    if (e != 0) os << "*e^" << e;
  }
  if (horizon_ != kExactHorizon) os << " + O(e^" << horizon_ << ")";
  return os.str();
}

}  // namespace lintegra
