#pragma once

#include <limits>
#include <string>
#include <vector>

#include "lintegra/errors.hpp"
#include "lintegra/rational.hpp"

namespace lintegra {

// Horizon value meaning "every coefficient is known exactly" (the series is a
// finite Laurent polynomial).
inline constexpr int kExactHorizon = std::numeric_limits<int>::max() / 4;

// Truncated Laurent series in a formal perturbation e with exact rational
// coefficients. Coefficients with exponent < horizon() are known; the rest
// are not. Each series carries a window: after any operation at most
// `window` coefficients past the leading one are retained, so precision
// degrades in a tracked way instead of silently.
class LaurentSeries {
 public:
  LaurentSeries() : lead_(0), horizon_(kExactHorizon), window_(kDefaultWindow) {}

  static constexpr int kDefaultWindow = 12;

  static LaurentSeries from_rational(const Rational& c, int window = kDefaultWindow);
  // The perturbation itself.
  static LaurentSeries epsilon(int window = kDefaultWindow);
  static LaurentSeries monomial(const Rational& c, int exponent, int window = kDefaultWindow);
  // coeffs[i] is the coefficient of e^(lead+i); horizon marks the first
  // unknown exponent (kExactHorizon for none).
  static LaurentSeries from_terms(int lead, std::vector<Rational> coeffs, int horizon,
                                  int window = kDefaultWindow);

  // Exactly the zero series (not merely zero to known precision).
  bool is_zero() const { return coeffs_.empty() && horizon_ == kExactHorizon; }
  bool is_exact() const { return horizon_ == kExactHorizon; }
  // True when a nonzero leading term is known.
  bool lead_known() const { return !coeffs_.empty(); }
  int lead() const;
  int horizon() const { return horizon_; }
  int window() const { return window_; }
  // Coefficient of e^exponent; throws PrecisionExhausted past the horizon.
  Rational coeff(int exponent) const;

  LaurentSeries operator-() const;
  friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b);
  friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b);
  friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b);
  friend LaurentSeries operator/(const LaurentSeries& a, const LaurentSeries& b);
  LaurentSeries inverse() const;
  LaurentSeries pow(unsigned k) const;

  bool is_one() const {
    return is_exact() && coeffs_.size() == 1 && lead_ == 0 && coeffs_[0].is_one();
  }

  std::string str() const;

 private:
  // Effective lower bound on the leading exponent (horizon when no nonzero
  // coefficient is known yet).
  int lead_bound() const { return coeffs_.empty() ? horizon_ : lead_; }
  void normalize();

  int lead_;                     // exponent of coeffs_[0] when nonempty
  std::vector<Rational> coeffs_; // coeffs_[0] != 0 when nonempty
  int horizon_;
  int window_;
};

}  // namespace lintegra
