#pragma once

#include <map>
#include <string>

#include "unirate/rational.hpp"

namespace unirate {

// constant (bits) + sum of rational coefficients on named rate symbols
struct AffineRateExpr {
  double constant = 0.0;
  std::map<std::string, Rational> coeffs;

  AffineRateExpr() = default;
  explicit AffineRateExpr(double c) : constant(c) {}
  static AffineRateExpr symbol(const std::string& name, Rational coef = 1);

  bool has_symbols() const { return !coeffs.empty(); }
  Rational coeff(const std::string& name) const;
  void add_symbol(const std::string& name, const Rational& coef);
  double evaluate(const std::map<std::string, double>& values) const;
  std::string str(int precision = 4) const;

  AffineRateExpr& operator+=(const AffineRateExpr& o);
  AffineRateExpr& operator-=(const AffineRateExpr& o);
  AffineRateExpr operator-() const;
  friend AffineRateExpr operator+(AffineRateExpr a, const AffineRateExpr& b) { return a += b; }
  friend AffineRateExpr operator-(AffineRateExpr a, const AffineRateExpr& b) { return a -= b; }
  friend AffineRateExpr operator*(const Rational& s, const AffineRateExpr& a);

  friend bool operator==(const AffineRateExpr& a, const AffineRateExpr& b) {
    return a.constant == b.constant && a.coeffs == b.coeffs;
  }
};

}  // namespace unirate
