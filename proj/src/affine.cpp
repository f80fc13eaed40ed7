#include "unirate/affine.hpp"

#include <cmath>
#include <sstream>

#include "unirate/error.hpp"

namespace unirate {

AffineRateExpr AffineRateExpr::symbol(const std::string& name, Rational coef) {
  AffineRateExpr e;
  e.add_symbol(name, coef);
  return e;
}

Rational AffineRateExpr::coeff(const std::string& name) const {
  auto it = coeffs.find(name);
  return it == coeffs.end() ? Rational(0) : it->second;
}

void AffineRateExpr::add_symbol(const std::string& name, const Rational& coef) {
  Rational v = coeff(name) + coef;
  if (v.is_zero())
    coeffs.erase(name);
  else
    coeffs[name] = v;
}

double AffineRateExpr::evaluate(const std::map<std::string, double>& values) const {
  double v = constant;
  for (const auto& [name, c] : coeffs) {
    auto it = values.find(name);
    if (it == values.end()) throw Error(ErrorKind::UnknownFactor, "no value for rate symbol " + name);
    v += c.to_double() * it->second;
  }
  return v;
}

std::string AffineRateExpr::str(int precision) const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [name, c] : coeffs) {
    Rational a = c.abs();
    if (first) {
      if (c.sign() < 0) os << "-";
    } else {
      os << (c.sign() < 0 ? " - " : " + ");
    }
    if (a != Rational(1)) os << a.str() << " ";
    os << name;
    first = false;
  }
  os.setf(std::ios::fixed);
  os.precision(precision);
  if (first) {
    os << (constant == 0.0 ? 0.0 : constant);
  } else if (std::abs(constant) > 0.5 * std::pow(10.0, -precision)) {
    os << (constant < 0 ? " - " : " + ") << std::abs(constant);
  }
  return os.str();
}

AffineRateExpr& AffineRateExpr::operator+=(const AffineRateExpr& o) {
  constant += o.constant;
  for (const auto& [name, c] : o.coeffs) add_symbol(name, c);
  return *this;
}

AffineRateExpr& AffineRateExpr::operator-=(const AffineRateExpr& o) {
  constant -= o.constant;
  for (const auto& [name, c] : o.coeffs) add_symbol(name, -c);
  return *this;
}

AffineRateExpr AffineRateExpr::operator-() const {
  AffineRateExpr e;
  e -= *this;
  return e;
}

AffineRateExpr operator*(const Rational& s, const AffineRateExpr& a) {
  AffineRateExpr e;
  if (s.is_zero()) return e;
  e.constant = s.to_double() * a.constant;
  for (const auto& [name, c] : a.coeffs) e.coeffs[name] = s * c;
  return e;
}

}  // namespace unirate
