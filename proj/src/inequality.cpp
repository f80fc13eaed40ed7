#include "unirate/inequality.hpp"

#include <algorithm>
#include <tuple>

namespace unirate {

std::string format_linear(const std::map<std::string, Rational>& terms) {
  std::string out;
  bool first = true;
  for (const auto& [name, c] : terms) {
    if (c.is_zero()) continue;
    const Rational a = c.abs();
    if (first)
      out += c.sign() < 0 ? "-" : "";
    else
      out += c.sign() < 0 ? " - " : " + ";
    if (a != Rational(1)) out += a.str() + " ";
    out += name;
    first = false;
  }
  return first ? "0" : out;
}

std::string LinearInequality::str(int precision) const {
  std::string op = sense == Sense::Less ? "<" : ">";
  if (!strict) op += "=";
  return format_linear(lhs) + " " + op + " " + rhs.str(precision);
}

double slack(const LinearInequality& row, const std::map<std::string, double>& values) {
  double v = -row.rhs.evaluate(values);
  for (const auto& [name, c] : row.lhs) v += c.to_double() * values.at(name);
  return v;
}

bool InequalitySystem::satisfied(const std::map<std::string, double>& values, double tol) const {
  if (infeasible) return false;
  for (const auto& row : rows) {
    const double s = slack(row, values);
    if (row.sense == Sense::Less ? s >= tol : s <= -tol) return false;
  }
  return true;
}

std::string InequalitySystem::str(int precision) const {
  std::string out;
  if (infeasible) out += "infeasible\n";
  for (const auto& row : rows) out += row.str(precision) + "\n";
  return out;
}

void sort_canonical(std::vector<LinearInequality>& rows) {
  auto key = [](const LinearInequality& r) {
    std::vector<std::pair<std::string, std::string>> lhs;
    for (const auto& [n, c] : r.lhs) lhs.push_back({n, c.str()});
    return std::make_tuple(r.origin.node, r.origin.system, r.origin.kind, r.origin.subset, lhs, r.str(12));
  };
  std::stable_sort(rows.begin(), rows.end(),
                   [&](const LinearInequality& a, const LinearInequality& b) { return key(a) < key(b); });
}

}  // namespace unirate
