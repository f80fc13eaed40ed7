#pragma once

// Brute-force pmf over named finite variables, independent of the library's FactoredJoint.

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace oracle {

inline double h2(double p) {
  if (p <= 0 || p >= 1) return 0.0;
  return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

struct Pmf {
  std::vector<std::string> names;
  std::map<std::vector<int>, double> cells;

  // independent noise variables with the given pmfs, mapped through f into `names`
  static Pmf build(std::vector<std::string> names, const std::vector<std::vector<double>>& noise,
                   const std::function<std::vector<int>(const std::vector<int>&)>& f) {
    Pmf p;
    p.names = std::move(names);
    std::vector<int> v(noise.size(), 0);
    while (true) {
      double pr = 1.0;
      for (std::size_t i = 0; i < v.size(); ++i) pr *= noise[i][v[i]];
      if (pr > 0) p.cells[f(v)] += pr;
      std::size_t i = v.size();
      while (i > 0) {
        --i;
        if (++v[i] < static_cast<int>(noise[i].size())) break;
        v[i] = 0;
        if (i == 0) return p;
      }
      if (v.empty()) return p;
    }
  }

  int pos(const std::string& n) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == n) return static_cast<int>(i);
    return -1;
  }

  double H(const std::vector<std::string>& vars) const {
    std::map<std::vector<int>, double> m;
    for (const auto& [c, pr] : cells) {
      std::vector<int> key;
      for (const auto& n : vars) key.push_back(c[pos(n)]);
      m[key] += pr;
    }
    double h = 0;
    for (const auto& [k, pr] : m)
      if (pr > 0) h -= pr * std::log2(pr);
    return h;
  }

  double I(std::vector<std::string> a, std::vector<std::string> b, std::vector<std::string> c = {}) const {
    auto cat = [](std::vector<std::string> x, const std::vector<std::string>& y) {
      x.insert(x.end(), y.begin(), y.end());
      return x;
    };
    return H(cat(a, c)) + H(cat(b, c)) - H(cat(cat(a, b), c)) - H(c);
  }
};

}  // namespace oracle
