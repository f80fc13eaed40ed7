#include "unirate/fm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "unirate/error.hpp"

namespace unirate {

namespace {

struct Row {
  std::map<std::string, Rational> lhs;
  AffineRateExpr rhs;
  bool strict = true;
  std::vector<int> hist;  // original rows combined into this one, sorted
  Origin origin;
};

Row scaled(const Row& r, const Rational& s) {
  Row out = r;
  for (auto& [n, c] : out.lhs) c *= s;
  out.rhs = s * r.rhs;
  return out;
}

bool constant_only(const Row& r) { return r.lhs.empty() && r.rhs.coeffs.empty(); }

// positive scale making the first nonzero coefficient +-1
Rational unit_scale(const Row& r) {
  if (!r.lhs.empty()) return Rational(1) / r.lhs.begin()->second.abs();
  if (!r.rhs.coeffs.empty()) return Rational(1) / r.rhs.coeffs.begin()->second.abs();
  return Rational(1);
}

std::string key_of(const Row& r) {
  std::string k;
  for (const auto& [n, c] : r.lhs) k += n + "=" + c.str() + ";";
  k += "|";
  for (const auto& [n, c] : r.rhs.coeffs) k += n + "=" + c.str() + ";";
  return k;
}

// keep, per direction, the tightest row
std::vector<Row> dedupe(std::vector<Row> rows) {
  std::map<std::string, std::size_t> seen;
  std::vector<Row> out;
  for (auto& r : rows) {
    Row n = scaled(r, unit_scale(r));
    const std::string k = key_of(n);
    auto it = seen.find(k);
    if (it == seen.end()) {
      seen.emplace(k, out.size());
      out.push_back(std::move(n));
      continue;
    }
    Row& old = out[it->second];
    const double d = n.rhs.constant - old.rhs.constant;
    if (d < -1e-12 || (std::abs(d) <= 1e-12 && n.strict && !old.strict)) old = std::move(n);
  }
  return out;
}

Row combine(const Row& p, const Row& n, const std::string& v) {
  const Rational a = p.lhs.at(v);
  const Rational b = -n.lhs.at(v);
  Row out = scaled(p, Rational(1) / a);
  Row m = scaled(n, Rational(1) / b);
  for (const auto& [name, c] : m.lhs) out.lhs[name] += c;
  for (auto it = out.lhs.begin(); it != out.lhs.end();)
    it = it->second.is_zero() ? out.lhs.erase(it) : std::next(it);
  out.rhs += m.rhs;
  out.strict = p.strict || n.strict;
  out.hist.clear();
  std::set_union(p.hist.begin(), p.hist.end(), n.hist.begin(), n.hist.end(), std::back_inserter(out.hist));
  out.hist.erase(std::unique(out.hist.begin(), out.hist.end()), out.hist.end());
  out.origin = Origin{"fm", 0, "", {}, {}};
  return out;
}

InequalitySystem to_system(const std::vector<Row>& rows, const std::vector<std::string>& vars, bool infeasible) {
  InequalitySystem sys;
  sys.variables = vars;
  sys.infeasible = infeasible;
  for (const auto& r : rows) {
    LinearInequality li;
    li.lhs = r.lhs;
    li.sense = Sense::Less;
    li.rhs = r.rhs;
    li.strict = r.strict;
    li.origin = r.origin;
    sys.rows.push_back(std::move(li));
  }
  return sys;
}

std::int64_t lcm64(std::int64_t a, std::int64_t b) { return a / std::gcd(a, b) * b; }

}  // namespace

InequalitySystem working_form(const InequalitySystem& sys) {
  InequalitySystem out = sys;
  for (auto& row : out.rows) {
    if (row.sense == Sense::Greater) {
      for (auto& [n, c] : row.lhs) c = -c;
      row.rhs = -row.rhs;
      row.sense = Sense::Less;
    }
    for (auto it = row.lhs.begin(); it != row.lhs.end();)
      it = it->second.is_zero() ? row.lhs.erase(it) : std::next(it);
  }
  return out;
}

FmResult fourier_motzkin_stages(const InequalitySystem& sys, const std::vector<std::string>& eliminate) {
  const InequalitySystem wf = working_form(sys);
  std::vector<Row> rows;
  bool infeasible = sys.infeasible;
  bool all_strict = true, all_weak = true;
  for (std::size_t i = 0; i < wf.rows.size(); ++i) {
    const auto& li = wf.rows[i];
    rows.push_back(Row{li.lhs, li.rhs, li.strict, {static_cast<int>(i)}, li.origin});
    all_strict = all_strict && li.strict;
    all_weak = all_weak && !li.strict;
  }
  // Chernikov's history bound is only applied when every row has the same strictness
  const bool chernikov = all_strict || all_weak;

  std::vector<std::string> remaining;
  for (const auto& v : eliminate)
    if (std::find(remaining.begin(), remaining.end(), v) == remaining.end()) remaining.push_back(v);
  std::vector<std::string> vars;
  for (const auto& v : wf.variables)
    if (std::find(remaining.begin(), remaining.end(), v) == remaining.end()) vars.push_back(v);

  FmResult res;
  double worst_constant = 0.0;
  auto sift = [&](std::vector<Row>& in) {
    std::vector<Row> kept;
    for (auto& r : in) {
      if (!constant_only(r)) {
        kept.push_back(std::move(r));
        continue;
      }
      // 0 < c
      if (r.rhs.constant < -kClosureTol) {
        infeasible = true;
        worst_constant = std::min(worst_constant, r.rhs.constant);
      }
    }
    in = std::move(kept);
  };
  sift(rows);
  rows = dedupe(std::move(rows));
  std::size_t done = 0;
  while (!remaining.empty()) {
    std::size_t best = 0;
    long best_cost = std::numeric_limits<long>::max();
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      long p = 0, n = 0;
      for (const auto& r : rows) {
        auto it = r.lhs.find(remaining[i]);
        if (it == r.lhs.end()) continue;
        (it->second.sign() > 0 ? p : n)++;
      }
      const long cost = p * n - p - n;
      if (cost < best_cost) {
        best_cost = cost;
        best = i;
      }
    }
    const std::string v = remaining[best];
    remaining.erase(remaining.begin() + best);
    std::vector<std::string> in_play = vars;
    in_play.push_back(v);
    in_play.insert(in_play.end(), remaining.begin(), remaining.end());
    res.stages.push_back(FmStage{v, to_system(rows, in_play, infeasible)});

    std::vector<Row> pos, neg, next;
    for (auto& r : rows) {
      auto it = r.lhs.find(v);
      if (it == r.lhs.end())
        next.push_back(std::move(r));
      else
        (it->second.sign() > 0 ? pos : neg).push_back(std::move(r));
    }
    ++done;
    for (const auto& p : pos)
      for (const auto& n : neg) {
        Row c = combine(p, n, v);
        if (chernikov && c.hist.size() > done + 1) continue;
        next.push_back(std::move(c));
      }
    sift(next);
    rows = dedupe(std::move(next));
  }
  if (infeasible) {
    Row marker;
    marker.rhs.constant = worst_constant < 0 ? worst_constant : -1.0;
    marker.origin = Origin{"fm", 0, "infeasible", {}, {}};
    rows.push_back(marker);
  }
  res.projected = to_system(rows, vars, infeasible);
  return res;
}

RateRegion fourier_motzkin(const InequalitySystem& sys, const std::vector<std::string>& eliminate) {
  return to_region(fourier_motzkin_stages(sys, eliminate).projected);
}

RateRegion to_region(const InequalitySystem& projected) {
  const InequalitySystem wf = working_form(projected);
  std::vector<Row> rows;
  for (const auto& li : wf.rows) {
    Row r;
    r.lhs = li.lhs;
    for (const auto& [n, c] : li.rhs.coeffs) r.lhs[n] -= c;
    for (auto it = r.lhs.begin(); it != r.lhs.end();)
      it = it->second.is_zero() ? r.lhs.erase(it) : std::next(it);
    r.rhs.constant = li.rhs.constant;
    r.strict = li.strict;
    r.origin = li.origin;
    if (r.lhs.empty() && r.rhs.constant >= -kClosureTol && !projected.infeasible) continue;
    rows.push_back(std::move(r));
  }
  rows = dedupe(std::move(rows));
  RateRegion out;
  out.infeasible = projected.infeasible;
  for (auto& r : rows) {
    LinearInequality li;
    li.strict = r.strict;
    li.origin = r.origin;
    li.origin.observation.clear();
    if (!r.lhs.empty()) {
      std::int64_t den = 1;
      for (const auto& [n, c] : r.lhs) den = lcm64(den, c.den());
      std::int64_t g = 0;
      for (const auto& [n, c] : r.lhs) g = std::gcd(g, (c * Rational(den)).num());
      const Rational f = Rational(den) / Rational(g < 0 ? -g : g);
      for (auto& [n, c] : r.lhs) c *= f;
      r.rhs.constant *= f.to_double();
    }
    bool all_negative = !r.lhs.empty();
    for (const auto& [n, c] : r.lhs) all_negative = all_negative && c.sign() < 0;
    li.sense = Sense::Less;
    if (all_negative) {
      for (auto& [n, c] : r.lhs) c = -c;
      r.rhs.constant = -r.rhs.constant;
      li.sense = Sense::Greater;
    }
    li.lhs = r.lhs;
    li.rhs = r.rhs;
    out.rows.push_back(std::move(li));
  }
  std::sort(out.rows.begin(), out.rows.end(), [](const LinearInequality& a, const LinearInequality& b) {
    return std::make_pair(format_linear(a.lhs), a.str(12)) < std::make_pair(format_linear(b.lhs), b.str(12));
  });
  for (const auto& r : out.rows)
    for (const auto& [n, c] : r.lhs)
      if (std::find(out.variables.begin(), out.variables.end(), n) == out.variables.end()) out.variables.push_back(n);
  std::sort(out.variables.begin(), out.variables.end());
  return out;
}

namespace {

// does a (alpha . R < ca) imply b (beta . R < cb)?
bool implies(const LinearInequality& a, const LinearInequality& b, bool nonneg) {
  std::map<std::string, std::pair<double, double>> coef;  // name -> (alpha, beta)
  for (const auto& [n, c] : a.lhs) coef[n].first = c.to_double();
  for (const auto& [n, c] : b.lhs) coef[n].second = c.to_double();
  const double ca = a.rhs.constant, cb = b.rhs.constant;
  double lo = 0.0, hi = std::numeric_limits<double>::infinity();
  bool lo_open = true;
  if (!nonneg) {
    // beta must be a positive multiple of alpha
    double lambda = -1;
    for (const auto& [n, ab] : coef) {
      if (ab.first == 0 && ab.second == 0) continue;
      if (ab.first == 0 || ab.second == 0) return false;
      const double l = ab.second / ab.first;
      if (l <= 0 || (lambda > 0 && std::abs(l - lambda) > 1e-12 * std::max(1.0, l))) return false;
      lambda = l;
    }
    if (lambda < 0) return false;
    lo = hi = lambda;
    lo_open = false;
  } else {
    for (const auto& [n, ab] : coef) {
      const auto [al, be] = ab;
      if (al > 0) {
        const double l = be / al;
        if (l > lo || (l == lo && !lo_open)) {
          lo = l;
          lo_open = false;
        }
      } else if (al < 0) {
        hi = std::min(hi, be / al);
      } else if (be > 0) {
        return false;
      }
    }
    if (lo > hi + 1e-15) return false;
  }
  const bool need_strict = b.strict && !a.strict;
  auto ok = [&](double v) { return need_strict ? v < cb - 1e-12 : v <= cb + 1e-12; };
  if (ca >= 0) {
    if (!lo_open || lo > 0) return ok(lo * ca);
    // lambda may be taken arbitrarily close to 0
    return need_strict ? cb > 1e-12 : cb >= -1e-12;
  }
  if (std::isinf(hi)) return true;
  return ok(hi * ca);
}

LinearInequality less_form(const LinearInequality& r) {
  LinearInequality out = r;
  if (r.sense == Sense::Greater) {
    for (auto& [n, c] : out.lhs) c = -c;
    out.rhs = -out.rhs;
    out.sense = Sense::Less;
  }
  return out;
}

}  // namespace

RateRegion prune_numeric(const RateRegion& region, const std::map<std::string, double>& bounds,
                         bool nonnegative_symbols) {
  RateRegion out;
  out.infeasible = region.infeasible;
  std::vector<LinearInequality> rows;
  for (const auto& r0 : region.rows) {
    LinearInequality r = less_form(r0);
    for (const auto& [n, v] : bounds) {
      auto it = r.lhs.find(n);
      if (it != r.lhs.end()) {
        r.rhs.constant -= it->second.to_double() * v;
        r.lhs.erase(it);
      }
      auto jt = r.rhs.coeffs.find(n);
      if (jt != r.rhs.coeffs.end()) {
        r.rhs.constant += jt->second.to_double() * v;
        r.rhs.coeffs.erase(jt);
      }
    }
    if (!r.rhs.coeffs.empty()) throw Error(ErrorKind::PreconditionViolated, "prune needs constant right-hand sides");
    if (r.lhs.empty()) {
      if (r.rhs.constant >= -kClosureTol) continue;
      out.infeasible = true;
    }
    rows.push_back(std::move(r));
  }
  std::vector<bool> removed(rows.size(), false);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.size() && !removed[i]; ++j) {
      if (i == j || removed[j] || rows[j].lhs.empty()) continue;
      if (!implies(rows[j], rows[i], nonnegative_symbols)) continue;
      // for mutually implying rows keep the earlier one
      if (implies(rows[i], rows[j], nonnegative_symbols) && i < j) continue;
      removed[i] = true;
    }
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (!removed[i]) {
      bool all_negative = !rows[i].lhs.empty();
      for (const auto& [n, c] : rows[i].lhs) all_negative = all_negative && c.sign() < 0;
      if (all_negative) {
        for (auto& [n, c] : rows[i].lhs) c = -c;
        rows[i].rhs = -rows[i].rhs;
        rows[i].sense = Sense::Greater;
      }
      out.rows.push_back(rows[i]);
    }
  out.variables = region.variables;
  return out;
}

std::optional<std::map<std::string, double>> lift(const FmResult& fm, std::map<std::string, double> point,
                                                  std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (auto it = fm.stages.rbegin(); it != fm.stages.rend(); ++it) {
    const std::string& v = it->variable;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (const auto& row : it->before.rows) {
      auto c = row.lhs.find(v);
      if (c == row.lhs.end()) continue;
      double rest = row.rhs.evaluate(point);
      for (const auto& [n, a] : row.lhs)
        if (n != v) rest -= a.to_double() * point.at(n);
      const double bound = rest / c->second.to_double();
      if (c->second.sign() > 0)
        hi = std::min(hi, bound);
      else
        lo = std::max(lo, bound);
    }
    if (lo > hi + 1e-12) return std::nullopt;
    double val;
    if (std::isfinite(lo) && std::isfinite(hi))
      val = lo + (hi - lo) * u(rng);
    else if (std::isfinite(lo))
      val = lo + u(rng);
    else if (std::isfinite(hi))
      val = hi - u(rng);
    else
      val = u(rng);
    point[v] = val;
  }
  return point;
}

}  // namespace unirate
