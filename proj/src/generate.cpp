#include "unirate/generate.hpp"

#include "unirate/error.hpp"

namespace unirate {

namespace {

void check_indices(const IndexSet& s, int hi, const char* what) {
  for (int i : s)
    if (i < 1 || i > hi) throw Error(ErrorKind::OutOfRange, std::string(what) + " index " + std::to_string(i));
}

const NodeCoding& node_of(const CodingParams& w, int k) {
  if (k < 1 || k > static_cast<int>(w.nodes.size())) throw Error(ErrorKind::OutOfRange, "node " + std::to_string(k));
  return w.nodes[k - 1];
}

std::map<std::string, Rational> rate_sum(const CodingParams& w, const IndexSet& s) {
  std::map<std::string, Rational> lhs;
  for (int i : s) lhs[w.rate_name(i)] += Rational(1);
  return lhs;
}

std::int64_t subset_count(std::size_t n, std::int64_t cap, int k) {
  if (n >= 62 || (std::int64_t{1} << n) > cap)
    throw Error(ErrorKind::Blowup, "node " + std::to_string(k) + " needs 2^" + std::to_string(n) + " subsets");
  return std::int64_t{1} << n;
}

IndexSet pick(const IndexSet& from, std::int64_t mask) {
  IndexSet out;
  for (std::size_t i = 0; i < from.size(); ++i)
    if (mask >> i & 1) out.push_back(from[i]);
  return out;
}

LinearInequality make_row(const CodingParams& w, const IndexSet& s, Sense sense, AffineRateExpr rhs,
                          Origin origin) {
  LinearInequality row;
  row.lhs = rate_sum(w, s);
  row.sense = sense;
  row.rhs = std::move(rhs);
  row.origin = std::move(origin);
  return row;
}

}  // namespace

IndexSet bar_D(int k, const CodingParams& w) { return w.gamma_of(node_of(w, k).decode); }
IndexSet bar_B(int k, const CodingParams& w) {
  return index_minus(w.gamma_of(node_of(w, k).nonunique), bar_D(k, w));
}
IndexSet bar_W(int k, const CodingParams& w) {
  return index_minus(w.gamma_of(node_of(w, k).compress), bar_D(k, w));
}

IndexSet bar_S(const IndexSet& s, int k, const CodingParams& w) {
  check_indices(s, w.mu, "S");
  const auto& n = node_of(w, k);
  IndexSet out;
  for (int j : index_union(n.decode, n.nonunique))
    if (!index_intersect(w.codebook(j).gamma, s).empty()) out.push_back(j);
  return out;
}

IndexSet bar_T(const IndexSet& t, int k, const CodingParams& w) {
  check_indices(t, w.mu, "T");
  const IndexSet allowed = index_union(t, bar_D(k, w));
  IndexSet out;
  for (int j : node_of(w, k).compress)
    if (index_subset(w.codebook(j).gamma, allowed)) out.push_back(j);
  return out;
}

AffineRateExpr chain_information(const FactoredJoint& joint, const CodingParams& w, const IndexSet& set,
                                 const IndexSet& others, const VarSet& y) {
  AffineRateExpr total;
  for (int j : set) {
    const VarSet b = set_union(w.factors_of(index_union(index_below(set, j), others)), y);
    total += joint.cond_mutual_info(w.codebook(j).factors, b, w.factors_of(w.codebook(j).superpose));
  }
  return total;
}

InequalitySystem generate_system(const CodingParams& w, const Admn& admn, Mode mode, const GenerateOptions& opts) {
  if (opts.check_preconditions) {
    auto issues = validate_params(w, admn);
    if (!issues.empty()) throw Error(ErrorKind::PreconditionViolated, "omega invalid: " + issues.front());
    auto tm = check_target_match(w, admn);
    if (!tm.matched())
      throw Error(ErrorKind::PreconditionViolated,
                  "induced joint misses the target by " + std::to_string(tm.max_deviation) +
                      (tm.mismatches.empty() ? "" : "; " + tm.mismatches.front()));
  }
  return generate_system(w, induce(w, admn), mode, opts);
}

InequalitySystem generate_system(const CodingParams& w, const Induced& induced, Mode mode,
                                 const GenerateOptions& opts) {
  if (mode == Mode::Corollary1 && !is_omega_prime(w))
    throw Error(ErrorKind::PreconditionViolated, "corollary mode needs nu = mu and Gamma_j = {j} u A_j");
  const std::string tag = !opts.system_tag.empty() ? opts.system_tag : mode == Mode::Theorem1 ? "theorem1" : "corollary1";
  InequalitySystem sys;
  for (int i = 1; i <= w.mu; ++i) sys.variables.push_back(w.rate_name(i));
  const FactoredJoint& joint = induced.joint;
  for (int k = 1; k <= static_cast<int>(w.nodes.size()); ++k) {
    const auto& n = w.nodes[k - 1];
    const VarSet& y = induced.observation.at(k - 1);
    const IndexSet db = index_union(n.decode, n.nonunique);
    Origin base{tag, k, "", {}, y};
    if (mode == Mode::Theorem1) {
      const IndexSet dbar = bar_D(k, w);
      const IndexSet pool = index_union(dbar, bar_B(k, w));
      const std::int64_t np = subset_count(pool.size(), opts.subset_cap, k);
      for (std::int64_t mask = 1; mask < np; ++mask) {
        const IndexSet s = pick(pool, mask);
        if (index_intersect(s, dbar).empty()) continue;
        const IndexSet sbar = bar_S(s, k, w);
        Origin o = base;
        o.kind = "packing";
        o.subset = s;
        sys.rows.push_back(make_row(w, s, Sense::Less,
                                    chain_information(joint, w, sbar, index_minus(db, sbar), y), std::move(o)));
      }
      const IndexSet wbar = bar_W(k, w);
      const std::int64_t nc = subset_count(wbar.size(), opts.subset_cap, k);
      for (std::int64_t mask = 1; mask < nc; ++mask) {
        const IndexSet t = pick(wbar, mask);
        const IndexSet tbar = bar_T(t, k, w);
        Origin o = base;
        o.kind = "covering";
        o.subset = t;
        sys.rows.push_back(
            make_row(w, t, Sense::Greater, chain_information(joint, w, tbar, n.decode, y), std::move(o)));
      }
    } else {
      const std::int64_t np = subset_count(db.size(), opts.subset_cap, k);
      for (std::int64_t mask = 1; mask < np; ++mask) {
        const IndexSet s = pick(db, mask);
        if (index_intersect(s, n.decode).empty()) continue;
        const IndexSet sc = index_minus(db, s);
        bool closed = true;
        for (int j : sc) closed = closed && index_subset(w.codebook(j).superpose, sc);
        if (!closed) continue;
        Origin o = base;
        o.kind = "packing";
        o.subset = s;
        sys.rows.push_back(make_row(w, s, Sense::Less, chain_information(joint, w, s, sc, y), std::move(o)));
      }
      const std::int64_t nc = subset_count(n.compress.size(), opts.subset_cap, k);
      for (std::int64_t mask = 1; mask < nc; ++mask) {
        const IndexSet t = pick(n.compress, mask);
        bool closed = true;
        for (int j : t) closed = closed && index_subset(index_intersect(w.codebook(j).superpose, n.compress), t);
        if (!closed) continue;
        Origin o = base;
        o.kind = "covering";
        o.subset = t;
        sys.rows.push_back(
            make_row(w, t, Sense::Greater, chain_information(joint, w, t, n.decode, y), std::move(o)));
      }
    }
  }
  sort_canonical(sys.rows);
  return sys;
}

RelaxedPair lemma1_relaxed_bounds(const CodingParams& w, const Induced& induced, int k, const IndexSet& s,
                                  const IndexSet& s_prime, const IndexSet& t, const IndexSet& t_prime) {
  const auto& n = node_of(w, k);
  const VarSet& y = induced.observation.at(k - 1);
  const IndexSet dbar = bar_D(k, w);
  const IndexSet db = index_union(n.decode, n.nonunique);
  if (!index_subset(s, index_union(dbar, bar_B(k, w))) || index_intersect(s, dbar).empty())
    throw Error(ErrorKind::PreconditionViolated, "S must lie in the decodable indices and meet Gamma_D");
  const IndexSet sbar = bar_S(s, k, w);
  if (!index_subset(s_prime, sbar)) throw Error(ErrorKind::PreconditionViolated, "S' must lie inside bar S");
  const IndexSet dropped = index_minus(sbar, s_prime);
  const IndexSet sbar_c = index_minus(db, sbar);
  for (int j : dropped)
    if (!index_subset(w.codebook(j).superpose, index_union(index_below(dropped, j), sbar_c)))
      throw Error(ErrorKind::PreconditionViolated,
                  "A_" + std::to_string(j) + " escapes (S \\ S')[j] u S^c");
  if (t.empty() || !index_subset(t, bar_W(k, w))) throw Error(ErrorKind::PreconditionViolated, "T must be a nonempty subset of bar W");
  if (!index_subset(bar_T(t, k, w), t_prime) || !index_subset(t_prime, n.compress))
    throw Error(ErrorKind::PreconditionViolated, "T' must contain bar T and lie in W_k");
  RelaxedPair out;
  out.packing = make_row(w, s, Sense::Less, chain_information(induced.joint, w, s_prime, index_minus(db, s_prime), y),
                         Origin{"lemma1", k, "packing", s, y});
  out.covering = make_row(w, t, Sense::Greater, chain_information(induced.joint, w, t_prime, n.decode, y),
                          Origin{"lemma1", k, "covering", t, y});
  return out;
}

}  // namespace unirate
