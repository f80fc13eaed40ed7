#include "unirate/gaussian.hpp"

#include <cmath>

#include "unirate/error.hpp"

namespace unirate {

namespace {

constexpr double kPivot = 1e-12;

void expect_shape(Eigen::MatrixXd& m, int rows, int cols, const std::string& what) {
  if (m.size() == 0 && (rows == 0 || cols == 0 || (m.rows() == 0 && m.cols() == 0))) {
    m = Eigen::MatrixXd::Zero(rows, cols);
    return;
  }
  if (m.rows() != rows || m.cols() != cols)
    throw Error(ErrorKind::DimensionMismatch, what + " is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                                 ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
}

}  // namespace

Eigen::MatrixXd Agn::H(int k, int j) const {
  auto it = h.find({k, j});
  return it == h.end() ? Eigen::MatrixXd::Zero(r[k - 1], t[j - 1]) : it->second;
}

Eigen::MatrixXd Agn::Hp(int k, int j) const {
  auto it = hp.find({k, j});
  return it == hp.end() ? Eigen::MatrixXd::Zero(r[k - 1], r[j - 1]) : it->second;
}

double logdet2(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::DimensionMismatch, "determinant of a non-square matrix");
  if (m.size() == 0) return 0.0;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
  if (ldlt.info() != Eigen::Success) throw Error(ErrorKind::SingularCovariance, "factorization failed");
  double s = 0.0;
  const auto d = ldlt.vectorD();
  for (int i = 0; i < d.size(); ++i) {
    if (!(d[i] >= kPivot)) throw Error(ErrorKind::SingularCovariance, "pivot " + std::to_string(d[i]));
    s += std::log2(d[i]);
  }
  return s;
}

GaussianModel::GaussianModel(Agn agn, GaussianParams params) : agn_(std::move(agn)), params_(std::move(params)) {
  const int n = agn_.size();
  const auto& w = params_.skeleton;
  if (static_cast<int>(agn_.t.size()) != n || static_cast<int>(agn_.noise.size()) != n)
    throw Error(ErrorKind::DimensionMismatch, "agn needs r, t and noise per node");
  if (static_cast<int>(params_.nodes.size()) != n || static_cast<int>(w.nodes.size()) != n)
    throw Error(ErrorKind::DimensionMismatch, "gaussian params need one entry per node");
  if (static_cast<int>(params_.dims.size()) != w.nu()) throw Error(ErrorKind::DimensionMismatch, "dims need one entry per codebook");
  for (int k = 1; k <= n; ++k) {
    expect_shape(agn_.noise[k - 1], agn_.r[k - 1], agn_.r[k - 1], "noise " + std::to_string(k));
    for (int j = 1; j < k; ++j) {
      if (auto it = agn_.h.find({k, j}); it != agn_.h.end())
        expect_shape(it->second, agn_.r[k - 1], agn_.t[j - 1], "H" + std::to_string(k) + std::to_string(j));
      if (auto it = agn_.hp.find({k, j}); it != agn_.hp.end())
        expect_shape(it->second, agn_.r[k - 1], agn_.r[j - 1], "H'" + std::to_string(k) + std::to_string(j));
    }
    for (const auto& [key, m] : agn_.h)
      if (key.second >= key.first || key.first < 1 || key.first > n || key.second < 1)
        throw Error(ErrorKind::DimensionMismatch, "H block (" + std::to_string(key.first) + "," + std::to_string(key.second) + ") is not below the diagonal");
    for (const auto& [key, m] : agn_.hp)
      if (key.second >= key.first || key.first < 1 || key.first > n || key.second < 1)
        throw Error(ErrorKind::DimensionMismatch, "H' block (" + std::to_string(key.first) + "," + std::to_string(key.second) + ") is not below the diagonal");
  }
  layout_.owner.assign(w.nu(), 0);
  layout_.u_offset.assign(w.nu(), 0);
  IndexSet covered;
  for (int k = 1; k <= n; ++k) {
    const auto& nc = w.nodes[k - 1];
    for (int j : nc.decode)
      if (!std::binary_search(covered.begin(), covered.end(), j))
        throw Error(ErrorKind::DimensionMismatch, "D_" + std::to_string(k) + " decodes uncovered codebook " + std::to_string(j));
    int aw = 0, ad = 0, adw = 0;
    layout_.offset.push_back(layout_.total);
    for (int j : nc.compress) {
      if (j < 1 || j > w.nu() || layout_.owner[j - 1] != 0)
        throw Error(ErrorKind::DimensionMismatch, "codebook " + std::to_string(j) + " covered twice or out of range");
      layout_.owner[j - 1] = k;
      layout_.u_offset[j - 1] = layout_.total + aw;
      aw += params_.dims[j - 1];
    }
    for (int j : nc.decode) ad += params_.dims[j - 1];
    for (int j : index_union(nc.decode, nc.compress)) adw += params_.dims[j - 1];
    covered = index_union(covered, nc.compress);
    layout_.block.push_back(aw + agn_.r[k - 1]);
    layout_.total += aw + agn_.r[k - 1];
    auto& gn = params_.nodes[k - 1];
    const std::string ks = std::to_string(k);
    expect_shape(gn.g, aw, ad, "G_" + ks);
    expect_shape(gn.gp, aw, agn_.r[k - 1], "G'_" + ks);
    expect_shape(gn.lambda_u, aw, aw, "Lambda_U'_" + ks);
    expect_shape(gn.f, agn_.t[k - 1], adw, "F_" + ks);
    expect_shape(gn.fp, agn_.t[k - 1], agn_.r[k - 1], "F'_" + ks);
    if (aw > 0 && (gn.lambda_u - gn.lambda_u.transpose()).cwiseAbs().maxCoeff() > 1e-12)
      throw Error(ErrorKind::DimensionMismatch, "Lambda_U'_" + ks + " is not symmetric");
  }
  for (int j = 1; j <= w.nu(); ++j)
    if (layout_.owner[j - 1] == 0) throw Error(ErrorKind::DimensionMismatch, "codebook " + std::to_string(j) + " is never covered");
}

Eigen::MatrixXd GaussianModel::G_block(int k, int j) const {
  const auto& w = params_.skeleton;
  const auto& nk = w.nodes[k - 1];
  const auto& nj = w.nodes[j - 1];
  const int aw_k = layout_.block[k - 1] - agn_.r[k - 1];
  const int aw_j = layout_.block[j - 1] - agn_.r[j - 1];
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(aw_k, aw_j);
  int col_j = 0;
  for (int c : nj.compress) {
    const int a = params_.dims[c - 1];
    if (std::binary_search(nk.decode.begin(), nk.decode.end(), c)) {
      int col_k = 0;
      for (int d : nk.decode) {
        if (d == c) break;
        col_k += params_.dims[d - 1];
      }
      out.block(0, col_j, aw_k, a) = params_.nodes[k - 1].g.block(0, col_k, aw_k, a);
    }
    col_j += a;
  }
  return out;
}

Eigen::MatrixXd GaussianModel::F_block(int k, int j) const {
  const auto& w = params_.skeleton;
  const auto& nk = w.nodes[k - 1];
  const auto& nj = w.nodes[j - 1];
  const IndexSet dw = index_union(nk.decode, nk.compress);
  const int aw_j = layout_.block[j - 1] - agn_.r[j - 1];
  const int tk = agn_.t[k - 1];
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(tk, aw_j);
  int col_j = 0;
  for (int c : nj.compress) {
    const int a = params_.dims[c - 1];
    if (std::binary_search(dw.begin(), dw.end(), c)) {
      int col_k = 0;
      for (int d : dw) {
        if (d == c) break;
        col_k += params_.dims[d - 1];
      }
      out.block(0, col_j, tk, a) = params_.nodes[k - 1].f.block(0, col_k, tk, a);
    }
    col_j += a;
  }
  return out;
}

Eigen::MatrixXd GaussianModel::upsilon(int k, int j) const {
  if (!(j < k) || j < 1 || k > agn_.size()) throw Error(ErrorKind::DimensionMismatch, "upsilon needs j < k");
  const int aw_k = layout_.block[k - 1] - agn_.r[k - 1];
  const int aw_j = layout_.block[j - 1] - agn_.r[j - 1];
  const int rk = agn_.r[k - 1], rj = agn_.r[j - 1];
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(rk, aw_j);
  for (int i = j; i <= k - 1; ++i) s += agn_.H(k, i) * F_block(i, j);
  const Eigen::MatrixXd m = agn_.H(k, j) * params_.nodes[j - 1].fp + agn_.Hp(k, j);
  const Eigen::MatrixXd& gp = params_.nodes[k - 1].gp;
  Eigen::MatrixXd out(aw_k + rk, aw_j + rj);
  out.block(0, 0, aw_k, aw_j) = G_block(k, j) + gp * s;
  out.block(0, aw_j, aw_k, rj) = gp * m;
  out.block(aw_k, 0, rk, aw_j) = s;
  out.block(aw_k, aw_j, rk, rj) = m;
  return out;
}

Eigen::MatrixXd GaussianModel::phi(int k, int j) const {
  if (j > k || j < 1 || k > agn_.size()) throw Error(ErrorKind::DimensionMismatch, "phi needs 1 <= j <= k <= N");
  // Phi_ij for i = j..k, each from the ones below it
  std::vector<Eigen::MatrixXd> col;
  col.push_back(Eigen::MatrixXd::Identity(layout_.block[j - 1], layout_.block[j - 1]));
  for (int i = j + 1; i <= k; ++i) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(layout_.block[i - 1], layout_.block[j - 1]);
    for (int l = j; l < i; ++l) m += upsilon(i, l) * col[l - j];
    col.push_back(std::move(m));
  }
  return col.back();
}

Eigen::MatrixXd GaussianModel::phi_subset_sum(int k, int j) const {
  if (j > k || j < 1 || k > agn_.size()) throw Error(ErrorKind::DimensionMismatch, "phi needs 1 <= j <= k <= N");
  if (j == k) return Eigen::MatrixXd::Identity(layout_.block[k - 1], layout_.block[k - 1]);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(layout_.block[k - 1], layout_.block[j - 1]);
  const int inner = k - j - 1;
  for (int m = 0; m < (1 << inner); ++m) {
    std::vector<int> chain = {j};
    for (int i = 0; i < inner; ++i)
      if (m >> i & 1) chain.push_back(j + 1 + i);
    chain.push_back(k);
    Eigen::MatrixXd prod = upsilon(chain[1], chain[0]);
    for (std::size_t i = 2; i < chain.size(); ++i) prod = upsilon(chain[i], chain[i - 1]) * prod;
    out += prod;
  }
  return out;
}

Eigen::MatrixXd GaussianModel::lambda_psi(int j) const {
  const auto& gn = params_.nodes[j - 1];
  const Eigen::MatrixXd& ly = agn_.noise[j - 1];
  const int aw = layout_.block[j - 1] - agn_.r[j - 1];
  const int rj = agn_.r[j - 1];
  Eigen::MatrixXd out(aw + rj, aw + rj);
  out.block(0, 0, aw, aw) = gn.lambda_u + gn.gp * ly * gn.gp.transpose();
  out.block(0, aw, aw, rj) = gn.gp * ly;
  out.block(aw, 0, rj, aw) = ly * gn.gp.transpose();
  out.block(aw, aw, rj, rj) = ly;
  return out;
}

Eigen::MatrixXd GaussianModel::phi_global() const {
  const int n = agn_.size();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(layout_.total, layout_.total);
  for (int k = 1; k <= n; ++k)
    for (int j = 1; j <= k; ++j)
      out.block(layout_.offset[k - 1], layout_.offset[j - 1], layout_.block[k - 1], layout_.block[j - 1]) = phi(k, j);
  return out;
}

Eigen::MatrixXd GaussianModel::psi_covariance() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(layout_.total, layout_.total);
  for (int j = 1; j <= agn_.size(); ++j)
    out.block(layout_.offset[j - 1], layout_.offset[j - 1], layout_.block[j - 1], layout_.block[j - 1]) = lambda_psi(j);
  return out;
}

Eigen::MatrixXd GaussianModel::selector(const std::vector<GaussVar>& vars) const {
  int rows = 0;
  for (const auto& v : vars) {
    switch (v.kind) {
      case GaussVar::U:
        if (v.index < 1 || v.index > params_.skeleton.nu()) throw Error(ErrorKind::DimensionMismatch, "no U_" + std::to_string(v.index));
        rows += params_.dims[v.index - 1];
        break;
      case GaussVar::Y:
      case GaussVar::X:
        if (v.index < 1 || v.index > agn_.size()) throw Error(ErrorKind::DimensionMismatch, "no node " + std::to_string(v.index));
        rows += v.kind == GaussVar::Y ? agn_.r[v.index - 1] : agn_.t[v.index - 1];
        break;
    }
  }
  Eigen::MatrixXd sel = Eigen::MatrixXd::Zero(rows, layout_.total);
  int row = 0;
  for (const auto& v : vars) {
    if (v.kind == GaussVar::U) {
      const int a = params_.dims[v.index - 1];
      sel.block(row, layout_.u_offset[v.index - 1], a, a).setIdentity();
      row += a;
    } else if (v.kind == GaussVar::Y) {
      const int k = v.index, rk = agn_.r[k - 1];
      sel.block(row, layout_.offset[k - 1] + layout_.block[k - 1] - rk, rk, rk).setIdentity();
      row += rk;
    } else {
      const int k = v.index, tk = agn_.t[k - 1], rk = agn_.r[k - 1];
      for (int j = 1; j <= k; ++j) {
        const int aw_j = layout_.block[j - 1] - agn_.r[j - 1];
        sel.block(row, layout_.offset[j - 1], tk, aw_j) += F_block(k, j);
      }
      sel.block(row, layout_.offset[k - 1] + layout_.block[k - 1] - rk, tk, rk) += params_.nodes[k - 1].fp;
      row += tk;
    }
  }
  return sel;
}

Eigen::MatrixXd GaussianModel::joint_covariance(const std::vector<GaussVar>& vars) const {
  const Eigen::MatrixXd a = selector(vars) * phi_global();
  Eigen::MatrixXd c = a * psi_covariance() * a.transpose();
  return 0.5 * (c + c.transpose());
}

ObjectiveCheck GaussianModel::check_objective(const std::vector<QuadraticForm>& forms) const {
  std::vector<GaussVar> v;
  for (int k = 1; k <= agn_.size(); ++k) v.push_back({GaussVar::X, k});
  for (int k = 1; k <= agn_.size(); ++k) v.push_back({GaussVar::Y, k});
  const Eigen::MatrixXd cov = joint_covariance(v);
  ObjectiveCheck out;
  for (const auto& f : forms) {
    if (f.q.rows() != cov.rows() || f.q.cols() != cov.cols())
      throw Error(ErrorKind::DimensionMismatch, "objective " + f.name + " has the wrong size");
    const double e = (f.q * cov).trace();
    out.names.push_back(f.name);
    out.values.push_back(e);
    out.targets.push_back(f.target);
    // strict componentwise comparison with a relative margin
    if (!(e <= (1.0 - 1e-9) * f.target)) out.pass = false;
  }
  return out;
}

InequalitySystem gaussian_system(const GaussianModel& model, const GenerateOptions& opts) {
  const auto& w = model.params().skeleton;
  const int n = model.agn().size();
  auto vars_of = [](const IndexSet& s) {
    std::vector<GaussVar> v;
    for (int j : s) v.push_back({GaussVar::U, j});
    return v;
  };
  auto ld = [&](std::vector<GaussVar> v) { return v.empty() ? 0.0 : logdet2(model.joint_covariance(v)); };
  auto ld_with_y = [&](const IndexSet& s, int k) {
    auto v = vars_of(s);
    v.push_back({GaussVar::Y, k});
    return ld(v);
  };
  // sum_j log|Cov(U_j, U_{A_j})| - log|Cov(U_{A_j})|
  auto chain_terms = [&](const IndexSet& s) {
    double out = 0.0;
    for (int j : s) {
      const auto& a = w.codebook(j).superpose;
      out += ld(vars_of(index_union({j}, a))) - ld(vars_of(a));
    }
    return out;
  };
  const std::string tag = opts.system_tag.empty() ? "gaussian" : opts.system_tag;
  InequalitySystem sys;
  for (int i = 1; i <= w.mu; ++i) sys.variables.push_back(w.rate_name(i));
  auto rate_sum = [&](const IndexSet& s) {
    std::map<std::string, Rational> lhs;
    for (int i : s) lhs[w.rate_name(i)] += Rational(1);
    return lhs;
  };
  auto subsets = [&](const IndexSet& pool, int k) {
    if (pool.size() >= 62 || (std::int64_t{1} << pool.size()) > opts.subset_cap)
      throw Error(ErrorKind::Blowup, "node " + std::to_string(k) + " needs 2^" + std::to_string(pool.size()) + " subsets");
    return std::int64_t{1} << pool.size();
  };
  for (int k = 1; k <= n; ++k) {
    const auto& nc = w.nodes[k - 1];
    const IndexSet db = index_union(nc.decode, nc.nonunique);
    const IndexSet dbar = bar_D(k, w);
    const IndexSet pool = index_union(dbar, bar_B(k, w));
    const double ld_all = db.empty() ? 0.0 : ld_with_y(db, k);
    for (std::int64_t m = 1, np = subsets(pool, k); m < np; ++m) {
      IndexSet s;
      for (std::size_t i = 0; i < pool.size(); ++i)
        if (m >> i & 1) s.push_back(pool[i]);
      if (index_intersect(s, dbar).empty()) continue;
      const IndexSet sbar = bar_S(s, k, w);
      const double v = 0.5 * (ld_with_y(index_minus(db, sbar), k) + chain_terms(sbar) - ld_all);
      LinearInequality row;
      row.lhs = rate_sum(s);
      row.sense = Sense::Less;
      row.rhs = AffineRateExpr(v);
      row.origin = Origin{tag, k, "packing", s, {}};
      sys.rows.push_back(std::move(row));
    }
    const IndexSet wbar = bar_W(k, w);
    for (std::int64_t m = 1, nc2 = subsets(wbar, k); m < nc2; ++m) {
      IndexSet t;
      for (std::size_t i = 0; i < wbar.size(); ++i)
        if (m >> i & 1) t.push_back(wbar[i]);
      const IndexSet tbar = bar_T(t, k, w);
      std::vector<int> rows;
      int base = 0;
      for (int j : nc.compress) {
        if (std::binary_search(tbar.begin(), tbar.end(), j))
          for (int i = 0; i < model.params().dims[j - 1]; ++i) rows.push_back(base + i);
        base += model.params().dims[j - 1];
      }
      const Eigen::MatrixXd& lu = model.params().nodes[k - 1].lambda_u;
      Eigen::MatrixXd sub(rows.size(), rows.size());
      for (std::size_t a = 0; a < rows.size(); ++a)
        for (std::size_t b = 0; b < rows.size(); ++b) sub(a, b) = lu(rows[a], rows[b]);
      const double v = 0.5 * (chain_terms(tbar) - logdet2(sub));
      LinearInequality row;
      row.lhs = rate_sum(t);
      row.sense = Sense::Greater;
      row.rhs = AffineRateExpr(v);
      row.origin = Origin{tag, k, "covering", t, {}};
      sys.rows.push_back(std::move(row));
    }
  }
  sort_canonical(sys.rows);
  return sys;
}

}  // namespace unirate
