#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "unirate/gaussian.hpp"

// Random AGN instances and a direct propagation of the model equations, shared by the
// Gaussian tests and the acceptance binary.
namespace gauss_oracle {

using namespace unirate;
using Eigen::MatrixXd;

struct Instance {
  Agn agn;
  GaussianParams params;
};

inline MatrixXd random_matrix(std::mt19937_64& rng, int r, int c) {
  std::normal_distribution<double> n(0.0, 0.7);
  MatrixXd m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = n(rng);
  return m;
}

inline MatrixXd random_spd(std::mt19937_64& rng, int d) {
  const MatrixXd a = random_matrix(rng, d, d);
  return a * a.transpose() + 0.5 * MatrixXd::Identity(d, d);
}

inline int dims_of(const IndexSet& s, const std::vector<int>& dims) {
  int t = 0;
  for (int j : s) t += dims[j - 1];
  return t;
}

// N <= 5 nodes, up to two new codebooks per node, each later node decoding a random subset
inline Instance random_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nn(2, 5), small(0, 2), dim(1, 2), coin(0, 1);
  Instance in;
  const int n = nn(rng);
  CodingParams& w = in.params.skeleton;
  w.nodes.resize(n);
  IndexSet covered;
  int nu = 0;
  for (int k = 1; k <= n; ++k) {
    for (int j : covered)
      if (coin(rng)) w.nodes[k - 1].decode.push_back(j);
    const int fresh = k == 1 ? 1 + coin(rng) : small(rng);
    for (int i = 0; i < fresh; ++i) {
      ++nu;
      w.nodes[k - 1].compress.push_back(nu);
      w.codebooks.push_back({{}, {nu}, {}});
      in.params.dims.push_back(dim(rng));
    }
    covered = index_union(covered, w.nodes[k - 1].compress);
  }
  w.mu = nu;
  Agn& g = in.agn;
  for (int k = 1; k <= n; ++k) {
    g.r.push_back(k == 1 ? 0 : 1 + coin(rng));
    g.t.push_back(k == n ? 0 : small(rng));
  }
  for (int k = 1; k <= n; ++k) {
    g.noise.push_back(random_spd(rng, g.r[k - 1]));
    for (int j = 1; j < k; ++j) {
      if (coin(rng) || j == k - 1) g.h[{k, j}] = random_matrix(rng, g.r[k - 1], g.t[j - 1]);
      if (coin(rng)) g.hp[{k, j}] = random_matrix(rng, g.r[k - 1], g.r[j - 1]);
    }
  }
  for (int k = 1; k <= n; ++k) {
    const auto& nc = w.nodes[k - 1];
    const int aw = dims_of(nc.compress, in.params.dims), ad = dims_of(nc.decode, in.params.dims);
    GaussianNode gn;
    gn.g = random_matrix(rng, aw, ad);
    gn.gp = random_matrix(rng, aw, g.r[k - 1]);
    gn.lambda_u = random_spd(rng, aw);
    gn.f = random_matrix(rng, g.t[k - 1], dims_of(index_union(nc.decode, nc.compress), in.params.dims));
    gn.fp = random_matrix(rng, g.t[k - 1], g.r[k - 1]);
    in.params.nodes.push_back(gn);
  }
  return in;
}

// Direct propagation of the model equations: every variable as a linear map of the independent
// innovations (U'_{W_1}, Y'_1, U'_{W_2}, Y'_2, ...).
struct Propagated {
  std::vector<MatrixXd> u, y, x;
  MatrixXd sigma;
};

inline Propagated propagate(const Instance& in) {
  const auto& w = in.params.skeleton;
  const auto& g = in.agn;
  const int n = g.size();
  std::vector<int> off;
  int total = 0;
  for (int k = 1; k <= n; ++k) {
    off.push_back(total);
    total += dims_of(w.nodes[k - 1].compress, in.params.dims) + g.r[k - 1];
  }
  Propagated p;
  p.sigma = MatrixXd::Zero(total, total);
  p.u.resize(w.nu());
  p.y.resize(n);
  p.x.resize(n);
  auto stack = [&](const IndexSet& s) {
    MatrixXd m(dims_of(s, in.params.dims), total);
    int row = 0;
    for (int j : s) {
      m.block(row, 0, in.params.dims[j - 1], total) = p.u[j - 1];
      row += in.params.dims[j - 1];
    }
    return m;
  };
  for (int k = 1; k <= n; ++k) {
    const auto& nc = w.nodes[k - 1];
    const auto& gn = in.params.nodes[k - 1];
    const int aw = dims_of(nc.compress, in.params.dims), rk = g.r[k - 1];
    p.sigma.block(off[k - 1], off[k - 1], aw, aw) = gn.lambda_u;
    p.sigma.block(off[k - 1] + aw, off[k - 1] + aw, rk, rk) = g.noise[k - 1];
    MatrixXd y = MatrixXd::Zero(rk, total);
    y.block(0, off[k - 1] + aw, rk, rk) = MatrixXd::Identity(rk, rk);
    for (int j = 1; j < k; ++j) y += g.H(k, j) * p.x[j - 1] + g.Hp(k, j) * p.y[j - 1];
    p.y[k - 1] = y;
    MatrixXd uw = gn.gp * y;
    uw.block(0, off[k - 1], aw, aw) += MatrixXd::Identity(aw, aw);
    if (!nc.decode.empty()) uw += gn.g * stack(nc.decode);
    int row = 0;
    for (int j : nc.compress) {
      p.u[j - 1] = uw.block(row, 0, in.params.dims[j - 1], total);
      row += in.params.dims[j - 1];
    }
    p.x[k - 1] = gn.fp * y;
    const IndexSet dw = index_union(nc.decode, nc.compress);
    if (!dw.empty()) p.x[k - 1] += gn.f * stack(dw);
  }
  return p;
}

// largest entrywise gap between the phi recursion and the subset-sum form over n instances
inline double phi_gap(std::uint64_t seed, int n, int* blocks = nullptr) {
  std::mt19937_64 rng(seed);
  double worst = 0;
  int count = 0;
  for (int i = 0; i < n; ++i) {
    const Instance in = random_instance(rng);
    const GaussianModel m(in.agn, in.params);
    for (int k = 1; k <= in.agn.size(); ++k)
      for (int j = 1; j <= k; ++j) {
        const MatrixXd a = m.phi(k, j), b = m.phi_subset_sum(k, j);
        if (a.rows() != b.rows() || a.cols() != b.cols()) return 1e300;
        if (a.size() > 0) worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
        ++count;
      }
  }
  if (blocks) *blocks = count;
  return worst;
}

// largest relative gap between joint_covariance and the propagated covariance over n instances
inline double covariance_gap(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  double worst = 0;
  for (int i = 0; i < n; ++i) {
    const Instance in = random_instance(rng);
    const GaussianModel m(in.agn, in.params);
    const Propagated p = propagate(in);
    std::vector<GaussVar> vars;
    std::vector<MatrixXd> maps;
    for (int j = 1; j <= in.params.skeleton.nu(); ++j) {
      vars.push_back({GaussVar::U, j});
      maps.push_back(p.u[j - 1]);
    }
    for (int k = 1; k <= in.agn.size(); ++k) {
      vars.push_back({GaussVar::Y, k});
      maps.push_back(p.y[k - 1]);
      vars.push_back({GaussVar::X, k});
      maps.push_back(p.x[k - 1]);
    }
    int rows = 0;
    for (const auto& mm : maps) rows += mm.rows();
    MatrixXd l(rows, p.sigma.rows());
    int r = 0;
    for (const auto& mm : maps) {
      l.block(r, 0, mm.rows(), mm.cols()) = mm;
      r += mm.rows();
    }
    const MatrixXd want = l * p.sigma * l.transpose();
    const MatrixXd got = m.joint_covariance(vars);
    if (got.rows() != want.rows()) return 1e300;
    if (want.size() > 0) worst = std::max(worst, (got - want).cwiseAbs().maxCoeff() / (1 + want.cwiseAbs().maxCoeff()));
  }
  return worst;
}

}  // namespace gauss_oracle
