#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "unirate/coding.hpp"
#include "unirate/generate.hpp"
#include "unirate/inequality.hpp"

namespace unirate {

// Y_k = sum_{j<k} H_kj X_j + H'_kj Y_j + Y'_k with Y'_k ~ N(0, noise[k-1]).
// Missing (k, j) entries of h / hp are zero blocks.
struct Agn {
  std::vector<int> r;  // output dims
  std::vector<int> t;  // input dims
  std::map<std::pair<int, int>, Eigen::MatrixXd> h;
  std::map<std::pair<int, int>, Eigen::MatrixXd> hp;
  std::vector<Eigen::MatrixXd> noise;
  int size() const { return static_cast<int>(r.size()); }
  Eigen::MatrixXd H(int k, int j) const;
  Eigen::MatrixXd Hp(int k, int j) const;
};

// U_{W_k} = G_k U_{D_k} + G'_k Y_k + U'_{W_k},  X_k = F_k U_{D_k u W_k} + F'_k Y_k.
// Codebooks are stacked in increasing index order inside each set.
struct GaussianNode {
  Eigen::MatrixXd g, gp, lambda_u, f, fp;
};

struct GaussianParams {
  CodingParams skeleton;  // index sets only; kernels and maps are ignored
  std::vector<int> dims;  // a_j
  std::vector<GaussianNode> nodes;
};

// E[v' Q v] for v = (x_1..x_N, y_1..y_N) stacked
struct QuadraticForm {
  std::string name;
  Eigen::MatrixXd q;
  double target = 0.0;
};

struct ObjectiveCheck {
  std::vector<std::string> names;
  std::vector<double> values;
  std::vector<double> targets;
  bool pass = true;
};

// rows of the stacked state Z = (U_{W_1}, Y_1, ..., U_{W_N}, Y_N)
struct GaussianLayout {
  std::vector<int> offset;         // start of block k (0-based)
  std::vector<int> block;          // dim of block k
  std::vector<int> owner;          // node whose W holds codebook j (1-based, index j-1)
  std::vector<int> u_offset;       // row of U_j inside Z
  int total = 0;
};

// Variables selectable in joint_covariance
struct GaussVar {
  enum Kind { U, Y, X } kind;
  int index;  // codebook j or node k
};

class GaussianModel {
 public:
  GaussianModel(Agn agn, GaussianParams params);
  const Agn& agn() const { return agn_; }
  const GaussianParams& params() const { return params_; }
  const GaussianLayout& layout() const { return layout_; }

  // G_kj / F_kj: columns of G_k / F_k belonging to codebooks in W_j, zero elsewhere
  Eigen::MatrixXd G_block(int k, int j) const;
  Eigen::MatrixXd F_block(int k, int j) const;
  Eigen::MatrixXd upsilon(int k, int j) const;
  Eigen::MatrixXd phi(int k, int j) const;  // recursion
  Eigen::MatrixXd phi_subset_sum(int k, int j) const;  // explicit sum over chains
  Eigen::MatrixXd lambda_psi(int j) const;
  // Z = Phi Psi over all nodes (block lower triangular)
  Eigen::MatrixXd phi_global() const;
  Eigen::MatrixXd psi_covariance() const;  // block diagonal
  // rows expressing the selected variables as linear maps of Z
  Eigen::MatrixXd selector(const std::vector<GaussVar>& vars) const;
  Eigen::MatrixXd joint_covariance(const std::vector<GaussVar>& vars) const;

  ObjectiveCheck check_objective(const std::vector<QuadraticForm>& forms) const;

 private:
  Agn agn_;
  GaussianParams params_;
  GaussianLayout layout_;
};

// log2 det of a symmetric positive definite matrix via LDLT; empty matrix gives 0.
// Pivots below 1e-12 raise SingularCovariance.
double logdet2(const Eigen::MatrixXd& m);

InequalitySystem gaussian_system(const GaussianModel& model, const GenerateOptions& opts = {});

}  // namespace unirate
