#include <cmath>
#include <random>

#include "doctest.h"
#include "unirate/error.hpp"
#include "unirate/joint.hpp"

using namespace unirate;

namespace {

// frozen oracle values, computed by hand
constexpr double kH13 = 0.91829583405448956;  // H(1/3)

FactoredJoint adder_mac() {
  FactoredJoint j;
  j.add_independent(Factor::concrete("X1", 2), {0.5, 0.5});
  j.add_independent(Factor::concrete("X2", 2), {0.5, 0.5});
  Kernel k;
  k.parents = {"X1", "X2"};
  k.parent_sizes = {2, 2};
  k.outputs = {"Y"};
  k.output_sizes = {3};
  k.function = {0, 1, 1, 2};
  j.apply_kernel(k, {Factor::concrete("Y", 3)});
  return j;
}

FactoredJoint random_joint(std::mt19937& rng, int nvars) {
  std::vector<Factor> fs;
  std::vector<int> sizes;
  std::uniform_int_distribution<int> alpha(1, 3);
  for (int i = 0; i < nvars; ++i) {
    fs.push_back(Factor::concrete("V" + std::to_string(i), alpha(rng)));
    sizes.push_back(fs.back().alphabet);
  }
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> t(mixed_radix_size(sizes));
  double s = 0;
  for (auto& v : t) {
    v = u(rng) < 0.2 ? 0.0 : u(rng);
    s += v;
  }
  if (s == 0) t[0] = s = 1;
  for (auto& v : t) v /= s;
  return FactoredJoint::from_table(fs, t);
}

}  // namespace

TEST_CASE("marginalize") {
  auto j = FactoredJoint::from_table({Factor::concrete("X", 2), Factor::concrete("Y", 2)}, {0.25, 0.25, 0.25, 0.25});
  auto m = marginalize(j, {"X"});
  CHECK(m.table({"X"}) == std::vector<double>{0.5, 0.5});
  auto same = marginalize(j, {"X", "Y"});
  CHECK(same.table({"X", "Y"}) == j.table({"X", "Y"}));

  auto dsbs = FactoredJoint::from_table({Factor::concrete("X", 2), Factor::concrete("Y", 2)}, {0.45, 0.05, 0.05, 0.45});
  auto y = marginalize(dsbs, {"Y"}).table({"Y"});
  CHECK(y[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(marginalize(j, {"Z"}), Error);
}

TEST_CASE("entropy") {
  FactoredJoint j;
  j.add_independent(Factor::concrete("X", 2), {0.5, 0.5});
  j.add_independent(Factor::concrete("B", 2), {1.0 / 3, 2.0 / 3});
  j.add_symbolic(Factor::symbolic("M", "R"));
  CHECK(entropy(j, {"X"}).constant == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(!entropy(j, {"X"}).has_symbols());
  CHECK(entropy(j, {"B"}).constant == doctest::Approx(kH13).epsilon(1e-14));
  auto h = entropy(j, {"M", "X"});
  CHECK(h.constant == doctest::Approx(1.0));
  CHECK(h.coeff("R") == Rational(1));
  CHECK_THROWS_AS(entropy(j, {"Q"}), Error);
}

TEST_CASE("bit-pipe views count once") {
  FactoredJoint j;
  j.add_symbolic(Factor::symbolic("X1", "R", 1, "pipe"));
  j.add_symbolic(Factor::symbolic("Y2", "R", 1, "pipe"));
  j.add_symbolic(Factor::symbolic("M", "R1", Rational(3)));
  CHECK(entropy(j, {"X1", "Y2"}).coeff("R") == Rational(1));
  CHECK(entropy(j, {"M"}).coeff("R1") == Rational(3));
  CHECK(cond_mutual_info(j, {"X1"}, {"Y2"}).coeff("R") == Rational(1));
  CHECK_THROWS_AS(j.add_symbolic(Factor::symbolic("Z", "R2", 1, "pipe")), Error);
}

TEST_CASE("cond_mutual_info on the adder MAC") {
  auto j = adder_mac();
  CHECK(cond_mutual_info(j, {"X1", "X2"}, {"Y"}).constant == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(cond_mutual_info(j, {"X1"}, {"Y"}, {"X2"}).constant == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(cond_mutual_info(j, {"X1"}, {"Y"}).constant == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(cond_mutual_info(j, {"X1"}, {"X1"}).constant == doctest::Approx(1.0));
  CHECK(std::abs(j.total_mass() - 1.0) < 1e-12);
  CHECK(j.probability({{"X1", 1}, {"X2", 0}, {"Y", 1}}) == doctest::Approx(0.25));
  CHECK(j.probability({{"Y", 1}}) == doctest::Approx(0.5));
}

TEST_CASE("symbolic singletons are independent") {
  FactoredJoint j;
  j.add_symbolic(Factor::symbolic("M1", "R1"));
  j.add_symbolic(Factor::symbolic("M2", "R2"));
  auto i = cond_mutual_info(j, {"M1"}, {"M2"});
  CHECK(i.constant == 0.0);
  CHECK(!i.has_symbols());
}

TEST_CASE("binary_entropy") {
  CHECK(binary_entropy(0.5) == 1.0);
  CHECK(binary_entropy(1.0 / 3) == doctest::Approx(kH13).epsilon(1e-15));
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK_THROWS_AS(binary_entropy(-0.1), Error);
  CHECK_THROWS_AS(binary_entropy(1.5), Error);
}

TEST_CASE("kernel shape errors") {
  FactoredJoint j;
  j.add_independent(Factor::concrete("X", 2), {0.5, 0.5});
  Kernel k;
  k.parents = {"Z"};
  k.parent_sizes = {2};
  k.outputs = {"Y"};
  k.output_sizes = {2};
  k.function = {0, 1};
  CHECK_THROWS_AS(j.apply_kernel(k, {Factor::concrete("Y", 2)}), Error);
  k.parents = {"X"};
  j.apply_kernel(k, {Factor::concrete("Y", 2)});
  CHECK_THROWS_AS(j.apply_kernel(k, {Factor::concrete("Y", 2)}), Error);
}

TEST_CASE("property: monotone, submodular, marginal-consistent, symbolic increment") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    auto j = random_joint(rng, 4);
    j.add_symbolic(Factor::symbolic("M", "R"));
    VarSet all = {"V0", "V1", "V2", "V3"};
    for (unsigned s = 0; s < 16; ++s)
      for (unsigned t = 0; t < 16; ++t) {
        VarSet S, T, U, I;
        for (int i = 0; i < 4; ++i) {
          if (s >> i & 1) S.push_back(all[i]);
          if (t >> i & 1) T.push_back(all[i]);
          if ((s | t) >> i & 1) U.push_back(all[i]);
          if ((s & t) >> i & 1) I.push_back(all[i]);
        }
        double hs = j.entropy(S).constant, ht = j.entropy(T).constant;
        if ((s & t) == s) CHECK(hs <= ht + 1e-9);
        CHECK(hs + ht >= j.entropy(U).constant + j.entropy(I).constant - 1e-9);
        CHECK(j.cond_mutual_info(S, T).constant == doctest::Approx(j.cond_mutual_info(T, S).constant));
        CHECK(j.cond_mutual_info(S, T, I).constant >= -1e-9);
      }
    for (unsigned s = 0; s < 16; ++s) {
      VarSet S;
      for (int i = 0; i < 4; ++i)
        if (s >> i & 1) S.push_back(all[i]);
      CHECK(marginalize(j, S).entropy(S).constant == doctest::Approx(j.entropy(S).constant).epsilon(1e-12));
      auto with = S;
      with.push_back("M");
      auto d = j.entropy(with) - j.entropy(S);
      CHECK(d.coeff("R") == Rational(1));
      CHECK(std::abs(d.constant) < 1e-12);
    }
  }
}
