#pragma once

#include <string>
#include <vector>

#include "unirate/coding.hpp"
#include "unirate/inequality.hpp"
#include "unirate/network.hpp"

namespace unirate {

enum class DualType { Original, TypeI, TypeII, TypeIII };

const char* dual_type_name(DualType t);
bool swaps_roles(DualType t);    // I, III: inputs and outputs trade places
bool reverses_order(DualType t);  // II, III: node order reversed, W and D trade places

// Node k of the dual network corresponds to this original node.
int original_node(DualType t, int n, int k);

// Rewires `admn` per the dual type. kernels[k-1] generate the new observation of dual node k.
Admn construct_dual(const Admn& admn, DualType type, const std::vector<std::vector<Kernel>>& kernels,
                    const Target& target);

// Index sets the dual omega must carry: same codebooks, W/D swapped and nodes reordered
// for the reversed types. Kernels and maps are left empty.
CodingParams dual_skeleton(const CodingParams& w, DualType type);

struct DualProblem {
  DualType type = DualType::Original;
  Admn network;
  CodingParams omega;
};

struct DualParams {
  DualProblem original;
  std::vector<DualProblem> duals;  // any of TypeI, TypeII, TypeIII
};

struct DualSystems {
  std::vector<DualType> types;  // original first
  std::vector<InequalitySystem> systems;
};

// Generates every system on its own induced joint. Origins carry the original node index.
DualSystems dual_systems(const DualParams& d);

struct SwapCheck {
  DualType type;
  bool pass = true;
  std::vector<std::string> issues;
};

std::vector<SwapCheck> verify_swap_structure(const DualParams& d, const DualSystems& systems);

}  // namespace unirate
