#pragma once

#include <cstdint>
#include <string>

#include "tracepop/pop.hpp"

namespace tracepop {

// family: ball | annulus | box | simplex | ball-ts | box-ts |
//         cs-ball | cs-box | csts-ball | csts-box
// l < 0 picks the family default; u is the clique width (sparse families only).
struct GeneratorSpec {
  std::string family;
  int n = 0;
  int l = -1;
  int u = 0;
  std::uint64_t seed = 0;
};

struct GeneratedPop {
  PopInstance pop;
  Eigen::VectorXd planted;
};

bool is_cs_family(const std::string& family);

// Deterministic for a fixed spec; the planted point is feasible and all
// equality constraints vanish on it by construction.
GeneratedPop generate(const GeneratorSpec& spec);

// Consecutive clique layout (width u, single-variable overlaps) used by the
// sparse families; exposed for tests and the bench report.
std::vector<std::vector<int>> chain_clique_layout(int n, int u);

}  // namespace tracepop
