#pragma once

// Umbrella header for the cleangraph library: construction and analysis of
// the clean graph Cl2(R) of a finite commutative ring R (a product of local
// factors Z_{p^alpha}), with closed-form invariants checked against
// independent oracles.

#include "factor.hpp"
#include "graph.hpp"
#include "matching.hpp"
#include "ring.hpp"
#include "verify.hpp"
#include "wiener.hpp"

namespace cleangraph {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace cleangraph
