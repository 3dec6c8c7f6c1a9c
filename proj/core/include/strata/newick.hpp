#pragma once

#include <string>
#include <string_view>

#include "strata/tree.hpp"

namespace strata {

// Standard Newick text. Branch lengths are origin-time deltas; the top node
// carries its absolute origin time as its length (so a lone tip of depth 3
// prints as "x:3;"). Labels must avoid Newick delimiters.
std::string to_newick(const PhyloTree& tree);

// Inverse of to_newick: origin times accumulate from zero at the top.
// Throws std::runtime_error on malformed input.
PhyloTree parse_newick(std::string_view text);

}  // namespace strata
