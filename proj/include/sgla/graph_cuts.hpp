#pragma once

#include <span>

#include "sgla/views.hpp"

namespace sgla {

// Total weight leaving `members` divided by their summed weighted degree.
// Throws ZeroVolume when the members have no incident weight.
double normalized_cut(const GraphView& g, std::span<const Index> members);

// Exact conductance by enumerating every node subset with at most half the
// total volume. Limited to n <= 18.
double conductance_bruteforce(const GraphView& g);

}  // namespace sgla
