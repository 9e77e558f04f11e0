#include "sgla/graph_cuts.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <vector>

#include "sgla/errors.hpp"

namespace sgla {

double normalized_cut(const GraphView& g, std::span<const Index> members) {
  const Index n = g.size();
  std::vector<char> in(static_cast<std::size_t>(n), 0);
  for (Index v : members) {
    if (v < 0 || v >= n) throw InvalidArgument("member index out of range");
    in[v] = 1;
  }
  double cut = 0.0, vol = 0.0;
  for (Index v = 0; v < n; ++v) {
    if (!in[v]) continue;
    const auto cols = g.adjacency.row_cols(v);
    const auto vals = g.adjacency.row_values(v);
    for (std::size_t e = 0; e < cols.size(); ++e) {
      vol += vals[e];
      if (!in[cols[e]]) cut += vals[e];
    }
  }
  if (vol == 0.0) throw ZeroVolume("node set has zero volume");
  return cut / vol;
}

double conductance_bruteforce(const GraphView& g) {
  const Index n = g.size();
  if (n > 18) throw TooLarge("brute-force conductance is limited to n <= 18");
  if (n < 2) throw InvalidArgument("conductance needs at least two nodes");

  std::vector<double> w(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<double> deg(static_cast<std::size_t>(n), 0.0);
  double total = 0.0;
  for (Index v = 0; v < n; ++v) {
    const auto cols = g.adjacency.row_cols(v);
    const auto vals = g.adjacency.row_values(v);
    for (std::size_t e = 0; e < cols.size(); ++e) {
      w[static_cast<std::size_t>(v) * n + cols[e]] = vals[e];
      deg[v] += vals[e];
    }
    total += deg[v];
  }
  if (total == 0.0) throw EmptyGraph("graph has no edges");

  // Gray-code walk: one node changes side per step, so cut and volume
  // update in O(n).
  std::vector<char> in(static_cast<std::size_t>(n), 0);
  double cut = 0.0, vol = 0.0;
  double best = std::numeric_limits<double>::infinity();
  const std::uint32_t steps = std::uint32_t{1} << n;
  for (std::uint32_t i = 1; i < steps; ++i) {
    const int v = std::countr_zero(i);
    double to_set = 0.0;
    for (Index u = 0; u < n; ++u) {
      if (in[u] && u != v) to_set += w[static_cast<std::size_t>(v) * n + u];
    }
    if (in[v]) {
      in[v] = 0;
      cut -= deg[v] - 2.0 * to_set;
      vol -= deg[v];
    } else {
      in[v] = 1;
      cut += deg[v] - 2.0 * to_set;
      vol += deg[v];
    }
    if (vol > 0.0 && 2.0 * vol <= total) best = std::min(best, cut / vol);
  }
  return best;
}

}  // namespace sgla
