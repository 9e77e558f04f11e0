// Frozen complementary-view SBM shared by the unit tests and the acceptance
// suite. Each view separates only part of the four blocks: graph views see
// {0,1} and {2,3}, the attribute view sees {0,2}. The seed is the first one
// for which every single view stays below NMI 0.8 while equal weights
// exceed 0.9.
#pragma once

namespace fixture {

inline constexpr const char* kComplementarySbm = R"({"name":"fixture","n":400,"k":4,"seed":2,
  "graph_views":[{"p_in":0.1,"p_out":0.01,"informative":[0,1]},
                 {"p_in":0.1,"p_out":0.01,"informative":[2,3]}],
  "attribute_views":[{"dim":8,"noise":1.0,"informative":[0,2]}]})";

}  // namespace fixture
