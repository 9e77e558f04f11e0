#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sgla/objective.hpp"
#include "sgla/optimizer.hpp"
#include "sgla/surrogate.hpp"

namespace sgla {

struct SglaParams {
  int t_max = 50;
  double epsilon = 1e-3;
  double gamma = 0.5;
  double alpha_r = 0.05;
  Index knn_k = 10;
  std::uint64_t seed = 42;
  double eig_tol = 1e-8;
  CobylaOptions cobyla{};
  // Re-create the optimizer at every outer iteration instead of keeping
  // its simplex across iterations.
  bool restart_optimizer = false;
  // Spend one extra true evaluation at the surrogate minimizer and keep the
  // best of all evaluated weights.
  bool safeguard = false;
  // Evaluate the surrogate samples concurrently.
  bool parallel_samples = true;

  void validate() const;
};

struct TraceEntry {
  std::size_t iter = 0;
  std::vector<double> w;
  double h = 0.0;
  std::uint64_t evals = 0;
};

struct IntegrationResult {
  WeightVector weights{std::vector<double>{1.0}};
  SparseSymMatrix laplacian;
  std::vector<TraceEntry> trace;
  std::uint64_t evaluations = 0;
  bool converged = false;
  double wall_seconds = 0.0;
  std::optional<QuadraticSurrogate> surrogate;
  // Surrogate minimizer before any safeguard substitution.
  std::optional<WeightVector> surrogate_argmin;
};

// Direct search on h with the ask/tell optimizer.
IntegrationResult run_sgla(std::span<const ViewLaplacian> views, int k, const SglaParams& params,
                           ObjectiveKind kind = ObjectiveKind::full);

// r+1 true evaluations, a ridge-fitted quadratic surrogate, and a search on
// the surrogate only.
IntegrationResult run_sgla_plus(std::span<const ViewLaplacian> views, int k,
                                const SglaParams& params);

struct BaselineMode {
  enum class Kind { equal, single, eigengap_only, connectivity_only };
  Kind kind = Kind::equal;
  std::size_t view = 1;  // for single: 1-based view number, as in w_1..w_r
};

IntegrationResult baseline_weights(BaselineMode mode, std::span<const ViewLaplacian> views, int k,
                                   const SglaParams& params);

}  // namespace sgla
