#pragma once

#include <atomic>
#include <cstdint>
#include <span>
#include <vector>

#include "sgla/aggregate.hpp"
#include "sgla/eigensolver.hpp"
#include "sgla/views.hpp"

namespace sgla {

// View weights on the probability simplex.
class WeightVector {
 public:
  static constexpr double kSumTolerance = 1e-12;

  // Throws InvalidArgument unless every entry is >= 0 and they sum to 1.
  explicit WeightVector(std::vector<double> w);

  static WeightVector uniform(std::size_t r);
  static WeightVector one_hot(std::size_t r, std::size_t i);
  // Completes the eliminated last coordinate: w_r = 1 - sum(free).
  // Tiny negative round-off in w_r is clamped to zero.
  static WeightVector from_free(std::span<const double> free);

  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  std::span<const double> values() const { return w_; }
  // The first r-1 coordinates, i.e. the optimizer's variables.
  std::vector<double> free() const { return {w_.begin(), w_.end() - (w_.empty() ? 0 : 1)}; }
  double sum_of_squares() const;

  friend bool operator==(const WeightVector&, const WeightVector&) = default;

 private:
  std::vector<double> w_;
};

enum class ObjectiveKind {
  full,               // g_k - lambda_2 + gamma |w|^2
  eigengap_only,      // g_k + gamma |w|^2
  connectivity_only,  // -lambda_2 + gamma |w|^2
};

struct ObjectiveParams {
  int k = 2;
  double gamma = 0.5;
  double eig_tol = 1e-8;
  double tau = 1e-12;
  std::uint64_t seed = 42;
  ObjectiveKind kind = ObjectiveKind::full;

  void validate() const;
};

struct ObjectiveValue {
  double h = 0.0;
  double g_k = 0.0;
  double lambda2 = 0.0;
  double reg = 0.0;
  std::uint64_t eval_index = 0;
};

// Shared count of full objective evaluations; safe to bump from many threads.
class EvaluationCounter {
 public:
  std::uint64_t increment() { return ++count_; }
  std::uint64_t value() const { return count_.load(); }

 private:
  std::atomic<std::uint64_t> count_{0};
};

// lambda_k / max(lambda_{k+1}, tau), exactly 0 when lambda_k is 0.
double eigengap(const SpectrumSlice& s, int k, double tau);
// lambda_2.
double connectivity(const SpectrumSlice& s);

// Evaluates h at w. Bumps the counter exactly once per call.
ObjectiveValue full_objective(const WeightVector& w, const LaplacianAggregator& views,
                              const ObjectiveParams& p, EvaluationCounter& counter);
ObjectiveValue full_objective(const WeightVector& w, std::span<const ViewLaplacian> views,
                              const ObjectiveParams& p, EvaluationCounter& counter);

struct GridPoint {
  WeightVector w;
  double h;
};

// Exhaustive evaluation of h over the simplex lattice with spacing `step`
// (1/step must be an integer up to 1e-9). Limited to r <= 4.
std::vector<GridPoint> brute_force_objective_grid(std::span<const ViewLaplacian> views,
                                                  const ObjectiveParams& p, double step);

// The lattice points themselves, in lexicographic order of the free coordinates.
std::vector<WeightVector> simplex_grid(std::size_t r, double step);

}  // namespace sgla
