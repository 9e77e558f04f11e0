#include "sgla/objective.hpp"

#include <cmath>
#include <cstdint>
#include <exception>
#include <numeric>
#include <string>

#include "sgla/errors.hpp"
#include "sgla/parallel.hpp"

namespace sgla {

WeightVector::WeightVector(std::vector<double> w) : w_(std::move(w)) {
  if (w_.empty()) throw InvalidArgument("weight vector is empty");
  double sum = 0.0;
  for (double v : w_) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("weights must be finite and >= 0");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw InvalidArgument("weights sum to " + std::to_string(sum) + ", not 1");
  }
}

WeightVector WeightVector::uniform(std::size_t r) {
  return WeightVector(std::vector<double>(r, 1.0 / static_cast<double>(r)));
}

WeightVector WeightVector::one_hot(std::size_t r, std::size_t i) {
  std::vector<double> w(r, 0.0);
  w.at(i) = 1.0;
  return WeightVector(std::move(w));
}

WeightVector WeightVector::from_free(std::span<const double> free) {
  std::vector<double> w(free.begin(), free.end());
  double sum = 0.0;
  for (double& v : w) {
    if (v < 0.0 && v > -1e-10) v = 0.0;
    sum += v;
  }
  double last = 1.0 - sum;
  if (last < 0.0 && last > -1e-10) last = 0.0;
  w.push_back(last);
  return WeightVector(std::move(w));
}

double WeightVector::sum_of_squares() const {
  double s = 0.0;
  for (double v : w_) s += v * v;
  return s;
}

void ObjectiveParams::validate() const {
  if (k < 2) throw InvalidArgument("cluster count k must be >= 2");
  if (!(tau > 0.0)) throw InvalidArgument("eigengap floor tau must be > 0");
  if (!(eig_tol > 0.0)) throw InvalidArgument("eigensolver tolerance must be > 0");
}

double eigengap(const SpectrumSlice& s, int k, double tau) {
  if (k < 1 || s.size() < static_cast<std::size_t>(k) + 1) {
    throw InsufficientSpectrum("eigengap with k=" + std::to_string(k) + " needs " +
                               std::to_string(k + 1) + " eigenvalues, got " +
                               std::to_string(s.size()));
  }
  const double lk = std::abs(s.lambda(k)) <= kZeroClamp ? 0.0 : s.lambda(k);
  if (lk == 0.0) return 0.0;
  const double lk1 = std::abs(s.lambda(k + 1)) <= kZeroClamp ? 0.0 : s.lambda(k + 1);
  return lk / std::max(lk1, tau);
}

double connectivity(const SpectrumSlice& s) {
  if (s.size() < 2) throw InsufficientSpectrum("connectivity needs at least 2 eigenvalues");
  return std::abs(s.lambda(2)) <= kZeroClamp ? 0.0 : s.lambda(2);
}

ObjectiveValue full_objective(const WeightVector& w, const LaplacianAggregator& views,
                              const ObjectiveParams& p, EvaluationCounter& counter) {
  p.validate();
  if (w.size() != views.view_count()) {
    throw DimensionMismatch("weight vector length " + std::to_string(w.size()) + " vs " +
                            std::to_string(views.view_count()) + " views");
  }
  const SparseSymMatrix l = views.aggregate(w.values());
  EigenOptions eo;
  eo.tol = p.eig_tol;
  eo.seed = p.seed;
  const SpectrumSlice s = smallest_eigenvalues(l, static_cast<std::size_t>(p.k) + 1, eo);

  ObjectiveValue v;
  v.reg = p.gamma * w.sum_of_squares();
  v.g_k = p.kind == ObjectiveKind::connectivity_only ? 0.0 : eigengap(s, p.k, p.tau);
  v.lambda2 = p.kind == ObjectiveKind::eigengap_only ? 0.0 : connectivity(s);
  v.h = v.g_k - v.lambda2 + v.reg;
  v.eval_index = counter.increment();
  return v;
}

ObjectiveValue full_objective(const WeightVector& w, std::span<const ViewLaplacian> views,
                              const ObjectiveParams& p, EvaluationCounter& counter) {
  return full_objective(w, LaplacianAggregator(views), p, counter);
}

std::vector<WeightVector> simplex_grid(std::size_t r, double step) {
  if (r == 0) throw InvalidArgument("simplex grid needs r >= 1");
  if (!(step > 0.0) || step > 1.0) throw InvalidArgument("grid step must be in (0, 1]");
  const double divisions = 1.0 / step;
  const auto m = static_cast<int>(std::lround(divisions));
  if (std::abs(divisions - m) > 1e-9) throw InvalidArgument("1/step must be an integer");

  std::vector<WeightVector> out;
  std::vector<int> counts(r - 1, 0);
  // Enumerate compositions of m into r parts via the first r-1 counts.
  for (;;) {
    int used = std::accumulate(counts.begin(), counts.end(), 0);
    if (used <= m) {
      std::vector<double> w(r);
      for (std::size_t i = 0; i + 1 < r; ++i) w[i] = static_cast<double>(counts[i]) / m;
      w[r - 1] = static_cast<double>(m - used) / m;
      out.emplace_back(WeightVector(std::move(w)));
    }
    std::size_t pos = 0;
    while (pos < counts.size()) {
      if (++counts[pos] <= m) break;
      counts[pos] = 0;
      ++pos;
    }
    if (pos == counts.size()) break;
  }
  return out;
}

std::vector<GridPoint> brute_force_objective_grid(std::span<const ViewLaplacian> views,
                                                  const ObjectiveParams& p, double step) {
  if (views.size() > 4) {
    throw TooManyViews("grid search is limited to r <= 4, got r=" + std::to_string(views.size()));
  }
  const LaplacianAggregator agg(views);
  EvaluationCounter counter;
  const std::vector<WeightVector> grid = simplex_grid(views.size(), step);
  std::vector<double> h(grid.size());
  std::exception_ptr failure;
  const auto count = static_cast<std::int64_t>(grid.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(parallel::thread_count()) if (!parallel::serial())
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      h[i] = full_objective(grid[i], agg, p, counter).h;
    } catch (...) {
#pragma omp critical(sgla_grid_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<GridPoint> out;
  out.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out.push_back({grid[i], h[i]});
  return out;
}

}  // namespace sgla
