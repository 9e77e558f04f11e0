#include "sgla/integrate.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <string>

#include "sgla/errors.hpp"
#include "sgla/parallel.hpp"

namespace sgla {
namespace {

using Clock = std::chrono::steady_clock;

double displacement(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

ObjectiveParams objective_params(int k, const SglaParams& p, ObjectiveKind kind) {
  ObjectiveParams op;
  op.k = k;
  op.gamma = p.gamma;
  op.eig_tol = p.eig_tol;
  op.seed = p.seed;
  op.kind = kind;
  op.validate();
  return op;
}

void check_views(std::span<const ViewLaplacian> views) {
  if (views.empty()) throw InvalidArgument("integration needs at least one view");
  for (const auto& v : views) {
    if (v.size() != views.front().size()) throw DimensionMismatch("view Laplacians disagree on n");
  }
}

CobylaOptions engine_options(const SglaParams& p) {
  CobylaOptions o = p.cobyla;
  return o;
}

struct SearchOutcome {
  Point best;
  double best_value = 0.0;
  bool converged = false;
};

// Outer loop shared by both drivers: evaluate at the current free weights,
// let the optimizer propose the next ones, stop once the proposal moves by
// less than epsilon or after t_max evaluations. `f` returns the objective
// at full weights.
SearchOutcome outer_loop(std::size_t r, const SglaParams& p,
                         const std::function<double(const WeightVector&)>& f) {
  const SimplexConstraints c(r - 1);
  const Point start = WeightVector::uniform(r).free();
  SearchOutcome out;

  if (!p.restart_optimizer) {
    CobylaEngine engine(start, c, engine_options(p));
    Point w = engine.pending();
    for (int t = 1; t <= p.t_max; ++t) {
      const double h = f(WeightVector::from_free(w));
      if (!engine.budget_left()) break;
      const Point next = engine.step(h);
      if (engine.converged() || displacement(next, w) < p.epsilon) {
        out.converged = true;
        break;
      }
      w = next;
    }
    out.best = engine.best();
    out.best_value = engine.best_value();
    return out;
  }

  // Restart reading: every outer iteration runs a fresh optimizer from the
  // current weights; all runs share a budget of t_max + 1 evaluations.
  int budget = p.t_max + 1;
  Point w = start;
  double fw = std::numeric_limits<double>::quiet_NaN();
  out.best_value = std::numeric_limits<double>::infinity();
  for (int t = 1; t <= p.t_max && budget > 0; ++t) {
    CobylaEngine engine(w, c, engine_options(p));
    bool first = true;
    while (!engine.converged() && engine.budget_left() && (budget > 0 || (first && !std::isnan(fw)))) {
      double h;
      if (first && !std::isnan(fw)) {
        h = fw;
      } else {
        h = f(WeightVector::from_free(engine.pending()));
        --budget;
      }
      first = false;
      engine.step(h);
    }
    if (engine.best_value() < out.best_value) {
      out.best_value = engine.best_value();
      out.best = engine.best();
    }
    const Point next = engine.best();
    fw = engine.best_value();
    if (displacement(next, w) < p.epsilon) {
      out.converged = true;
      break;
    }
    w = next;
  }
  return out;
}

}  // namespace

void SglaParams::validate() const {
  if (t_max < 1) throw InvalidArgument("t_max must be >= 1");
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be > 0");
  if (!(alpha_r >= 0.0)) throw InvalidArgument("alpha_r must be >= 0");
  if (!(gamma >= 0.0)) throw InvalidArgument("gamma must be >= 0");
  if (knn_k < 1) throw InvalidArgument("knn_k must be >= 1");
}

IntegrationResult run_sgla(std::span<const ViewLaplacian> views, int k, const SglaParams& params,
                           ObjectiveKind kind) {
  params.validate();
  check_views(views);
  const auto t0 = Clock::now();
  const std::size_t r = views.size();
  const LaplacianAggregator agg(views);
  const ObjectiveParams op = objective_params(k, params, kind);
  EvaluationCounter counter;
  IntegrationResult res;

  auto evaluate = [&](const WeightVector& w) {
    const ObjectiveValue v = full_objective(w, agg, op, counter);
    res.trace.push_back({res.trace.size(), {w.values().begin(), w.values().end()}, v.h, counter.value()});
    return v.h;
  };

  if (r == 1) {
    res.weights = WeightVector::uniform(1);
    evaluate(res.weights);
    res.converged = true;
  } else {
    const SearchOutcome s = outer_loop(r, params, evaluate);
    res.weights = WeightVector::from_free(s.best);
    res.converged = s.converged;
  }
  res.laplacian = agg.aggregate(res.weights.values());
  res.evaluations = counter.value();
  res.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return res;
}

IntegrationResult run_sgla_plus(std::span<const ViewLaplacian> views, int k,
                                const SglaParams& params) {
  params.validate();
  check_views(views);
  const auto t0 = Clock::now();
  const std::size_t r = views.size();
  const LaplacianAggregator agg(views);
  const ObjectiveParams op = objective_params(k, params, ObjectiveKind::full);
  EvaluationCounter counter;
  IntegrationResult res;

  std::vector<WeightVector> samples;
  for (auto& w : sample_weight_vectors(r)) {
    if (std::find(samples.begin(), samples.end(), w) == samples.end()) samples.push_back(std::move(w));
  }

  std::vector<ObjectiveValue> values(samples.size());
  const bool concurrent = params.parallel_samples && !parallel::serial() && samples.size() > 1;
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1) num_threads(parallel::thread_count()) if (concurrent)
  for (std::size_t l = 0; l < samples.size(); ++l) {
    try {
      values[l] = full_objective(samples[l], agg, op, counter);
    } catch (...) {
#pragma omp critical(sgla_sample_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<double> h(samples.size());
  for (std::size_t l = 0; l < samples.size(); ++l) {
    h[l] = values[l].h;
    res.trace.push_back({l, {samples[l].values().begin(), samples[l].values().end()}, h[l],
                         static_cast<std::uint64_t>(l + 1)});
  }

  QuadraticSurrogate surrogate = fit_surrogate(samples, h, params.alpha_r);

  WeightVector chosen = WeightVector::uniform(r);
  if (r > 1) {
    const SearchOutcome s = outer_loop(r, params, [&](const WeightVector& w) {
      return surrogate.evaluate(w.values());
    });
    chosen = WeightVector::from_free(s.best);
    res.converged = s.converged;
  } else {
    res.converged = true;
  }
  res.surrogate_argmin = chosen;

  if (params.safeguard) {
    const ObjectiveValue v = full_objective(chosen, agg, op, counter);
    res.trace.push_back({res.trace.size(), {chosen.values().begin(), chosen.values().end()}, v.h,
                         counter.value()});
    std::size_t best = 0;
    for (std::size_t l = 1; l < h.size(); ++l) {
      if (h[l] < h[best]) best = l;
    }
    if (h[best] < v.h) chosen = samples[best];
  }

  res.weights = chosen;
  res.surrogate = std::move(surrogate);
  res.laplacian = agg.aggregate(res.weights.values());
  res.evaluations = counter.value();
  res.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return res;
}

IntegrationResult baseline_weights(BaselineMode mode, std::span<const ViewLaplacian> views, int k,
                                   const SglaParams& params) {
  check_views(views);
  const std::size_t r = views.size();
  switch (mode.kind) {
    case BaselineMode::Kind::eigengap_only:
      return run_sgla(views, k, params, ObjectiveKind::eigengap_only);
    case BaselineMode::Kind::connectivity_only:
      return run_sgla(views, k, params, ObjectiveKind::connectivity_only);
    case BaselineMode::Kind::equal:
    case BaselineMode::Kind::single:
      break;
  }
  if (mode.kind == BaselineMode::Kind::single && (mode.view < 1 || mode.view > r)) {
    throw InvalidArgument("single-view baseline needs a view number in [1, " + std::to_string(r) +
                          "], got " + std::to_string(mode.view));
  }
  const auto t0 = Clock::now();
  const LaplacianAggregator agg(views);
  const ObjectiveParams op = objective_params(k, params, ObjectiveKind::full);
  EvaluationCounter counter;
  IntegrationResult res;
  res.weights = mode.kind == BaselineMode::Kind::equal ? WeightVector::uniform(r)
                                                       : WeightVector::one_hot(r, mode.view - 1);
  // Reported for reference only; no search happens.
  const ObjectiveValue v = full_objective(res.weights, agg, op, counter);
  res.trace.push_back({0, {res.weights.values().begin(), res.weights.values().end()}, v.h, 1});
  res.laplacian = agg.aggregate(res.weights.values());
  res.evaluations = counter.value();
  res.converged = true;
  res.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return res;
}

}  // namespace sgla
