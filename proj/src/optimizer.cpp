#include "sgla/optimizer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "sgla/errors.hpp"

namespace sgla {
namespace {

// Poisedness thresholds on the simplex, relative to the trust radius.
constexpr double kMaxEdge = 2.1;
constexpr double kMinHeight = 0.25;
// Trust-region steps shorter than this fraction of rho do not count as progress.
constexpr double kShortStep = 0.5;
constexpr double kGoodRatio = 0.1;
// Above this dimension the exact active-set enumeration is replaced by a
// projected steepest-descent step.
constexpr std::size_t kMaxEnumeratedDim = 14;

Eigen::VectorXd to_eigen(std::span<const double> x) {
  return Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
}

Point to_point(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

double distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

std::vector<double> SimplexConstraints::slacks(std::span<const double> x) const {
  std::vector<double> s(count());
  double sum = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    s[i] = x[i];
    sum += x[i];
  }
  s[dim_] = 1.0 - sum;
  return s;
}

Eigen::VectorXd SimplexConstraints::normal(std::size_t j) const {
  const auto n = static_cast<Eigen::Index>(dim_);
  if (j < dim_) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
    a(static_cast<Eigen::Index>(j)) = -1.0;
    return a;
  }
  return Eigen::VectorXd::Ones(n);
}

double SimplexConstraints::max_violation(std::span<const double> x) const {
  double worst = 0.0;
  for (double s : slacks(x)) worst = std::max(worst, -s);
  return worst;
}

bool SimplexConstraints::feasible(std::span<const double> x, double tol) const {
  return x.size() == dim_ && max_violation(x) <= tol;
}

Point SimplexConstraints::project(std::span<const double> x) const {
  Point y(x.begin(), x.end());
  double sum = 0.0;
  for (double& v : y) {
    v = std::max(v, 0.0);
    sum += v;
  }
  if (sum <= 1.0) return y;
  // Projection onto the probability simplex {y >= 0, sum y = 1}.
  Point u(x.begin(), x.end());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double shift = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cumulative += u[i];
    const double candidate = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (u[i] - candidate > 0.0) shift = candidate;
  }
  sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = std::max(x[i] - shift, 0.0);
    sum += y[i];
  }
  // Round-off can leave the sum a few ulps above 1.
  if (sum > 1.0) {
    for (double& v : y) v /= sum;
  }
  return y;
}

double SimplexConstraints::max_step(std::span<const double> x, const Eigen::VectorXd& dir,
                                    double cap) const {
  const auto s = slacks(x);
  double t = cap;
  for (std::size_t j = 0; j < count(); ++j) {
    const double rate = normal(j).dot(dir);
    if (rate > 0.0) t = std::min(t, std::max(s[j], 0.0) / rate);
  }
  return std::max(t, 0.0);
}

Point SimplexConstraints::center() const {
  return Point(dim_, 1.0 / static_cast<double>(dim_ + 1));
}

CobylaEngine::CobylaEngine(Point x0, SimplexConstraints constraints, CobylaOptions opts)
    : constraints_(constraints),
      opts_(opts),
      dim_(constraints.dim()),
      maxfun_(opts.maxfun > 0 ? opts.maxfun : 100 * (constraints.dim() + 1)),
      rho_(opts.rhobeg),
      best_value_(std::numeric_limits<double>::infinity()) {
  if (x0.size() != dim_) {
    throw InvalidArgument("start point has " + std::to_string(x0.size()) + " coordinates, expected " +
                          std::to_string(dim_));
  }
  if (!(opts.rhobeg > 0.0) || !(opts.rhoend > 0.0) || opts.rhoend > opts.rhobeg) {
    throw InvalidArgument("need 0 < rhoend <= rhobeg");
  }
  if (!constraints_.feasible(x0)) {
    throw InfeasibleStart("start point violates the simplex constraints by " +
                          std::to_string(constraints_.max_violation(x0)));
  }
  x0 = constraints_.project(x0);
  best_point_ = x0;

  sim_.assign(dim_ + 1, x0);
  fval_.assign(dim_ + 1, 0.0);
  known_.assign(dim_ + 1, false);
  fresh_.assign(dim_ + 1, true);

  // Vertex j sits one radius away along the part of e_j orthogonal to the
  // edges placed so far, clipped to the feasible region.
  std::vector<Eigen::VectorXd> edges;
  for (std::size_t j = 0; j < dim_; ++j) {
    Eigen::VectorXd dir = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim_));
    dir(static_cast<Eigen::Index>(j)) = 1.0;
    for (const auto& e : edges) dir -= e.dot(dir) * e;
    dir.normalize();
    sim_[j + 1] = probe(x0, dir, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim_)));
    Eigen::VectorXd edge = to_eigen(sim_[j + 1]) - to_eigen(x0);
    for (const auto& e : edges) edge -= e.dot(edge) * e;
    if (edge.norm() > 0.0) edges.push_back(edge.normalized());
  }
  set_pending(x0, Phase::initial, 0);
}

const Point& CobylaEngine::best() const { return best_point_; }
double CobylaEngine::best_value() const { return best_value_; }

void CobylaEngine::set_pending(Point p, Phase phase, std::size_t slot) {
  pending_ = std::move(p);
  phase_ = phase;
  pending_slot_ = slot;
}

std::size_t CobylaEngine::best_index() const {
  std::size_t b = 0;
  for (std::size_t j = 1; j < sim_.size(); ++j) {
    if (fval_[j] < fval_[b]) b = j;
  }
  return b;
}

CobylaEngine::Model CobylaEngine::build_model(std::size_t b) const {
  Model m;
  const auto n = static_cast<Eigen::Index>(dim_);
  m.edges.resize(n, n);
  Eigen::VectorXd df(n);
  Eigen::Index c = 0;
  for (std::size_t j = 0; j < sim_.size(); ++j) {
    if (j == b) continue;
    m.edges.col(c) = to_eigen(sim_[j]) - to_eigen(sim_[b]);
    df(c) = fval_[j] - fval_[b];
    m.vertex_of_column.push_back(j);
    ++c;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m.edges);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(sv.size() - 1) <= 1e-10 * rho_ || sv(sv.size() - 1) <= 1e-300) {
    m.singular = true;
    return m;
  }
  m.inverse = m.edges.inverse();
  m.gradient = m.inverse.transpose() * df;
  return m;
}

Point CobylaEngine::probe(const Point& base, const Eigen::VectorXd& direction,
                          const Eigen::VectorXd& gradient) const {
  Eigen::VectorXd v = direction.normalized();
  Eigen::VectorXd inward = to_eigen(constraints_.center()) - to_eigen(base);
  const bool have_inward = inward.norm() > 1e-14;
  if (have_inward) inward.normalize();

  std::vector<Eigen::VectorXd> candidates{v, -v};
  if (have_inward) {
    for (double k : {0.5, 1.0, 2.0}) {
      candidates.push_back((v + k * inward).normalized());
      candidates.push_back((-v + k * inward).normalized());
    }
    candidates.push_back(inward);
  }
  double best_score = -1.0;
  double best_model = 0.0;
  Point best = base;
  for (const auto& dir : candidates) {
    const double t = constraints_.max_step(base, dir, rho_);
    const double score = t * std::abs(dir.dot(v));
    const double model = gradient.size() > 0 ? gradient.dot(dir) * t : 0.0;
    if (score > best_score * (1.0 + 1e-12) || (score >= best_score * (1.0 - 1e-12) && model < best_model)) {
      best_score = score;
      best_model = model;
      best = to_point(to_eigen(base) + t * dir);
    }
  }
  return constraints_.project(best);
}

Eigen::VectorXd CobylaEngine::trust_region_step(const Eigen::VectorXd& g, const Point& base) const {
  const auto n = static_cast<Eigen::Index>(dim_);
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
  const double gnorm = g.norm();
  if (gnorm == 0.0) return zero;

  if (dim_ > kMaxEnumeratedDim) {
    Eigen::VectorXd target = to_eigen(base) - rho_ / gnorm * g;
    return to_eigen(constraints_.project(to_point(target))) - to_eigen(base);
  }

  // min g.d  s.t. |d| <= rho and a_j.d <= slack_j. The optimum lies on some
  // active face: d = d_face + t * (-P g) with P the projector onto the face.
  const auto slack = constraints_.slacks(base);
  const std::size_t m = constraints_.count();
  Eigen::MatrixXd all(static_cast<Eigen::Index>(m), n);
  for (std::size_t j = 0; j < m; ++j) all.row(static_cast<Eigen::Index>(j)) = constraints_.normal(j).transpose();

  Eigen::VectorXd best = zero;
  double best_value = 0.0;
  const std::uint64_t subsets = std::uint64_t{1} << m;
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    const auto active = static_cast<Eigen::Index>(std::popcount(mask));
    if (active > n) continue;
    Eigen::VectorXd d;
    Eigen::VectorXd pg = g;
    if (active == 0) {
      d = zero;
    } else {
      Eigen::MatrixXd a(active, n);
      Eigen::VectorXd s(active);
      Eigen::Index row = 0;
      for (std::size_t j = 0; j < m; ++j) {
        if (mask & (std::uint64_t{1} << j)) {
          a.row(row) = all.row(static_cast<Eigen::Index>(j));
          s(row) = std::max(slack[j], 0.0);
          ++row;
        }
      }
      Eigen::MatrixXd gram = a * a.transpose();
      Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
      if (lu.rank() < active) continue;
      d = a.transpose() * lu.solve(s);
      pg = g - a.transpose() * lu.solve(a * g);
    }
    const double dn = d.norm();
    if (dn > rho_) continue;
    const double pn = pg.norm();
    if (pn > 1e-14 * gnorm) d -= std::sqrt(rho_ * rho_ - dn * dn) / pn * pg;
    bool ok = true;
    for (std::size_t j = 0; j < m && ok; ++j) {
      ok = all.row(static_cast<Eigen::Index>(j)).dot(d) <= slack[j] + 1e-12;
    }
    if (!ok) continue;
    const double value = g.dot(d);
    if (value < best_value - 1e-15 * gnorm * rho_) {
      best_value = value;
      best = d;
    }
  }
  return best;
}

void CobylaEngine::rebuild_simplex() {
  const std::size_t b = best_index();
  const Point base = sim_[b];
  std::vector<Eigen::VectorXd> edges;
  std::size_t placed = 0;
  for (std::size_t j = 0; j < sim_.size(); ++j) {
    if (j == b) continue;
    Eigen::VectorXd dir = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim_));
    dir(static_cast<Eigen::Index>(placed++)) = 1.0;
    for (const auto& e : edges) dir -= e.dot(dir) * e;
    sim_[j] = probe(base, dir, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim_)));
    known_[j] = false;
    fresh_[j] = true;
    Eigen::VectorXd edge = to_eigen(sim_[j]) - to_eigen(base);
    for (const auto& e : edges) edge -= e.dot(edge) * e;
    if (edge.norm() > 0.0) edges.push_back(edge.normalized());
  }
}

void CobylaEngine::accept_trust_region(double f) {
  const std::size_t b = tr_base_;
  const double fb = fval_[b];
  const Point z = pending_;
  const Model model = build_model(b);

  std::vector<double> coef(sim_.size(), 0.0);
  if (!model.singular) {
    Eigen::VectorXd lam = model.inverse * (to_eigen(z) - to_eigen(sim_[b]));
    double rest = 1.0;
    for (Eigen::Index c = 0; c < lam.size(); ++c) {
      coef[model.vertex_of_column[static_cast<std::size_t>(c)]] = lam(c);
      rest -= lam(c);
    }
    coef[b] = rest;
  }
  const bool improved = f < fb;
  std::size_t chosen = sim_.size();
  double best_score = 1e-12;
  for (std::size_t j = 0; j < sim_.size(); ++j) {
    if (j == b && !improved) continue;
    const double far = std::max(1.0, distance(sim_[j], z) / rho_);
    const double score = std::abs(coef[j]) * far * far;
    if (score > best_score) {
      best_score = score;
      chosen = j;
    }
  }
  if (chosen == sim_.size()) {
    double far = -1.0;
    for (std::size_t j = 0; j < sim_.size(); ++j) {
      if (j == b && !improved) continue;
      const double dist = distance(sim_[j], z);
      if (dist > far) {
        far = dist;
        chosen = j;
      }
    }
  }
  sim_[chosen] = z;
  fval_[chosen] = f;
  known_[chosen] = true;
  fresh_[chosen] = false;

  const double ratio = predicted_ > 0.0 ? (fb - f) / predicted_ : -1.0;
  want_trust_region_ = ratio >= kGoodRatio;
}

const Point& CobylaEngine::step(double f) {
  if (evaluations_ >= maxfun_) {
    throw BudgetExhausted("optimizer used its budget of " + std::to_string(maxfun_) + " evaluations");
  }
  if (!std::isfinite(f)) throw InvalidArgument("objective value is not finite");
  ++evaluations_;
  if (!have_best_ || f < best_value_) {
    best_value_ = f;
    best_point_ = pending_;
    have_best_ = true;
  }
  if (converged_) {
    set_pending(best_point_, Phase::trust_region, 0);
    return pending_;
  }

  switch (phase_) {
    case Phase::initial:
      fval_[pending_slot_] = f;
      known_[pending_slot_] = true;
      break;
    case Phase::trust_region:
      accept_trust_region(f);
      break;
    case Phase::geometry:
      sim_[pending_slot_] = pending_;
      fval_[pending_slot_] = f;
      known_[pending_slot_] = true;
      fresh_[pending_slot_] = true;
      want_trust_region_ = true;
      break;
  }
  advance();
  return pending_;
}

void CobylaEngine::advance() {
  for (;;) {
    for (std::size_t j = 0; j < sim_.size(); ++j) {
      if (!known_[j]) {
        set_pending(sim_[j], Phase::initial, j);
        return;
      }
    }
    if (dim_ == 0) {
      converged_ = true;
      set_pending(best_point_, Phase::trust_region, 0);
      return;
    }

    const std::size_t b = best_index();
    const Model model = build_model(b);
    if (model.singular) {
      rebuild_simplex();
      continue;
    }

    if (want_trust_region_) {
      const Eigen::VectorXd d = trust_region_step(model.gradient, sim_[b]);
      const double predicted = -model.gradient.dot(d);
      if (d.norm() >= kShortStep * rho_ && predicted > 0.0) {
        tr_base_ = b;
        predicted_ = predicted;
        set_pending(constraints_.project(to_point(to_eigen(sim_[b]) + d)), Phase::trust_region, 0);
        return;
      }
      want_trust_region_ = false;
    }

    // Geometry: replace an overly long edge first, else the flattest vertex.
    std::size_t worst_col = model.vertex_of_column.size();
    double worst_edge = kMaxEdge * rho_;
    for (std::size_t c = 0; c < model.vertex_of_column.size(); ++c) {
      const double len = model.edges.col(static_cast<Eigen::Index>(c)).norm();
      if (len > worst_edge) {
        worst_edge = len;
        worst_col = c;
      }
    }
    if (worst_col == model.vertex_of_column.size()) {
      double flattest = kMinHeight * rho_;
      for (std::size_t c = 0; c < model.vertex_of_column.size(); ++c) {
        if (fresh_[model.vertex_of_column[c]]) continue;
        const double height = 1.0 / model.inverse.row(static_cast<Eigen::Index>(c)).norm();
        if (height < flattest) {
          flattest = height;
          worst_col = c;
        }
      }
    }
    if (worst_col < model.vertex_of_column.size()) {
      const Eigen::VectorXd normal = model.inverse.row(static_cast<Eigen::Index>(worst_col)).transpose();
      set_pending(probe(sim_[b], normal, model.gradient), Phase::geometry,
                  model.vertex_of_column[worst_col]);
      return;
    }

    if (rho_ <= opts_.rhoend) {
      converged_ = true;
      set_pending(best_point_, Phase::trust_region, 0);
      return;
    }
    rho_ *= 0.5;
    if (rho_ <= 1.5 * opts_.rhoend) rho_ = opts_.rhoend;
    std::fill(fresh_.begin(), fresh_.end(), false);
    want_trust_region_ = true;
  }
}

MinimizeResult minimize(const std::function<double(std::span<const double>)>& f, Point x0,
                        const SimplexConstraints& c, CobylaOptions opts) {
  CobylaEngine engine(std::move(x0), c, opts);
  while (!engine.converged() && engine.budget_left()) {
    engine.step(f(engine.pending()));
  }
  MinimizeResult r;
  r.x = engine.best();
  r.f = engine.best_value();
  r.evaluations = engine.evaluations();
  r.budget_exhausted = !engine.converged();
  return r;
}

}  // namespace sgla
