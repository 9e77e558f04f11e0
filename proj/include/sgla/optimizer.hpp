#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace sgla {

using Point = std::vector<double>;

// Feasible region of the free weights x = (w_1, ..., w_{r-1}):
// x_i >= 0 and sum(x) <= 1, so that w_r = 1 - sum(x) >= 0 as well.
class SimplexConstraints {
 public:
  static constexpr double kFeasibilityTol = 1e-10;

  explicit SimplexConstraints(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t count() const { return dim_ + 1; }

  // Slack of each constraint written as a_j . x <= b_j; negative when violated.
  std::vector<double> slacks(std::span<const double> x) const;
  // Row a_j of the constraint matrix.
  Eigen::VectorXd normal(std::size_t j) const;
  double max_violation(std::span<const double> x) const;
  bool feasible(std::span<const double> x, double tol = kFeasibilityTol) const;

  // Euclidean projection onto the feasible region.
  Point project(std::span<const double> x) const;
  // Largest t >= 0 with x + t*dir feasible, capped at `cap`.
  double max_step(std::span<const double> x, const Eigen::VectorXd& dir, double cap) const;
  Point center() const;

 private:
  std::size_t dim_;
};

struct CobylaOptions {
  double rhobeg = 0.2;
  double rhoend = 1e-6;
  // 0 selects 100 * (dim + 1).
  std::size_t maxfun = 0;
};

// Ask/tell engine in the COBYLA family: a linear model interpolated on a
// simplex of dim+1 points, minimized inside a trust region of radius rho.
// The feasible region is linear and known, so the trust-region subproblem
// is solved against the exact constraints and every requested point is
// feasible. The radius is halved once the simplex is well-poised and the
// model yields no further progress, down to rhoend.
//
// Usage: evaluate f at pending(), pass the value to step(), repeat.
class CobylaEngine {
 public:
  enum class Phase { initial, trust_region, geometry };

  // Throws InfeasibleStart if x0 violates the constraints by more than 1e-10.
  CobylaEngine(Point x0, SimplexConstraints constraints, CobylaOptions opts = {});

  const Point& pending() const { return pending_; }
  Phase pending_phase() const { return phase_; }

  // Records f(pending()) and returns the next point to evaluate.
  // Throws BudgetExhausted once maxfun values have been consumed.
  const Point& step(double f);

  bool converged() const { return converged_; }
  bool budget_left() const { return evaluations_ < maxfun_; }
  std::size_t evaluations() const { return evaluations_; }
  double radius() const { return rho_; }

  // Best point seen so far; the start point before any value is known.
  const Point& best() const;
  double best_value() const;

  // Current interpolation simplex (dim+1 points, some possibly unevaluated
  // while the initial simplex is being filled).
  const std::vector<Point>& simplex() const { return sim_; }

 private:
  struct Model {
    Eigen::MatrixXd edges;    // columns x_j - x_best, j != best
    Eigen::MatrixXd inverse;  // edges^{-1}
    Eigen::VectorXd gradient;
    std::vector<std::size_t> vertex_of_column;
    bool singular = false;
  };

  std::size_t best_index() const;
  Model build_model(std::size_t b) const;
  void advance();
  Eigen::VectorXd trust_region_step(const Eigen::VectorXd& g, const Point& base) const;
  Point probe(const Point& base, const Eigen::VectorXd& direction,
              const Eigen::VectorXd& gradient) const;
  void accept_trust_region(double f);
  void rebuild_simplex();
  void set_pending(Point p, Phase phase, std::size_t slot);

  SimplexConstraints constraints_;
  CobylaOptions opts_;
  std::size_t dim_;
  std::size_t maxfun_;

  std::vector<Point> sim_;
  std::vector<double> fval_;
  std::vector<bool> known_;
  // Placed by a geometry probe at the current radius; exempt from the
  // flatness test until the radius shrinks.
  std::vector<bool> fresh_;

  Point pending_;
  Phase phase_ = Phase::initial;
  std::size_t pending_slot_ = 0;
  double predicted_ = 0.0;
  std::size_t tr_base_ = 0;
  double tr_base_value_ = 0.0;

  double rho_;
  bool want_trust_region_ = true;
  bool converged_ = false;
  std::size_t evaluations_ = 0;

  Point best_point_;
  double best_value_;
  bool have_best_ = false;
};

struct MinimizeResult {
  Point x;
  double f = 0.0;
  std::size_t evaluations = 0;
  bool budget_exhausted = false;
};

// Runs the engine to convergence or until maxfun evaluations are used,
// returning the best point seen.
MinimizeResult minimize(const std::function<double(std::span<const double>)>& f, Point x0,
                        const SimplexConstraints& c, CobylaOptions opts = {});

}  // namespace sgla
