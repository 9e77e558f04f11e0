#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sgla/objective.hpp"

namespace sgla {

// Quadratic model of h over the free weights z = [w_1, ..., w_{r-1}, 1]:
//   h_theta(w) = z^T Theta z, Theta upper triangular (r x r).
// theta(i, j) with i < j < r-1 multiplies w_i w_j, theta(i, r-1) multiplies
// w_i and theta(r-1, r-1) is the constant term (0-based indices).
class QuadraticSurrogate {
 public:
  explicit QuadraticSurrogate(std::size_t r) : theta_(Eigen::MatrixXd::Zero(r, r)) {}
  explicit QuadraticSurrogate(Eigen::MatrixXd theta);

  std::size_t r() const { return static_cast<std::size_t>(theta_.rows()); }
  const Eigen::MatrixXd& theta() const { return theta_; }
  double& theta(std::size_t i, std::size_t j) { return theta_(i, j); }

  // Coefficients in regression order: (i, j) for i <= j, row by row.
  Eigen::VectorXd packed() const;
  static QuadraticSurrogate from_packed(std::size_t r, const Eigen::VectorXd& packed);

  // Evaluates from the full weight vector (w_r is ignored) or from the
  // r-1 free weights.
  double evaluate(std::span<const double> w) const;
  double evaluate_free(std::span<const double> free) const;

 private:
  Eigen::MatrixXd theta_;
};

inline double evaluate_surrogate(const QuadraticSurrogate& s, const WeightVector& w) {
  return s.evaluate(w.values());
}

// r+1 samples: the uniform vector, then for each view the midpoint between
// uniform and that view's one-hot vector.
std::vector<WeightVector> sample_weight_vectors(std::size_t r);

// Regression features of one weight vector in packed order.
Eigen::VectorXd surrogate_features(std::span<const double> w, std::size_t r);

// Ridge fit of a quadratic to the samples, solved through the normal
// equations with a Cholesky factorization. The penalty alpha applies to the
// monomials of all r weights in coordinates centred on the uniform weights
// and scaled to the sampling radius, and spares the constant term, so the
// fit is the same for any ordering of the views. alpha == 0 is plain least
// squares over the r(r+1)/2 coefficients.
// Throws SingularSystem when alpha == 0 and the design is rank-deficient.
QuadraticSurrogate fit_surrogate(std::span<const WeightVector> samples,
                                 std::span<const double> values, double alpha);

}  // namespace sgla
