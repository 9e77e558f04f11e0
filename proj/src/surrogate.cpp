#include "sgla/surrogate.hpp"

#include <cmath>
#include <string>

#include "sgla/errors.hpp"

namespace sgla {

QuadraticSurrogate::QuadraticSurrogate(Eigen::MatrixXd theta) : theta_(std::move(theta)) {
  if (theta_.rows() != theta_.cols() || theta_.rows() == 0) {
    throw InvalidArgument("surrogate coefficient matrix must be square and non-empty");
  }
  for (Eigen::Index i = 0; i < theta_.rows(); ++i) {
    for (Eigen::Index j = 0; j < theta_.cols(); ++j) {
      if (!std::isfinite(theta_(i, j))) throw InvalidArgument("surrogate coefficient is not finite");
      if (j < i && theta_(i, j) != 0.0) throw InvalidArgument("surrogate must be upper triangular");
    }
  }
}

Eigen::VectorXd QuadraticSurrogate::packed() const {
  const auto r = theta_.rows();
  Eigen::VectorXd p(r * (r + 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = i; j < r; ++j) p(k++) = theta_(i, j);
  }
  return p;
}

QuadraticSurrogate QuadraticSurrogate::from_packed(std::size_t r, const Eigen::VectorXd& packed) {
  const auto rr = static_cast<Eigen::Index>(r);
  if (packed.size() != rr * (rr + 1) / 2) throw DimensionMismatch("packed surrogate length");
  Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(rr, rr);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < rr; ++i) {
    for (Eigen::Index j = i; j < rr; ++j) theta(i, j) = packed(k++);
  }
  return QuadraticSurrogate(std::move(theta));
}

double QuadraticSurrogate::evaluate_free(std::span<const double> free) const {
  const auto r = theta_.rows();
  if (static_cast<Eigen::Index>(free.size()) != r - 1) {
    throw DimensionMismatch("surrogate expects " + std::to_string(r - 1) + " free weights");
  }
  Eigen::VectorXd z(r);
  for (Eigen::Index i = 0; i + 1 < r; ++i) z(i) = free[static_cast<std::size_t>(i)];
  z(r - 1) = 1.0;
  return z.dot(theta_ * z);
}

double QuadraticSurrogate::evaluate(std::span<const double> w) const {
  if (static_cast<Eigen::Index>(w.size()) != theta_.rows()) {
    throw DimensionMismatch("surrogate expects " + std::to_string(theta_.rows()) + " weights");
  }
  return evaluate_free(w.first(w.size() - 1));
}

std::vector<WeightVector> sample_weight_vectors(std::size_t r) {
  if (r == 0) throw InvalidArgument("sampling needs r >= 1");
  std::vector<WeightVector> out;
  out.reserve(r + 1);
  out.push_back(WeightVector::uniform(r));
  const double base = 1.0 / (2.0 * static_cast<double>(r));
  const double peak = static_cast<double>(r + 1) / (2.0 * static_cast<double>(r));
  for (std::size_t l = 0; l < r; ++l) {
    std::vector<double> w(r, base);
    w[l] = peak;
    out.emplace_back(std::move(w));
  }
  return out;
}

Eigen::VectorXd surrogate_features(std::span<const double> w, std::size_t r) {
  if (w.size() != r) throw DimensionMismatch("feature map expects " + std::to_string(r) + " weights");
  const auto rr = static_cast<Eigen::Index>(r);
  Eigen::VectorXd z(rr);
  for (Eigen::Index i = 0; i + 1 < rr; ++i) z(i) = w[static_cast<std::size_t>(i)];
  z(rr - 1) = 1.0;
  Eigen::VectorXd phi(rr * (rr + 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < rr; ++i) {
    for (Eigen::Index j = i; j < rr; ++j) phi(k++) = z(i) * z(j);
  }
  return phi;
}

namespace {

struct LocalFrame {
  double center;
  double scale;
};

// Local coordinates u = s (w - 1/r), s = 2r/(r-1), put the uniform sample at
// the origin and each midpoint sample one unit out along its own axis. In
// raw weights those samples are only about 1/r apart, so the quadratic
// features are tiny and a fixed ridge multiplier would flatten the model
// regardless of the data.
LocalFrame local_frame(std::size_t r) {
  return {1.0 / static_cast<double>(r), r > 1 ? 2.0 * static_cast<double>(r) / static_cast<double>(r - 1) : 1.0};
}

Eigen::VectorXd solve_normal(const Eigen::MatrixXd& design, const Eigen::VectorXd& y, const Eigen::VectorXd& penalty,
                             bool check_rank) {
  Eigen::MatrixXd normal = design.transpose() * design;
  normal.diagonal() += penalty;
  Eigen::LLT<Eigen::MatrixXd> llt(normal);
  if (llt.info() != Eigen::Success) throw SingularSystem("ridge normal equations are not positive definite");
  if (check_rank) {
    // LLT can succeed on a numerically singular matrix; check the pivots.
    const Eigen::MatrixXd l = llt.matrixL();
    const double big = normal.diagonal().maxCoeff();
    for (Eigen::Index i = 0; i < l.rows(); ++i) {
      if (l(i, i) * l(i, i) <= 1e-13 * big) throw SingularSystem("design matrix is rank-deficient");
    }
  }
  return llt.solve(design.transpose() * y);
}

// Symmetric (r+1)x(r+1) form M of a quadratic in y = [u_1..u_m, 1], pulled
// back through y = T z_w and folded into upper-triangular Theta.
QuadraticSurrogate pull_back(const Eigen::MatrixXd& m, const Eigen::MatrixXd& t) {
  const Eigen::MatrixXd full = t.transpose() * m * t;
  const Eigen::Index n = full.rows();
  Eigen::MatrixXd upper = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    upper(i, i) = full(i, i);
    for (Eigen::Index j = i + 1; j < n; ++j) upper(i, j) = full(i, j) + full(j, i);
  }
  return QuadraticSurrogate(upper);
}

// Unregularized least squares over the r(r+1)/2 coefficients in local free
// coordinates; the basis does not change the fitted function.
QuadraticSurrogate fit_exact(std::span<const WeightVector> samples, std::span<const double> values, std::size_t r) {
  const auto [center, scale] = local_frame(r);
  const auto p = static_cast<Eigen::Index>(r * (r + 1) / 2);
  Eigen::MatrixXd design(static_cast<Eigen::Index>(samples.size()), p);
  std::vector<double> u(r);
  for (std::size_t l = 0; l < samples.size(); ++l) {
    for (std::size_t i = 0; i + 1 < r; ++i) u[i] = scale * (samples[l][i] - center);
    design.row(static_cast<Eigen::Index>(l)) = surrogate_features(u, r).transpose();
  }
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  const Eigen::MatrixXd theta = QuadraticSurrogate::from_packed(r, solve_normal(design, y, Eigen::VectorXd::Zero(p), true)).theta();

  // z_u = T z_w with T = [[s I, -s c 1], [0, 1]].
  const auto n = static_cast<Eigen::Index>(r);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    t(i, i) = scale;
    t(i, n - 1) = -scale * center;
  }
  t(n - 1, n - 1) = 1.0;
  return pull_back(0.5 * (theta + theta.transpose()), t);
}

}  // namespace

// With alpha > 0 the ridge runs over a constant, r linear and r(r+1)/2
// quadratic monomials of the local coordinates of all r weights. That basis
// is redundant on the simplex, which the penalty resolves, and it treats
// every view alike; eliminating w_r before penalizing would bias the fit
// against the last view. The constant term is not penalized, which keeps
// the fit (and its minimizer) invariant to shifting h. The result is mapped
// back to Theta over the free weights exactly.
QuadraticSurrogate fit_surrogate(std::span<const WeightVector> samples, std::span<const double> values,
                                 double alpha) {
  if (samples.empty() || samples.size() != values.size()) {
    throw LengthMismatch("surrogate fit needs one value per sample");
  }
  if (!(alpha >= 0.0)) throw InvalidArgument("ridge multiplier must be >= 0");
  const std::size_t r = samples.front().size();
  for (const auto& w : samples) {
    if (w.size() != r) throw DimensionMismatch("samples disagree on r");
  }
  if (alpha == 0.0) return fit_exact(samples, values, r);

  const auto [center, scale] = local_frame(r);
  const auto n = static_cast<Eigen::Index>(r);
  const Eigen::Index p = 1 + n + n * (n + 1) / 2;
  Eigen::MatrixXd design(static_cast<Eigen::Index>(samples.size()), p);
  Eigen::VectorXd u(n);
  for (std::size_t l = 0; l < samples.size(); ++l) {
    for (Eigen::Index i = 0; i < n; ++i) u(i) = scale * (samples[l][static_cast<std::size_t>(i)] - center);
    auto row = design.row(static_cast<Eigen::Index>(l));
    row(0) = 1.0;
    row.segment(1, n) = u.transpose();
    Eigen::Index k = 1 + n;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i; j < n; ++j) row(k++) = u(i) * u(j);
    }
  }
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  // The unpenalized constant is eliminated by centring the columns and values.
  const Eigen::RowVectorXd mean_x = design.rightCols(p - 1).colwise().mean();
  const double mean_y = y.mean();
  const Eigen::MatrixXd centred = design.rightCols(p - 1).rowwise() - mean_x;
  const Eigen::VectorXd slopes =
      solve_normal(centred, y.array() - mean_y, Eigen::VectorXd::Constant(p - 1, alpha), false);
  Eigen::VectorXd beta(p);
  beta(0) = mean_y - mean_x.dot(slopes);
  beta.tail(p - 1) = slopes;

  // Symmetric form over [u_1..u_r, 1].
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 1, n + 1);
  m(n, n) = beta(0);
  for (Eigen::Index i = 0; i < n; ++i) m(i, n) = m(n, i) = 0.5 * beta(1 + i);
  Eigen::Index k = 1 + n;
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = beta(k++);
    for (Eigen::Index j = i + 1; j < n; ++j) m(i, j) = m(j, i) = 0.5 * beta(k++);
  }

  // [u; 1] = T z_w: u_i = s (w_i - c) for i < r, and the last weight
  // u_r = s (1 - c) - s sum_{i<r} w_i.
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n + 1, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    t(i, i) = scale;
    t(i, n - 1) = -scale * center;
    t(n - 1, i) = -scale;
  }
  t(n - 1, n - 1) = scale * (1.0 - center);
  t(n, n - 1) = 1.0;
  return pull_back(m, t);
}

}  // namespace sgla
