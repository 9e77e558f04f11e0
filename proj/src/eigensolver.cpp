#include "sgla/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "sgla/errors.hpp"
#include "sgla/kernels.hpp"

namespace sgla {
namespace {

constexpr double kSpectralShift = 2.0;

// Applies B = 2I - M column by column.
class ShiftedOperator {
 public:
  explicit ShiftedOperator(const SparseSymMatrix& m) : m_(m), tmp_(static_cast<std::size_t>(m.size())) {}

  void apply(const Eigen::MatrixXd& x, Eigen::Ref<Eigen::MatrixXd> y) {
    const auto n = static_cast<std::size_t>(m_.size());
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      kernels::spmv(m_, {x.col(c).data(), n}, tmp_);
      for (std::size_t i = 0; i < n; ++i) y(static_cast<Eigen::Index>(i), c) = kSpectralShift * x(static_cast<Eigen::Index>(i), c) - tmp_[i];
    }
    matvecs_ += static_cast<std::size_t>(x.cols());
  }

  std::size_t matvecs() const { return matvecs_; }

 private:
  const SparseSymMatrix& m_;
  std::vector<double> tmp_;
  std::size_t matvecs_ = 0;
};

class BasisBuilder {
 public:
  BasisBuilder(Eigen::Index n, std::uint64_t seed) : n_(n), rng_(seed) {}

  Eigen::VectorXd random_vector() {
    Eigen::VectorXd v(n_);
    for (Eigen::Index i = 0; i < n_; ++i) v(i) = normal_(rng_);
    return v;
  }

  // Orthonormalizes the columns of v against the first `used` columns of q
  // and against each other. Columns that collapse are replaced by fresh
  // random directions. Returns at most `want` columns (fewer only when the
  // space is exhausted).
  Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& q, Eigen::Index used, Eigen::MatrixXd v,
                                 Eigen::Index want) {
    const Eigen::Index room = std::min<Eigen::Index>(want, n_ - used);
    Eigen::MatrixXd out(n_, std::max<Eigen::Index>(room, 0));
    Eigen::Index filled = 0;
    Eigen::Index next_input = 0;
    int attempts = 0;
    while (filled < room) {
      Eigen::VectorXd x;
      if (next_input < v.cols()) {
        x = v.col(next_input++);
      } else {
        x = random_vector();
        ++attempts;
        if (attempts > 10 * (room + 1)) break;
      }
      const double original = x.norm();
      if (original == 0.0) continue;
      for (int pass = 0; pass < 2; ++pass) {
        if (used > 0) x -= q.leftCols(used) * (q.leftCols(used).transpose() * x);
        if (filled > 0) x -= out.leftCols(filled) * (out.leftCols(filled).transpose() * x);
      }
      const double norm = x.norm();
      if (norm <= 1e-10 * original) continue;
      out.col(filled++) = x / norm;
    }
    return out.leftCols(filled);
  }

 private:
  Eigen::Index n_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

double clamp_zero(double lambda, double tol) {
  if (std::abs(lambda) <= kZeroClamp) return 0.0;
  if (lambda < 0.0 && -lambda <= tol) return 0.0;
  return lambda;
}

EigenPairs solve(const SparseSymMatrix& m, std::size_t t_req, const EigenOptions& opts) {
  const Eigen::Index n = m.size();
  const auto t = static_cast<Eigen::Index>(t_req);
  if (t < 1 || t > n) {
    throw InvalidArgument("requested " + std::to_string(t_req) + " eigenvalues of a " +
                          std::to_string(n) + "x" + std::to_string(n) + " matrix");
  }
  if (!(opts.tol > 0.0)) throw InvalidArgument("eigensolver tolerance must be positive");
  const std::size_t cap = opts.max_matvecs > 0
                              ? opts.max_matvecs
                              : std::max<std::size_t>(10 * static_cast<std::size_t>(n), 1000);

  const Eigen::Index block = t;
  const Eigen::Index basis_max = std::min<Eigen::Index>(n, std::max<Eigen::Index>(4 * t, t + 40));
  const Eigen::Index keep_max = std::min<Eigen::Index>(basis_max - block, 2 * t + 8);

  ShiftedOperator op(m);
  BasisBuilder builder(n, opts.seed);

  Eigen::MatrixXd q(n, basis_max);
  Eigen::MatrixXd bq(n, basis_max);
  Eigen::Index cols = 0;

  Eigen::MatrixXd start(n, block);
  for (Eigen::Index c = 0; c < block; ++c) start.col(c) = builder.random_vector();
  Eigen::MatrixXd next = builder.orthonormalize(q, 0, std::move(start), block);

  Eigen::VectorXd theta;
  Eigen::MatrixXd ritz;
  Eigen::MatrixXd b_ritz;
  Eigen::VectorXd residuals;

  for (;;) {
    // Grow the block Krylov basis until it is full.
    while (cols < basis_max && next.cols() > 0) {
      const Eigen::Index bb = std::min<Eigen::Index>(next.cols(), basis_max - cols);
      q.middleCols(cols, bb) = next.leftCols(bb);
      op.apply(next.leftCols(bb), bq.middleCols(cols, bb));
      cols += bb;
      if (cols >= basis_max) break;
      next = builder.orthonormalize(q, cols, bq.middleCols(cols - bb, bb), block);
    }

    // Rayleigh-Ritz on the current basis.
    Eigen::MatrixXd proj = q.leftCols(cols).transpose() * bq.leftCols(cols);
    proj = 0.5 * (proj + proj.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(proj);
    if (es.info() != Eigen::Success) throw NoConvergence(op.matvecs(), INFINITY);

    // Largest Ritz values first (= smallest eigenvalues of m).
    const Eigen::Index keep = std::min<Eigen::Index>(cols, std::max<Eigen::Index>(t, keep_max));
    Eigen::MatrixXd s = es.eigenvectors().rightCols(keep).rowwise().reverse();
    theta = es.eigenvalues().tail(keep).reverse();
    ritz = q.leftCols(cols) * s;
    b_ritz = bq.leftCols(cols) * s;
    Eigen::MatrixXd res = b_ritz.leftCols(t) - ritz.leftCols(t) * theta.head(t).asDiagonal();
    residuals = res.colwise().norm().transpose();

    const bool full_space = cols >= n;
    if (residuals.maxCoeff() <= opts.tol || full_space) break;
    if (op.matvecs() >= cap) throw NoConvergence(op.matvecs(), residuals.maxCoeff());

    // Thick restart: keep the leading Ritz vectors, continue from the
    // residuals of the wanted ones.
    const Eigen::Index kept = std::min<Eigen::Index>(keep, basis_max - block);
    q.leftCols(kept) = ritz.leftCols(kept);
    bq.leftCols(kept) = b_ritz.leftCols(kept);
    cols = kept;
    next = builder.orthonormalize(q, cols, res, block);
    if (next.cols() == 0) break;
  }

  // Report true residuals of the returned pairs.
  Eigen::MatrixXd y = ritz.leftCols(t);
  Eigen::MatrixXd by(n, t);
  op.apply(y, by);
  Eigen::MatrixXd res = by - y * theta.head(t).asDiagonal();

  EigenPairs out;
  out.spectrum.values.resize(static_cast<std::size_t>(t));
  out.spectrum.residuals.resize(static_cast<std::size_t>(t));
  for (Eigen::Index i = 0; i < t; ++i) {
    out.spectrum.values[static_cast<std::size_t>(i)] = clamp_zero(kSpectralShift - theta(i), opts.tol);
    out.spectrum.residuals[static_cast<std::size_t>(i)] = res.col(i).norm();
  }
  // Ritz values come out sorted; guard against ties reordered by clamping.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(t));
  for (Eigen::Index i = 0; i < t; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return out.spectrum.values[static_cast<std::size_t>(a)] < out.spectrum.values[static_cast<std::size_t>(b)];
  });
  SpectrumSlice sorted;
  out.vectors.resize(n, t);
  for (Eigen::Index i = 0; i < t; ++i) {
    const auto src = order[static_cast<std::size_t>(i)];
    sorted.values.push_back(out.spectrum.values[static_cast<std::size_t>(src)]);
    sorted.residuals.push_back(out.spectrum.residuals[static_cast<std::size_t>(src)]);
    Eigen::VectorXd v = y.col(src);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    out.vectors.col(i) = v;
  }
  sorted.matvecs = op.matvecs();
  out.spectrum = std::move(sorted);
  return out;
}

}  // namespace

SpectrumSlice smallest_eigenvalues(const SparseSymMatrix& m, std::size_t t, const EigenOptions& opts) {
  return solve(m, t, opts).spectrum;
}

EigenPairs smallest_eigenvectors(const SparseSymMatrix& m, std::size_t t, const EigenOptions& opts) {
  return solve(m, t, opts);
}

}  // namespace sgla
