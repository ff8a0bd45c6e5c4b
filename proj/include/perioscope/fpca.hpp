#ifndef PERIOSCOPE_FPCA_HPP
#define PERIOSCOPE_FPCA_HPP

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

#include "perioscope/basis.hpp"

namespace perioscope {

/// N x p matrix of scores, row t = (<Y_t, nu_1>, ..., <Y_t, nu_p>).
struct ScoreSeries {
  Eigen::MatrixXd scores;

  int n() const { return static_cast<int>(scores.rows()); }
  int p() const { return static_cast<int>(scores.cols()); }

  void validate() const {
    if (n() == 0 || p() == 0) throw std::invalid_argument("ScoreSeries: empty");
    if (!scores.allFinite()) throw std::invalid_argument("ScoreSeries: non-finite entries");
    if (n() <= 2 * p())
      throw std::invalid_argument("ScoreSeries: N = " + std::to_string(n()) +
                                  " must exceed 2p = " + std::to_string(2 * p()));
  }
};

/// Unit direction maximizing the Rayleigh quotient of the score covariance.
struct PcDirection {
  Eigen::VectorXd v;
  double eigenvalue = 0.0;
};

/// Estimated eigenfunctions expressed in a working basis.
struct Eigenfunctions {
  BasisSet basis;
  Eigen::MatrixXd coef;        // basis.p x p, column l = nu_hat_l coefficients
  Eigen::VectorXd eigenvalues; // descending, nonnegative

  int p() const { return static_cast<int>(coef.cols()); }
};

namespace detail {

// Deterministic sign: first coordinate that is clearly nonzero made positive.
inline void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  const double scale = v.cwiseAbs().maxCoeff();
  if (scale <= 0.0) return;
  for (int i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-9 * scale) {
      if (v(i) < 0.0) v = -v;
      return;
    }
  }
}

}  // namespace detail

/// Pointwise average of the sample rows.
inline Eigen::VectorXd mean_function(const FunctionalSample& sample) {
  if (sample.n() == 0) throw std::invalid_argument("mean_function: empty sample");
  return sample.values.colwise().mean();
}

/// Top-p eigenpairs of the empirical covariance operator, computed in
/// basis-coefficient space against the basis Gram matrix. Eigenfunctions are
/// L2-orthonormal with the first clearly-nonzero coefficient positive;
/// eigenvalues use divisor N and come back in descending order.
inline Eigenfunctions empirical_eigenfunctions(const FunctionalSample& sample,
                                               const BasisSet& basis, int p) {
  if (sample.n() == 0) throw std::invalid_argument("empirical_eigenfunctions: empty sample");
  if (p < 1 || p > basis.p)
    throw std::invalid_argument("empirical_eigenfunctions: need 1 <= p <= basis.p");

  FunctionalSample centered;
  centered.grid = sample.grid;
  centered.values = sample.values.rowwise() - mean_function(sample).transpose();

  const Eigen::MatrixXd coeffs = project(centered, basis);                 // N x P
  const Eigen::MatrixXd cov = coeffs.transpose() * coeffs / sample.n();   // P x P

  Eigen::LLT<Eigen::MatrixXd> llt(basis.gram);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("empirical_eigenfunctions: Gram matrix not positive definite");
  const Eigen::MatrixXd l = llt.matrixL();
  const Eigen::MatrixXd reduced = l.transpose() * cov * l;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(reduced);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("empirical_eigenfunctions: eigen solver failed");

  // Ascending from Eigen; count usable directions before taking the top p.
  const Eigen::VectorXd all = eig.eigenvalues();
  const double lambda_max = all(all.size() - 1);
  int rank = 0;
  for (int i = 0; i < all.size(); ++i)
    if (all(i) > 1e-12 * std::max(lambda_max, 0.0)) ++rank;
  if (rank < p)
    throw std::invalid_argument("empirical_eigenfunctions: covariance has numerical rank " +
                                std::to_string(rank) + ", cannot return p = " + std::to_string(p) +
                                " components");

  Eigenfunctions out;
  out.basis = basis;
  out.coef.resize(basis.p, p);
  out.eigenvalues.resize(p);
  const Eigen::MatrixXd lt_inv =
      l.transpose().triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(basis.p, basis.p));
  for (int k = 0; k < p; ++k) {
    const int src = static_cast<int>(all.size()) - 1 - k;
    out.eigenvalues(k) = std::max(all(src), 0.0);
    out.coef.col(k) = lt_inv * eig.eigenvectors().col(src);
    detail::fix_sign(out.coef.col(k));
  }
  return out;
}

/// Quadrature inner products <Y_t, nu_hat_l> for every t and l.
inline ScoreSeries score_series(const FunctionalSample& sample, const Eigenfunctions& ef) {
  if (sample.grid.size() != ef.basis.eval_grid.size() ||
      (sample.grid - ef.basis.eval_grid).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("score_series: sample grid differs from eigenfunction grid");
  const Eigen::MatrixXd values_on_grid = ef.basis.eval_matrix * ef.coef;  // G x p
  const Eigen::VectorXd w = trapezoid_weights(sample.grid);
  ScoreSeries out;
  out.scores = sample.values * (w.asDiagonal() * values_on_grid);
  return out;
}

/// Leading eigenvector of the demeaned score covariance (divisor N), with the
/// deterministic sign convention. Errors out on a degenerate (zero) covariance.
inline PcDirection first_pc(const ScoreSeries& series) {
  const int n = series.n();
  if (n < 2) throw std::invalid_argument("first_pc: need at least 2 observations");
  const Eigen::MatrixXd centered = series.scores.rowwise() - series.scores.colwise().mean();
  const Eigen::MatrixXd cov = centered.transpose() * centered / n;
  if (cov.trace() <= 0.0)
    throw std::invalid_argument("first_pc: score covariance is zero (degenerate series)");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) throw std::runtime_error("first_pc: eigen solver failed");
  PcDirection dir;
  dir.eigenvalue = eig.eigenvalues()(cov.rows() - 1);
  dir.v = eig.eigenvectors().col(cov.rows() - 1);
  dir.v.normalize();
  detail::fix_sign(dir.v);
  return dir;
}

/// Scalar series Y~_t = v' Y_t.
inline Eigen::VectorXd scalarize(const ScoreSeries& series, const PcDirection& dir) {
  if (dir.v.size() != series.p())
    throw std::invalid_argument("scalarize: direction dimension " + std::to_string(dir.v.size()) +
                                " does not match score dimension " + std::to_string(series.p()));
  return series.scores * dir.v;
}

}  // namespace perioscope

#endif  // PERIOSCOPE_FPCA_HPP
