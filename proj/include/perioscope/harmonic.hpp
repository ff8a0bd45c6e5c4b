#ifndef PERIOSCOPE_HARMONIC_HPP
#define PERIOSCOPE_HARMONIC_HPP

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace perioscope {

constexpr double kPi = 3.141592653589793238462643383279;

/// Least-squares harmonic regression: intercept plus (cos, sin) pair per
/// frequency, fitted jointly to every column of an N x d series.
struct HarmonicFit {
  std::vector<double> freqs;  // strictly inside (0, pi), pairwise distinct
  Eigen::MatrixXd coef;       // (2r+1) x d: rows mu, a_1, b_1, ..., a_r, b_r
  Eigen::MatrixXd residuals;  // N x d
  double rss = 0.0;

  int r() const { return static_cast<int>(freqs.size()); }
};

/// Design row (1, cos(t theta_1), sin(t theta_1), ...) at time index t.
inline Eigen::RowVectorXd design_row(double t, const std::vector<double>& freqs) {
  Eigen::RowVectorXd row(2 * freqs.size() + 1);
  row(0) = 1.0;
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    row(2 * k + 1) = std::cos(t * freqs[k]);
    row(2 * k + 2) = std::sin(t * freqs[k]);
  }
  return row;
}

/// Full design for t = 1..N.
inline Eigen::MatrixXd design_matrix(int n, const std::vector<double>& freqs) {
  Eigen::MatrixXd q(n, 2 * freqs.size() + 1);
  for (int t = 1; t <= n; ++t) q.row(t - 1) = design_row(t, freqs);
  return q;
}

namespace detail {

inline void check_freqs(const std::vector<double>& freqs, int n) {
  const double min_gap = 2.0 * kPi / (10.0 * n);
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    if (!(freqs[i] > 0.0 && freqs[i] < kPi))
      throw std::invalid_argument("harmonic fit: frequency " + std::to_string(freqs[i]) +
                                  " outside (0, pi)");
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(freqs[i] - freqs[j]) <= min_gap)
        throw std::invalid_argument("harmonic fit: frequencies " + std::to_string(freqs[j]) +
                                    " and " + std::to_string(freqs[i]) +
                                    " closer than 2*pi/(10N); design ill-conditioned");
  }
}

}  // namespace detail

/// Ordinary least squares of every series column on the shared trigonometric
/// design, solved by Householder QR rather than the normal equations.
inline HarmonicFit fit_harmonic(const Eigen::MatrixXd& series, const std::vector<double>& freqs) {
  const int n = static_cast<int>(series.rows());
  const int ncoef = 2 * static_cast<int>(freqs.size()) + 1;
  if (n <= ncoef)
    throw std::invalid_argument("harmonic fit: N = " + std::to_string(n) +
                                " must exceed 2r+1 = " + std::to_string(ncoef));
  detail::check_freqs(freqs, n);

  const Eigen::MatrixXd q = design_matrix(n, freqs);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(q);
  if (qr.rank() < ncoef)
    throw std::invalid_argument("harmonic fit: design rank deficient (rank " +
                                std::to_string(qr.rank()) + " of " + std::to_string(ncoef) + ")");

  HarmonicFit fit;
  fit.freqs = freqs;
  fit.coef = qr.solve(series);
  fit.residuals = series - q * fit.coef;
  fit.rss = fit.residuals.squaredNorm();
  return fit;
}

inline const Eigen::MatrixXd& residual_series(const HarmonicFit& fit) { return fit.residuals; }

/// Fitted values reproducible from the stored frequencies and coefficients.
inline Eigen::MatrixXd fitted_values(const HarmonicFit& fit, int n) {
  return design_matrix(n, fit.freqs) * fit.coef;
}

}  // namespace perioscope

#endif  // PERIOSCOPE_HARMONIC_HPP
