#ifndef PERIOSCOPE_ARFIT_HPP
#define PERIOSCOPE_ARFIT_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace perioscope {

/// Conditional least-squares autoregression x_t ~ x_{t-1}, ..., x_{t-h}
/// without intercept, evaluated on a fixed prediction window.
struct ArFit {
  int h = 0;
  Eigen::VectorXd coef;
  double sigma2 = 0.0;   // RSS / number of predicted points
  int window_start = 1;  // first predicted index, 1-based
};

namespace detail {

// Lag matrix and targets for t = window_start..N (1-based).
inline void ar_window(const Eigen::VectorXd& series, int h, int window_start,
                      Eigen::VectorXd& y, Eigen::MatrixXd& lags) {
  const int n = static_cast<int>(series.size());
  const int n_pred = n - window_start + 1;
  y = series.segment(window_start - 1, n_pred);
  lags.resize(n_pred, h);
  for (int i = 0; i < n_pred; ++i) {
    const int t = window_start + i;
    for (int j = 1; j <= h; ++j) lags(i, j - 1) = series(t - j - 1);
  }
}

}  // namespace detail

/// Fit an order-h autoregression over t = window_start..N.
/// A windowed series that is identically zero returns the zero fit by
/// convention; any other rank-deficient lag matrix is an error.
inline ArFit fit_ar(const Eigen::VectorXd& series, int h, int window_start) {
  const int n = static_cast<int>(series.size());
  if (h < 0) throw std::invalid_argument("fit_ar: negative order");
  if (window_start <= h)
    throw std::invalid_argument("fit_ar: window_start must exceed the order h");
  const int n_pred = n - window_start + 1;
  if (n_pred < std::max(1, 5 * h))
    throw std::invalid_argument("fit_ar: window of " + std::to_string(n_pred) +
                                " points too short for order " + std::to_string(h));

  ArFit fit;
  fit.h = h;
  fit.window_start = window_start;
  fit.coef = Eigen::VectorXd::Zero(h);

  if (h == 0) {
    fit.sigma2 = series.segment(window_start - 1, n_pred).squaredNorm() / n_pred;
    return fit;
  }

  Eigen::VectorXd y;
  Eigen::MatrixXd lags;
  detail::ar_window(series, h, window_start, y, lags);

  if (y.squaredNorm() == 0.0 && lags.squaredNorm() == 0.0) {
    fit.sigma2 = 0.0;
    return fit;
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(lags);
  if (qr.rank() < h)
    throw std::invalid_argument("fit_ar: lag matrix rank " + std::to_string(qr.rank()) +
                                " < h = " + std::to_string(h) +
                                " (series nearly deterministic or constant)");
  fit.coef = qr.solve(y);
  fit.sigma2 = (y - lags * fit.coef).squaredNorm() / n_pred;
  return fit;
}

/// One-step prediction errors sigma2(h) for h = 1..H in stationary
/// autocovariance form: the lag moment matrix is the Toeplitz matrix of
/// biased sample autocovariances, solved by Levinson-Durbin. This is the
/// sample version of the population quantities Gamma_X(h) and
/// X(h)' X~ / N that define sigma2(h) in theory; unlike the raw
/// regression it keeps the implied AR polynomial stable, so a leftover
/// sinusoid inflates the error at every order instead of being absorbed
/// by roots on the unit circle. The recursion sigma2(h+1) =
/// sigma2(h) (1 - k^2) makes the profile non-increasing exactly.
inline std::vector<double> stationary_prediction_error_profile(const Eigen::VectorXd& series,
                                                               int max_order) {
  const int n = static_cast<int>(series.size());
  if (max_order < 1)
    throw std::invalid_argument("stationary_prediction_error_profile: H must be >= 1");
  if (n <= 5 * max_order)
    throw std::invalid_argument("stationary_prediction_error_profile: N = " + std::to_string(n) +
                                " too short for H = " + std::to_string(max_order));
  std::vector<double> gamma(max_order + 1, 0.0);
  for (int k = 0; k <= max_order; ++k) {
    double acc = 0.0;
    for (int t = 0; t + k < n; ++t) acc += series(t) * series(t + k);
    gamma[k] = acc / n;
  }
  std::vector<double> sigma2(max_order, 0.0);
  if (gamma[0] <= 0.0) return sigma2;  // identically zero series

  std::vector<double> a(max_order + 1, 0.0), a_prev(max_order + 1, 0.0);
  double err = gamma[0];
  for (int h = 1; h <= max_order; ++h) {
    double acc = gamma[h];
    for (int j = 1; j < h; ++j) acc -= a_prev[j] * gamma[h - j];
    const double reflection = acc / err;
    a[h] = reflection;
    for (int j = 1; j < h; ++j) a[j] = a_prev[j] - reflection * a_prev[h - j];
    err *= (1.0 - reflection * reflection);
    if (!(err > 0.0)) {  // deterministic series; rounding can cross zero
      err = 0.0;
      break;
    }
    sigma2[h - 1] = err;
    a_prev = a;
  }
  return sigma2;
}

/// Prediction errors sigma2(h) for h = 1..H from the windowed regression
/// fit, every order fitted on the common window starting at H+1 so the
/// sequence is non-increasing exactly (nested regressors, identical data).
/// Series that become perfectly predictable at some order keep zeros for
/// all larger orders; the rank-tolerant solve keeps the profile well
/// defined there.
inline std::vector<double> prediction_error_profile(const Eigen::VectorXd& series, int max_order) {
  const int n = static_cast<int>(series.size());
  if (max_order < 1) throw std::invalid_argument("prediction_error_profile: H must be >= 1");
  if (n <= 5 * max_order)
    throw std::invalid_argument("prediction_error_profile: N = " + std::to_string(n) +
                                " too short for H = " + std::to_string(max_order));
  const int window_start = max_order + 1;
  const int n_pred = n - max_order;
  const double zero_tol = 1e-14 * series.squaredNorm() / n;

  std::vector<double> sigma2(max_order, 0.0);
  for (int h = 1; h <= max_order; ++h) {
    Eigen::VectorXd y;
    Eigen::MatrixXd lags;
    detail::ar_window(series, h, window_start, y, lags);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(lags);
    const double value = (y - lags * qr.solve(y)).squaredNorm() / n_pred;
    if (value <= zero_tol) break;  // later orders stay zero
    sigma2[h - 1] = value;
  }
  return sigma2;
}

}  // namespace perioscope

#endif  // PERIOSCOPE_ARFIT_HPP
