#ifndef PERIOSCOPE_FREQSCAN_HPP
#define PERIOSCOPE_FREQSCAN_HPP

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "perioscope/harmonic.hpp"

namespace perioscope {

/// Candidate frequencies 2 pi j / N, j = 1, 2, ..., kept strictly below pi.
/// The point at pi (j = N/2 for even N) is dropped: its sin column is
/// identically zero and the model constrains frequencies to (0, pi).
struct FreqGrid {
  int n = 0;
  std::vector<double> points;
  std::vector<bool> excluded;

  int remaining() const {
    int count = 0;
    for (bool e : excluded)
      if (!e) ++count;
    return count;
  }
};

inline FreqGrid make_freq_grid(int n) {
  if (n < 4) throw std::invalid_argument("make_freq_grid: series too short");
  FreqGrid grid;
  grid.n = n;
  const int j_max = (n - 1) / 2;  // largest j with 2 pi j / n < pi
  grid.points.reserve(j_max);
  for (int j = 1; j <= j_max; ++j) grid.points.push_back(2.0 * kPi * j / n);
  grid.excluded.assign(grid.points.size(), false);
  return grid;
}

/// Periodogram-type statistic: sum over score columns of the squared modulus
/// of the demeaned discrete Fourier transform at theta, scaled by 1/N^2.
inline double pyn(const Eigen::MatrixXd& scores, double theta) {
  if (!(theta > 0.0 && theta < kPi))
    throw std::invalid_argument("pyn: theta must lie in (0, pi)");
  const int n = static_cast<int>(scores.rows());
  Eigen::VectorXd cosv(n), sinv(n);
  for (int t = 1; t <= n; ++t) {
    cosv(t - 1) = std::cos(t * theta);
    sinv(t - 1) = std::sin(t * theta);
  }
  const Eigen::MatrixXd centered = scores.rowwise() - scores.colwise().mean();
  const Eigen::VectorXd re = centered.transpose() * cosv;
  const Eigen::VectorXd im = centered.transpose() * sinv;
  return (re.squaredNorm() + im.squaredNorm()) / (static_cast<double>(n) * n);
}

struct ScanResult {
  double theta = 0.0;
  double value = 0.0;
  int grid_index = -1;
};

/// Evaluate pyn at every non-excluded grid point and return the maximizer;
/// ties go to the lowest frequency regardless of evaluation order.
inline ScanResult scan(const Eigen::MatrixXd& scores, const FreqGrid& grid) {
  if (static_cast<int>(scores.rows()) != grid.n)
    throw std::invalid_argument("scan: series length does not match grid");
  if (grid.remaining() == 0) throw std::invalid_argument("scan: no grid points left");

  const Eigen::MatrixXd centered = scores.rowwise() - scores.colwise().mean();
  const int n = grid.n;
  ScanResult best;
  Eigen::VectorXd cosv(n), sinv(n);
  for (std::size_t idx = 0; idx < grid.points.size(); ++idx) {
    if (grid.excluded[idx]) continue;
    const double theta = grid.points[idx];
    for (int t = 1; t <= n; ++t) {
      cosv(t - 1) = std::cos(t * theta);
      sinv(t - 1) = std::sin(t * theta);
    }
    const double value = ((centered.transpose() * cosv).squaredNorm() +
                          (centered.transpose() * sinv).squaredNorm()) /
                         (static_cast<double>(n) * n);
    if (best.grid_index < 0 || value > best.value) {
      best.theta = theta;
      best.value = value;
      best.grid_index = static_cast<int>(idx);
    }
  }
  return best;
}

/// One step of the sequential frequency estimator: remove the fitted values
/// of the previously selected single-frequency fits, scan the residual, and
/// mark the winning grid point as used.
inline ScanResult next_frequency(const Eigen::MatrixXd& scores,
                                 const std::vector<HarmonicFit>& accumulated_fits,
                                 FreqGrid& grid) {
  const int n = static_cast<int>(scores.rows());
  Eigen::MatrixXd residual = scores;
  for (const HarmonicFit& fit : accumulated_fits)
    residual -= fitted_values(fit, n);
  const ScanResult result = scan(residual, grid);
  grid.excluded[result.grid_index] = true;
  return result;
}

}  // namespace perioscope

#endif  // PERIOSCOPE_FREQSCAN_HPP
