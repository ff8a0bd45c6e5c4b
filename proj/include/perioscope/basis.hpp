#ifndef PERIOSCOPE_BASIS_HPP
#define PERIOSCOPE_BASIS_HPP

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace perioscope {

enum class BasisKind { bspline_cubic, fourier, haar };

inline const char* to_string(BasisKind k) {
  switch (k) {
    case BasisKind::bspline_cubic: return "bspline_cubic";
    case BasisKind::fourier: return "fourier";
    case BasisKind::haar: return "haar";
  }
  return "unknown";
}

inline BasisKind basis_kind_from_string(const std::string& s) {
  if (s == "bspline_cubic" || s == "bspline") return BasisKind::bspline_cubic;
  if (s == "fourier") return BasisKind::fourier;
  if (s == "haar") return BasisKind::haar;
  throw std::invalid_argument("unknown basis kind: " + s);
}

/// A family of p functions on [0,1] tabulated on a fixed evaluation grid.
/// Immutable after construction; safe to share across threads.
struct BasisSet {
  BasisKind kind;
  int p = 0;
  Eigen::VectorXd eval_grid;    // G strictly increasing points in [0,1]
  Eigen::MatrixXd eval_matrix;  // G x p values
  Eigen::MatrixXd gram;         // p x p inner products
};

/// N functional observations sampled on a common grid; row t = Y_t(u).
struct FunctionalSample {
  Eigen::VectorXd grid;    // G points in [0,1]
  Eigen::MatrixXd values;  // N x G

  int n() const { return static_cast<int>(values.rows()); }
  int grid_size() const { return static_cast<int>(grid.size()); }
};

/// Trapezoidal quadrature weights for an increasing grid.
inline Eigen::VectorXd trapezoid_weights(const Eigen::VectorXd& grid) {
  const int g = static_cast<int>(grid.size());
  if (g < 2) throw std::invalid_argument("trapezoid_weights: need at least 2 grid points");
  Eigen::VectorXd w(g);
  w(0) = 0.5 * (grid(1) - grid(0));
  for (int i = 1; i + 1 < g; ++i) w(i) = 0.5 * (grid(i + 1) - grid(i - 1));
  w(g - 1) = 0.5 * (grid(g - 1) - grid(g - 2));
  return w;
}

inline Eigen::VectorXd uniform_grid(int g) {
  if (g < 2) throw std::invalid_argument("uniform_grid: need at least 2 points");
  Eigen::VectorXd u(g);
  for (int i = 0; i < g; ++i) u(i) = static_cast<double>(i) / (g - 1);
  return u;
}

namespace detail {

inline void check_grid(const Eigen::VectorXd& grid) {
  const int g = static_cast<int>(grid.size());
  if (g < 2) throw std::invalid_argument("basis grid: need at least 2 points");
  if (grid(0) < -1e-12 || grid(g - 1) > 1.0 + 1e-12)
    throw std::invalid_argument("basis grid: points must lie in [0,1]");
  for (int i = 1; i < g; ++i)
    if (!(grid(i) > grid(i - 1)))
      throw std::invalid_argument("basis grid: points must be strictly increasing");
}

// Clamped uniform knot vector; degree is lowered below cubic when p < 4 so
// small families (p = 1, 2, 3) remain usable.
inline void bspline_knots(int p, int& degree, std::vector<double>& knots) {
  degree = std::min(3, p - 1);
  const int interior = p - degree - 1;
  knots.clear();
  for (int i = 0; i <= degree; ++i) knots.push_back(0.0);
  for (int i = 1; i <= interior; ++i)
    knots.push_back(static_cast<double>(i) / (interior + 1));
  for (int i = 0; i <= degree; ++i) knots.push_back(1.0);
}

// Cox-de Boor values of all p B-splines at u; 0/0 terms read as 0.
inline void bspline_row(double u, int p, int degree, const std::vector<double>& knots,
                        Eigen::VectorXd& out) {
  const int nk = static_cast<int>(knots.size());
  std::vector<double> n0(nk - 1, 0.0);
  for (int i = 0; i + 1 < nk; ++i) {
    const bool last_span = knots[i] < knots[i + 1] && knots[i + 1] >= 1.0;
    if ((u >= knots[i] && u < knots[i + 1]) || (last_span && u >= 1.0))
      n0[i] = 1.0;
  }
  for (int r = 1; r <= degree; ++r) {
    for (int i = 0; i + r + 1 < nk; ++i) {
      double left = 0.0, right = 0.0;
      const double dl = knots[i + r] - knots[i];
      const double dr = knots[i + r + 1] - knots[i + 1];
      if (dl > 0.0) left = (u - knots[i]) / dl * n0[i];
      if (dr > 0.0) right = (knots[i + r + 1] - u) / dr * n0[i + 1];
      n0[i] = left + right;
    }
  }
  for (int i = 0; i < p; ++i) out(i) = n0[i];
}

inline double haar_wavelet(double u, int level, int shift) {
  const double scale = std::pow(2.0, level);
  const double lo = shift / scale;
  const double mid = (shift + 0.5) / scale;
  const double hi = (shift + 1.0) / scale;
  const double amp = std::sqrt(scale);
  if (u >= lo && u < mid) return amp;
  if (u >= mid && u < hi) return -amp;
  if (u >= 1.0 && hi >= 1.0 && shift == static_cast<int>(scale) - 1) return -amp;
  return 0.0;
}

}  // namespace detail

/// Build a basis of p functions evaluated on the given grid.
///
/// Conventions: Fourier is nu_1(u)=1, nu_{2k}=sqrt(2)cos(2 pi k u),
/// nu_{2k+1}=sqrt(2)sin(2 pi k u); Haar is nu_1=1 followed by dyadic
/// wavelets in (level, shift) order, truncated at p; B-splines use clamped
/// uniform knots. Fourier and Haar are exactly orthonormal in L2([0,1]), so
/// their Gram matrix is the identity; the B-spline Gram is computed by
/// trapezoidal quadrature on the grid.
inline BasisSet make_basis(BasisKind kind, int p, const Eigen::VectorXd& grid) {
  if (p < 1) throw std::invalid_argument("make_basis: p must be positive");
  detail::check_grid(grid);
  const int g = static_cast<int>(grid.size());
  if (g < p)
    throw std::invalid_argument("make_basis: grid has " + std::to_string(g) +
                                " points, fewer than p = " + std::to_string(p) +
                                "; eval matrix would be rank deficient");

  BasisSet basis;
  basis.kind = kind;
  basis.p = p;
  basis.eval_grid = grid;
  basis.eval_matrix.resize(g, p);

  constexpr double two_pi = 6.283185307179586476925286766559;
  switch (kind) {
    case BasisKind::fourier:
      for (int i = 0; i < g; ++i) {
        const double u = grid(i);
        basis.eval_matrix(i, 0) = 1.0;
        for (int j = 1; j < p; ++j) {
          const int k = (j + 1) / 2;
          basis.eval_matrix(i, j) = (j % 2 == 1) ? std::sqrt(2.0) * std::cos(two_pi * k * u)
                                                 : std::sqrt(2.0) * std::sin(two_pi * k * u);
        }
      }
      break;
    case BasisKind::haar:
      for (int i = 0; i < g; ++i) {
        const double u = grid(i);
        basis.eval_matrix(i, 0) = 1.0;
        for (int j = 1; j < p; ++j) {
          const int level = static_cast<int>(std::floor(std::log2(static_cast<double>(j))));
          const int shift = j - (1 << level);
          basis.eval_matrix(i, j) = detail::haar_wavelet(u, level, shift);
        }
      }
      break;
    case BasisKind::bspline_cubic: {
      int degree = 0;
      std::vector<double> knots;
      detail::bspline_knots(p, degree, knots);
      Eigen::VectorXd row(p);
      for (int i = 0; i < g; ++i) {
        detail::bspline_row(grid(i), p, degree, knots, row);
        basis.eval_matrix.row(i) = row.transpose();
      }
      break;
    }
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis.eval_matrix);
  if (qr.rank() < p)
    throw std::invalid_argument("make_basis: eval matrix rank " + std::to_string(qr.rank()) +
                                " < p = " + std::to_string(p) + " on this grid");

  if (kind == BasisKind::bspline_cubic) {
    const Eigen::VectorXd w = trapezoid_weights(grid);
    basis.gram = basis.eval_matrix.transpose() * w.asDiagonal() * basis.eval_matrix;
  } else {
    basis.gram = Eigen::MatrixXd::Identity(p, p);
  }
  return basis;
}

/// Least-squares coefficients of each sample row in the basis, via normal
/// equations weighted by trapezoidal quadrature. Returns N x p.
inline Eigen::MatrixXd project(const FunctionalSample& sample, const BasisSet& basis) {
  if (sample.grid.size() != basis.eval_grid.size() ||
      (sample.grid - basis.eval_grid).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("project: sample grid differs from basis grid");

  const Eigen::VectorXd w = trapezoid_weights(basis.eval_grid);
  const Eigen::MatrixXd bw = w.asDiagonal() * basis.eval_matrix;             // G x p
  const Eigen::MatrixXd normal = basis.eval_matrix.transpose() * bw;        // p x p
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(normal);
  if (qr.rank() < basis.p)
    throw std::invalid_argument("project: normal matrix rank deficient for basis size p = " +
                                std::to_string(basis.p));
  return qr.solve(bw.transpose() * sample.values.transpose()).transpose();  // N x p
}

/// Inverse of project for exact coefficients: rows of values are
/// sum_i coef(t,i) nu_i on the basis grid.
inline FunctionalSample reconstruct(const Eigen::MatrixXd& coef, const BasisSet& basis) {
  FunctionalSample out;
  out.grid = basis.eval_grid;
  out.values = coef * basis.eval_matrix.transpose();
  return out;
}

}  // namespace perioscope

#endif  // PERIOSCOPE_BASIS_HPP
