#ifndef PERIOSCOPE_SIMGEN_HPP
#define PERIOSCOPE_SIMGEN_HPP

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "perioscope/basis.hpp"
#include "perioscope/fpca.hpp"
#include "perioscope/harmonic.hpp"
#include "perioscope/rng.hpp"

namespace perioscope {

/// Functional AR(1)/AR(2) noise plus a layer of sinusoids with a common
/// envelope shape. Noise coordinates are drawn iid standard normal in the
/// generating basis, so each coordinate has unit innovation variance.
struct SimSpec {
  BasisKind basis_kind = BasisKind::bspline_cubic;
  int basis_p = 30;
  int grid_size = 101;

  int p = 30;        // AR coordinate dimension; must equal basis_p
  int n = 0;         // series length N
  int ar_order = 1;  // 1 or 2
  std::vector<Eigen::MatrixXd> phi_specs;  // acting matrices, one per lag

  struct SignalComponent {
    double theta = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
  };
  std::vector<SignalComponent> signal;
  std::vector<double> omega;  // envelope omega(u) as polynomial coefficients in u

  double noise_scale = 1.0;  // multiplies the innovations; 0 turns noise off
  int burn_in = 200;
  std::uint64_t seed = 0;
};

/// Diagonal coefficient operator <Phi(nu_i), nu_i> = value.
inline Eigen::MatrixXd make_phi1_diagonal(int p, double value) {
  if (p < 1) throw std::invalid_argument("make_phi1_diagonal: p must be positive");
  return Eigen::MatrixXd::Identity(p, p) * value;
}

/// Block AR(2) coefficient operator: for each complete triple of indices
/// (3s-2, 3s-1, 3s) the nonzero inner products are
///   <Phi2(nu_{3s-2}), nu_{3s-2}> = 0.7,
///   <Phi2(nu_{3s-1}), nu_{3s-1}> = -0.5,
///   <Phi2(nu_{3s}), nu_{3s}> = <Phi2(nu_{3s}), nu_{3s-2}> = 0.3,
///   <Phi2(nu_{3s}), nu_{3s-1}> = -0.1.
/// Returned as the acting matrix A with A(j,i) = <Phi2(nu_i), nu_j>, so that
/// coordinate vectors evolve as x_t = A x_{t-2} + ...; indices outside
/// complete blocks stay zero.
inline Eigen::MatrixXd make_phi2_block(int p) {
  if (p < 3) throw std::invalid_argument("make_phi2_block: p must be at least 3");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(p, p);
  for (int base = 0; base + 2 < p; base += 3) {
    a(base, base) = 0.7;
    a(base + 1, base + 1) = -0.5;
    a(base + 2, base + 2) = 0.3;
    a(base, base + 2) = 0.3;
    a(base + 1, base + 2) = -0.1;
  }
  return a;
}

/// Spectral radius of the companion matrix of the AR coefficient matrices.
inline double companion_spectral_radius(const std::vector<Eigen::MatrixXd>& phi) {
  if (phi.empty()) return 0.0;
  const int p = static_cast<int>(phi[0].rows());
  const int order = static_cast<int>(phi.size());
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(order * p, order * p);
  for (int k = 0; k < order; ++k) companion.block(0, k * p, p, p) = phi[k];
  if (order > 1)
    companion.block(p, 0, (order - 1) * p, (order - 1) * p) =
        Eigen::MatrixXd::Identity((order - 1) * p, (order - 1) * p);
  Eigen::EigenSolver<Eigen::MatrixXd> eig(companion, false);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

inline void validate_sim_spec(const SimSpec& spec) {
  if (spec.p < 1 || spec.n < 1) throw std::invalid_argument("SimSpec: p and N must be positive");
  if (spec.p != spec.basis_p)
    throw std::invalid_argument("SimSpec: p must equal the generating basis size");
  if (spec.ar_order != static_cast<int>(spec.phi_specs.size()))
    throw std::invalid_argument("SimSpec: ar_order does not match the number of phi matrices");
  if (spec.ar_order > 2) throw std::invalid_argument("SimSpec: ar_order must be 1 or 2");
  for (const Eigen::MatrixXd& m : spec.phi_specs)
    if (m.rows() != spec.p || m.cols() != spec.p)
      throw std::invalid_argument("SimSpec: phi matrices must be p x p");
  if (spec.burn_in < 0) throw std::invalid_argument("SimSpec: negative burn_in");
  if (spec.noise_scale < 0.0) throw std::invalid_argument("SimSpec: negative noise_scale");
  if (spec.omega.empty()) throw std::invalid_argument("SimSpec: omega polynomial is empty");
  for (std::size_t i = 0; i < spec.signal.size(); ++i) {
    if (!(spec.signal[i].theta > 0.0 && spec.signal[i].theta < kPi))
      throw std::invalid_argument("SimSpec: signal frequency outside (0, pi)");
    for (std::size_t j = 0; j < i; ++j)
      if (spec.signal[i].theta == spec.signal[j].theta)
        throw std::invalid_argument("SimSpec: duplicate signal frequencies");
  }
  if (!spec.phi_specs.empty()) {
    const double radius = companion_spectral_radius(spec.phi_specs);
    if (radius >= 1.0 - 1e-9)
      throw std::invalid_argument("SimSpec: AR spectral radius " + std::to_string(radius) +
                                  " >= 1, process not stationary");
  }
}

inline double eval_poly(const std::vector<double>& coef, double u) {
  double value = 0.0;
  for (std::size_t i = coef.size(); i-- > 0;) value = value * u + coef[i];
  return value;
}

struct SimResult {
  FunctionalSample sample;  // N x G grid values
  ScoreSeries scores;       // generating-basis coordinates including the signal
};

/// Generate the functional series on the grid. Deterministic given the seed;
/// the burn-in prefix of the AR recursion is discarded.
inline SimResult simulate(const SimSpec& spec) {
  validate_sim_spec(spec);
  const BasisSet basis = make_basis(spec.basis_kind, spec.basis_p, uniform_grid(spec.grid_size));
  SeededRng rng(spec.seed);

  const int p = spec.p;
  const int total = spec.burn_in + spec.n;
  Eigen::MatrixXd noise(spec.n, p);
  Eigen::VectorXd x1 = Eigen::VectorXd::Zero(p);  // x_{t-1}
  Eigen::VectorXd x2 = Eigen::VectorXd::Zero(p);  // x_{t-2}
  Eigen::VectorXd x(p), eps(p);
  for (int t = 0; t < total; ++t) {
    for (int i = 0; i < p; ++i) eps(i) = rng.normal();
    x = spec.noise_scale * eps;
    if (spec.ar_order >= 1) x += spec.phi_specs[0] * x1;
    if (spec.ar_order >= 2) x += spec.phi_specs[1] * x2;
    x2 = x1;
    x1 = x;
    if (t >= spec.burn_in) noise.row(t - spec.burn_in) = x.transpose();
  }

  Eigen::VectorXd signal(spec.n);
  for (int t = 1; t <= spec.n; ++t) {
    double s = 0.0;
    for (const SimSpec::SignalComponent& c : spec.signal)
      s += c.alpha * std::cos(t * c.theta) + c.beta * std::sin(t * c.theta);
    signal(t - 1) = s;
  }

  const int g = spec.grid_size;
  Eigen::VectorXd omega_grid(g);
  for (int i = 0; i < g; ++i) omega_grid(i) = eval_poly(spec.omega, basis.eval_grid(i));

  SimResult out;
  out.sample.grid = basis.eval_grid;
  out.sample.values = noise * basis.eval_matrix.transpose() + signal * omega_grid.transpose();

  FunctionalSample omega_sample;
  omega_sample.grid = basis.eval_grid;
  omega_sample.values = omega_grid.transpose();
  const Eigen::RowVectorXd omega_coef = project(omega_sample, basis).row(0);
  out.scores.scores = noise + signal * omega_coef;
  return out;
}

// Shipped model presets used across benchmarks and the test suite.

/// AR(2) noise on a 30-function cubic B-spline basis with three unit cosines
/// at 2 pi/5, 2 pi/6, 2 pi/15 under the envelope 1 + u^2.
inline SimSpec make_ar2_threefreq_spec(int n, std::uint64_t seed) {
  SimSpec spec;
  spec.basis_kind = BasisKind::bspline_cubic;
  spec.basis_p = 30;
  spec.grid_size = 101;
  spec.p = 30;
  spec.n = n;
  spec.ar_order = 2;
  spec.phi_specs = {make_phi1_diagonal(30, 0.2), make_phi2_block(30)};
  spec.signal = {{2.0 * kPi / 5.0, 1.0, 0.0},
                 {2.0 * kPi / 6.0, 1.0, 0.0},
                 {2.0 * kPi / 15.0, 1.0, 0.0}};
  spec.omega = {1.0, 0.0, 1.0};  // 1 + u^2
  spec.seed = seed;
  return spec;
}

/// Same AR(2) noise without the envelope (omega = 1); amplitudes either 1 or
/// the local-alternative scaling (20, 20, 10)/sqrt(N).
inline SimSpec make_ar2_threefreq_flat_spec(int n, std::uint64_t seed, bool local_alternative) {
  SimSpec spec = make_ar2_threefreq_spec(n, seed);
  spec.omega = {1.0};
  if (local_alternative) {
    const double root_n = std::sqrt(static_cast<double>(n));
    spec.signal[0].alpha = 20.0 / root_n;
    spec.signal[1].alpha = 20.0 / root_n;
    spec.signal[2].alpha = 10.0 / root_n;
  }
  return spec;
}

/// AR(1) noise (diagonal 0.5) on a 10-function Fourier basis with five unit
/// cosines at 2 pi/4, 2 pi/5, 2 pi/6, 2 pi/20, 2 pi/30; the local
/// alternative scales every amplitude by 55/sqrt(N).
inline SimSpec make_ar1_fivefreq_spec(int n, std::uint64_t seed, bool local_alternative) {
  SimSpec spec;
  spec.basis_kind = BasisKind::fourier;
  spec.basis_p = 10;
  spec.grid_size = 101;
  spec.p = 10;
  spec.n = n;
  spec.ar_order = 1;
  spec.phi_specs = {make_phi1_diagonal(10, 0.5)};
  const double amp = local_alternative ? 55.0 / std::sqrt(static_cast<double>(n)) : 1.0;
  for (double period : {4.0, 5.0, 6.0, 20.0, 30.0})
    spec.signal.push_back({2.0 * kPi / period, amp, 0.0});
  spec.omega = {1.0};
  spec.seed = seed;
  return spec;
}

}  // namespace perioscope

#endif  // PERIOSCOPE_SIMGEN_HPP
