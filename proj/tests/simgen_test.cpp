#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "perioscope/harmonic.hpp"
#include "perioscope/simgen.hpp"

using namespace perioscope;

TEST_CASE("diagonal coefficient matrices") {
  const Eigen::MatrixXd m = make_phi1_diagonal(3, 0.2);
  CHECK((m - 0.2 * Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(make_phi1_diagonal(1, 0.5)(0, 0) == 0.5);
  CHECK(make_phi1_diagonal(4, 0.0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("block coefficient matrix entries") {
  const Eigen::MatrixXd m = make_phi2_block(3);
  // acting matrix rows are output coordinates: A(j,i) = <Phi2(nu_i), nu_j>
  CHECK(m(0, 0) == 0.7);
  CHECK(m(1, 1) == -0.5);
  CHECK(m(2, 2) == 0.3);
  CHECK(m(0, 2) == 0.3);
  CHECK(m(1, 2) == -0.1);
  CHECK(m.cwiseAbs().sum() == doctest::Approx(0.7 + 0.5 + 0.3 + 0.3 + 0.1));

  const Eigen::MatrixXd m4 = make_phi2_block(4);
  CHECK(m4.row(3).cwiseAbs().maxCoeff() == 0.0);
  CHECK(m4.col(3).cwiseAbs().maxCoeff() == 0.0);
  CHECK((m4.topLeftCorner(3, 3) - m).cwiseAbs().maxCoeff() == 0.0);

  const Eigen::MatrixXd m30 = make_phi2_block(30);
  for (int s = 0; s < 10; ++s)
    CHECK((m30.block(3 * s, 3 * s, 3, 3) - m).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("shipped operator pair is stationary") {
  const std::vector<Eigen::MatrixXd> phi{make_phi1_diagonal(30, 0.2), make_phi2_block(30)};
  const double radius = companion_spectral_radius(phi);
  CHECK(radius < 1.0);
  CHECK(radius > 0.9);  // close to the boundary, still stable

  // oracle: roots of lambda^2 - 0.2 lambda - d for the triangular diagonals
  double expected = 0.0;
  for (double d : {0.7, -0.5, 0.3}) {
    const std::complex<double> disc = std::sqrt(std::complex<double>(0.04 + 4.0 * d, 0.0));
    expected = std::max(expected, std::abs((0.2 + disc) / 2.0));
    expected = std::max(expected, std::abs((0.2 - disc) / 2.0));
  }
  CHECK(radius == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("non-stationary specs are refused") {
  SimSpec spec;
  spec.basis_kind = BasisKind::fourier;
  spec.basis_p = spec.p = 2;
  spec.grid_size = 33;
  spec.n = 50;
  spec.ar_order = 1;
  spec.phi_specs = {make_phi1_diagonal(2, 1.01)};
  spec.omega = {1.0};
  spec.seed = 1;
  CHECK_THROWS_WITH_AS(static_cast<void>(simulate(spec)), doctest::Contains("stationary"),
                       std::invalid_argument);
}

TEST_CASE("plain iid noise has unit variance") {
  SimSpec spec;
  spec.basis_kind = BasisKind::fourier;
  spec.basis_p = spec.p = 1;
  spec.grid_size = 33;
  spec.n = 2000;
  spec.ar_order = 1;
  spec.phi_specs = {make_phi1_diagonal(1, 0.0)};
  spec.omega = {1.0};
  spec.seed = 99;
  const SimResult sim = simulate(spec);
  const Eigen::VectorXd x = sim.scores.scores.col(0);
  const double mean = x.mean();
  const double var = (x.array() - mean).square().sum() / x.size();
  CHECK(var > 0.9);
  CHECK(var < 1.1);
}

TEST_CASE("identical seeds reproduce bitwise, different seeds do not") {
  const SimSpec spec = make_ar2_threefreq_spec(60, 321);
  const SimResult a = simulate(spec);
  const SimResult b = simulate(spec);
  CHECK(a.sample.values == b.sample.values);
  CHECK(a.scores.scores == b.scores.scores);

  SimSpec other = spec;
  other.seed = 322;
  CHECK(simulate(other).sample.values != a.sample.values);
}

TEST_CASE("signal layer alone matches the design expansion") {
  SimSpec spec = make_ar2_threefreq_spec(48, 7);
  spec.noise_scale = 0.0;
  const SimResult sim = simulate(spec);

  // scores: coordinate trajectories are design_matrix * (amplitudes x omega coefs)
  std::vector<double> freqs;
  for (const auto& c : spec.signal) freqs.push_back(c.theta);
  const Eigen::MatrixXd design = design_matrix(spec.n, freqs);

  const BasisSet basis = make_basis(spec.basis_kind, spec.basis_p, uniform_grid(spec.grid_size));
  FunctionalSample omega_fn;
  omega_fn.grid = basis.eval_grid;
  omega_fn.values.resize(1, spec.grid_size);
  for (int g = 0; g < spec.grid_size; ++g)
    omega_fn.values(0, g) = eval_poly(spec.omega, basis.eval_grid(g));
  const Eigen::RowVectorXd omega_coef = project(omega_fn, basis).row(0);

  Eigen::MatrixXd coef(2 * freqs.size() + 1, spec.p);
  coef.setZero();
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    coef.row(1 + 2 * k) = spec.signal[k].alpha * omega_coef;
    coef.row(2 + 2 * k) = spec.signal[k].beta * omega_coef;
  }
  CHECK((sim.scores.scores - design * coef).cwiseAbs().maxCoeff() < 1e-12);

  // grid values: same trajectories through the envelope evaluated on the grid
  for (int t = 1; t <= spec.n; ++t) {
    double s = 0.0;
    for (const auto& c : spec.signal) s += c.alpha * std::cos(t * c.theta);
    CHECK(sim.sample.values(t - 1, 10) ==
          doctest::Approx(s * omega_fn.values(0, 10)).epsilon(1e-12));
  }
}

TEST_CASE("local alternative amplitudes scale as 20 over sqrt N") {
  const SimSpec spec = make_ar2_threefreq_flat_spec(120, 5, true);
  CHECK(spec.signal[0].alpha == doctest::Approx(1.8257418583).epsilon(1e-9));
  CHECK(spec.signal[1].alpha == doctest::Approx(1.8257418583).epsilon(1e-9));
  CHECK(spec.signal[2].alpha == doctest::Approx(0.9128709292).epsilon(1e-9));
}

TEST_CASE("five-frequency preset") {
  const SimSpec spec = make_ar1_fivefreq_spec(540, 11, false);
  CHECK(spec.signal.size() == 5);
  CHECK(spec.ar_order == 1);
  CHECK(spec.phi_specs[0](0, 0) == 0.5);
  CHECK(spec.signal[0].theta == doctest::Approx(2.0 * kPi / 4.0));
  CHECK(spec.signal[4].theta == doctest::Approx(2.0 * kPi / 30.0));
  const SimSpec local = make_ar1_fivefreq_spec(540, 11, true);
  CHECK(local.signal[2].alpha == doctest::Approx(55.0 / std::sqrt(540.0)).epsilon(1e-12));
}
