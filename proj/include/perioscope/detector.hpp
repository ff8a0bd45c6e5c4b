#ifndef PERIOSCOPE_DETECTOR_HPP
#define PERIOSCOPE_DETECTOR_HPP

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "perioscope/arfit.hpp"
#include "perioscope/fpca.hpp"
#include "perioscope/freqscan.hpp"
#include "perioscope/harmonic.hpp"

namespace perioscope {

enum class CriterionKind { bic, aic };

inline const char* to_string(CriterionKind k) {
  return k == CriterionKind::bic ? "bic" : "aic";
}

inline CriterionKind criterion_kind_from_string(const std::string& s) {
  if (s == "bic") return CriterionKind::bic;
  if (s == "aic") return CriterionKind::aic;
  throw std::invalid_argument("unknown criterion kind: " + s);
}

struct CriterionConfig {
  double kappa = 5.0;
  int max_ar_order = 8;   // H
  int r_max = 10;
  CriterionKind criterion = CriterionKind::bic;

  void validate() const {
    if (!(kappa > 0.0)) throw std::invalid_argument("CriterionConfig: kappa must be positive");
    if (max_ar_order < 1) throw std::invalid_argument("CriterionConfig: H must be >= 1");
    if (r_max < 1) throw std::invalid_argument("CriterionConfig: r_max must be >= 1");
  }
};

/// log sigma2 plus the penalty: (kappa r + h) log N / N for bic,
/// 2 (kappa r + h) / N for aic.
inline double phi(double sigma2, int r, int h, int n, const CriterionConfig& cfg) {
  if (!(sigma2 > 0.0))
    throw std::domain_error("phi: sigma2 = " + std::to_string(sigma2) +
                            " is not positive (series perfectly explained)");
  const double penalty_units = cfg.kappa * r + h;
  const double penalty = cfg.criterion == CriterionKind::bic
                             ? penalty_units * std::log(static_cast<double>(n)) / n
                             : 2.0 * penalty_units / n;
  return std::log(sigma2) + penalty;
}

struct TraceEntry {
  int r = 0;
  int best_h = 0;
  double sigma2 = 0.0;
  double phi = 0.0;  // -inf when sigma2 is exactly zero
};

struct DetectionResult {
  int r_hat = 0;
  std::vector<double> freqs;       // theta_hat_1 .. theta_hat_{r_hat}
  std::vector<int> best_h;         // per visited r, aligned with trace
  std::vector<TraceEntry> trace;   // visited prefix r = 0..r_hat+1 (or cap)
  HarmonicFit scalar_fit;          // joint fit of the scalar series on freqs

  // Diagnostics.
  double leading_eigenvalue = 0.0;
  double leading_share = 0.0;      // of total score variance
  double grid_resolution = 0.0;    // 2 pi / N
  bool cap_hit = false;
  bool degenerate = false;         // some stage had zero prediction error
  bool grid_exhausted = false;
  bool h4_regime_warning = false;  // H^4 > N, outside the theory regime
};

namespace detail {

struct StageEval {
  int best_h = 0;
  double sigma2 = 0.0;
  double phi_value = 0.0;
  bool ar_degenerate = false;  // zero prediction error, nonzero residual
};

// Minimize phi(r, h) over h = 1..H for the residual series of stage r.
// sigma2(h) comes from the stationary autocovariance form: the windowed
// regression profile lets high-order fits park roots on the unit circle and
// swallow leftover sinusoids when H is large relative to N^(1/4), which
// collapses the criterion's usable kappa range.
inline StageEval evaluate_stage(const Eigen::VectorXd& residual, int r, int n,
                                const CriterionConfig& cfg) {
  const std::vector<double> profile = stationary_prediction_error_profile(residual, cfg.max_ar_order);
  StageEval eval;
  eval.best_h = 0;
  eval.phi_value = std::numeric_limits<double>::infinity();
  for (int h = 1; h <= cfg.max_ar_order; ++h) {
    const double sigma2 = profile[h - 1];
    if (sigma2 <= 0.0) {
      eval.best_h = h;
      eval.sigma2 = 0.0;
      eval.phi_value = -std::numeric_limits<double>::infinity();
      eval.ar_degenerate = true;
      return eval;
    }
    const double value = phi(sigma2, r, h, n, cfg);
    if (value < eval.phi_value) {
      eval.phi_value = value;
      eval.sigma2 = sigma2;
      eval.best_h = h;
    }
  }
  return eval;
}

}  // namespace detail

/// The iterative selection of the number of periodicities.
///
/// Stage r = 0 profiles the demeaned first principal component. Each later
/// stage picks the next frequency by scanning the residual periodogram of
/// the vector scores, refits the scalar series jointly on all frequencies
/// found so far, and profiles the new residuals. The recursion continues
/// while the criterion strictly decreases, up to r_max.
///
/// A stage whose harmonic residuals carry (numerically) no energy stops the
/// recursion at that stage: the series is perfectly explained and the
/// criterion is undefined from there on. A stage whose AR prediction error
/// vanishes while harmonic residual energy remains keeps extracting
/// frequencies: the leftover is a noise-free sinusoid, which an
/// autoregression predicts exactly, so the criterion cannot discriminate.
/// Both situations set the degenerate flag.
inline DetectionResult detect(const ScoreSeries& scores, const CriterionConfig& cfg) {
  cfg.validate();
  scores.validate();
  const int n = scores.n();
  if (n <= 5 * cfg.max_ar_order)
    throw std::invalid_argument("detect: N = " + std::to_string(n) + " must exceed 5H = " +
                                std::to_string(5 * cfg.max_ar_order));
  if (n <= 2 * cfg.r_max + 1)
    throw std::invalid_argument("detect: N must exceed 2 r_max + 1");

  DetectionResult result;
  result.grid_resolution = 2.0 * kPi / n;
  const double h4 = std::pow(static_cast<double>(cfg.max_ar_order), 4);
  result.h4_regime_warning = h4 > n;

  const PcDirection pc = first_pc(scores);
  result.leading_eigenvalue = pc.eigenvalue;
  {
    const Eigen::MatrixXd centered = scores.scores.rowwise() - scores.scores.colwise().mean();
    const double total = centered.squaredNorm() / n;
    result.leading_share = total > 0.0 ? pc.eigenvalue / total : 0.0;
  }
  const Eigen::VectorXd scalar = scalarize(scores, pc);
  const double scalar_energy = scalar.squaredNorm() / n;
  const double explained_tol = 1e-13 * std::max(scalar_energy, 1e-300);

  FreqGrid grid = make_freq_grid(n);
  std::vector<HarmonicFit> step_fits;        // one-frequency fits on vector residuals
  std::vector<double> freqs;                 // selected so far
  std::vector<HarmonicFit> scalar_fits;      // joint scalar fit per stage

  // Stage r = 0.
  scalar_fits.push_back(fit_harmonic(scalar, {}));
  double prev_phi = 0.0;
  {
    const double residual_energy = scalar_fits[0].rss / n;
    if (residual_energy <= explained_tol) {
      result.degenerate = true;
      result.trace.push_back({0, 0, 0.0, -std::numeric_limits<double>::infinity()});
      result.best_h.push_back(0);
      result.r_hat = 0;
      result.scalar_fit = scalar_fits[0];
      return result;
    }
    const detail::StageEval eval =
        detail::evaluate_stage(scalar_fits[0].residuals.col(0), 0, n, cfg);
    if (eval.ar_degenerate) result.degenerate = true;
    result.trace.push_back({0, eval.best_h, eval.sigma2, eval.phi_value});
    result.best_h.push_back(eval.best_h);
    prev_phi = eval.phi_value;
  }
  bool prev_ar_degenerate = result.degenerate;
  int r_hat = 0;

  for (int k = 1; k <= cfg.r_max; ++k) {
    if (grid.remaining() == 0) {
      result.grid_exhausted = true;
      break;
    }

    const Eigen::MatrixXd vector_residual =
        step_fits.empty() ? scores.scores : step_fits.back().residuals;
    const ScanResult pick = next_frequency(scores.scores, step_fits, grid);
    step_fits.push_back(fit_harmonic(vector_residual, {pick.theta}));
    freqs.push_back(pick.theta);

    scalar_fits.push_back(fit_harmonic(scalar, freqs));
    const HarmonicFit& stage_fit = scalar_fits.back();

    if (stage_fit.rss / n <= explained_tol) {
      // Perfectly explained by the k frequencies found so far.
      result.degenerate = true;
      result.trace.push_back({k, 0, 0.0, -std::numeric_limits<double>::infinity()});
      result.best_h.push_back(0);
      r_hat = k;
      break;
    }

    const detail::StageEval eval = detail::evaluate_stage(stage_fit.residuals.col(0), k, n, cfg);
    result.trace.push_back({k, eval.best_h, eval.sigma2, eval.phi_value});
    result.best_h.push_back(eval.best_h);

    if (eval.ar_degenerate) {
      result.degenerate = true;
      r_hat = k;
      prev_ar_degenerate = true;
      if (k == cfg.r_max) result.cap_hit = true;
      continue;  // noise-free leftover; keep extracting
    }
    if (prev_ar_degenerate) {
      // Prediction error was zero, now positive: no comparison is meaningful.
      r_hat = k - 1;
      break;
    }
    if (eval.phi_value < prev_phi) {
      r_hat = k;
      prev_phi = eval.phi_value;
      if (k == cfg.r_max) result.cap_hit = true;
    } else {
      r_hat = k - 1;
      break;
    }
  }

  result.r_hat = r_hat;
  result.freqs.assign(freqs.begin(), freqs.begin() + r_hat);
  result.scalar_fit = scalar_fits[r_hat];
  return result;
}

/// r-hat frequency table over a list of penalty constants, one detect run
/// per kappa on the same scores. Rows follow the kappa order given; column
/// j counts runs with r_hat = j.
struct KappaTable {
  std::vector<double> kappas;
  std::vector<std::vector<int>> counts;  // kappas.size() x (r_max + 1)
  int r_max = 0;
};

inline KappaTable kappa_sweep(const ScoreSeries& scores, const std::vector<double>& kappas,
                              const CriterionConfig& cfg_template) {
  if (kappas.empty()) throw std::invalid_argument("kappa_sweep: no kappa values");
  for (double k : kappas)
    if (!(k > 0.0)) throw std::invalid_argument("kappa_sweep: kappa values must be positive");
  KappaTable table;
  table.kappas = kappas;
  table.r_max = cfg_template.r_max;
  table.counts.assign(kappas.size(), std::vector<int>(cfg_template.r_max + 1, 0));
  for (std::size_t i = 0; i < kappas.size(); ++i) {
    CriterionConfig cfg = cfg_template;
    cfg.kappa = kappas[i];
    const DetectionResult res = detect(scores, cfg);
    table.counts[i][res.r_hat] += 1;
  }
  return table;
}

}  // namespace perioscope

#endif  // PERIOSCOPE_DETECTOR_HPP
