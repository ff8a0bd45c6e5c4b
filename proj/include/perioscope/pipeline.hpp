#ifndef PERIOSCOPE_PIPELINE_HPP
#define PERIOSCOPE_PIPELINE_HPP

#include <algorithm>
#include <stdexcept>
#include <string>

#include "perioscope/basis.hpp"
#include "perioscope/fpca.hpp"

namespace perioscope {

/// How score series are derived from a functional sample: empirical FPCA
/// scores, or direct projection coefficients on a fixed basis.
enum class ScoreSource { fpca, bspline, fourier, haar };

inline const char* to_string(ScoreSource s) {
  switch (s) {
    case ScoreSource::fpca: return "fpca";
    case ScoreSource::bspline: return "bspline";
    case ScoreSource::fourier: return "fourier";
    case ScoreSource::haar: return "haar";
  }
  return "unknown";
}

inline ScoreSource score_source_from_string(const std::string& s) {
  if (s == "fpca") return ScoreSource::fpca;
  if (s == "bspline" || s == "bspline_cubic") return ScoreSource::bspline;
  if (s == "fourier") return ScoreSource::fourier;
  if (s == "haar") return ScoreSource::haar;
  throw std::invalid_argument("unknown score source: " + s);
}

/// Reduce a functional sample to an N x p score series. FPCA uses a cubic
/// B-spline working basis (capped at the grid size) for the eigenproblem;
/// the other sources project directly onto the named basis.
inline ScoreSeries scores_from_sample(const FunctionalSample& sample, ScoreSource source, int p,
                                      int fpca_working_basis = 30) {
  if (p < 1) throw std::invalid_argument("scores_from_sample: p must be positive");
  switch (source) {
    case ScoreSource::fpca: {
      const int working = std::max(p, std::min(fpca_working_basis, sample.grid_size()));
      const BasisSet basis = make_basis(BasisKind::bspline_cubic, working, sample.grid);
      const Eigenfunctions ef = empirical_eigenfunctions(sample, basis, p);
      return score_series(sample, ef);
    }
    case ScoreSource::bspline:
    case ScoreSource::fourier:
    case ScoreSource::haar: {
      const BasisKind kind = source == ScoreSource::bspline  ? BasisKind::bspline_cubic
                             : source == ScoreSource::fourier ? BasisKind::fourier
                                                              : BasisKind::haar;
      const BasisSet basis = make_basis(kind, p, sample.grid);
      ScoreSeries out;
      out.scores = project(sample, basis);
      return out;
    }
  }
  throw std::logic_error("scores_from_sample: unreachable");
}

}  // namespace perioscope

#endif  // PERIOSCOPE_PIPELINE_HPP
