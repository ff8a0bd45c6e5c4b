#ifndef PERIOSCOPE_JSON_IO_HPP
#define PERIOSCOPE_JSON_IO_HPP

#include <json.hpp>

#include <string>
#include <vector>

#include "perioscope/detector.hpp"
#include "perioscope/ingest.hpp"
#include "perioscope/simgen.hpp"

namespace perioscope {

using json = nlohmann::json;

inline json to_json(const PeriodReport& report) {
  return json{{"theta_hat", report.theta_hat},
              {"period_functions", report.period_functions},
              {"period_days", report.period_days},
              {"period_years", report.period_years}};
}

inline json to_json(const HarmonicFit& fit) {
  json coef = json::array();
  for (int i = 0; i < fit.coef.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < fit.coef.cols(); ++j) row.push_back(fit.coef(i, j));
    coef.push_back(row);
  }
  return json{{"freqs", fit.freqs}, {"coef", coef}, {"rss", fit.rss}};
}

inline json to_json(const DetectionResult& result) {
  json trace = json::array();
  for (const TraceEntry& entry : result.trace)
    trace.push_back(json{{"r", entry.r},
                         {"best_h", entry.best_h},
                         {"sigma2", entry.sigma2},
                         {"phi", entry.phi}});  // -inf serializes as null
  return json{{"r_hat", result.r_hat},
              {"freqs", result.freqs},
              {"best_h", result.best_h},
              {"trace", trace},
              {"scalar_fit", to_json(result.scalar_fit)},
              {"diagnostics",
               json{{"leading_eigenvalue", result.leading_eigenvalue},
                    {"leading_share", result.leading_share},
                    {"grid_resolution", result.grid_resolution}}},
              {"flags",
               json{{"cap_hit", result.cap_hit},
                    {"degenerate", result.degenerate},
                    {"grid_exhausted", result.grid_exhausted},
                    {"h4_regime_warning", result.h4_regime_warning}}}};
}

inline json to_json(const SimSpec& spec) {
  json phi_specs = json::array();
  for (const Eigen::MatrixXd& m : spec.phi_specs) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
      json row = json::array();
      for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
      rows.push_back(row);
    }
    phi_specs.push_back(rows);
  }
  json signal = json::array();
  for (const SimSpec::SignalComponent& c : spec.signal)
    signal.push_back(json{{"theta", c.theta}, {"alpha", c.alpha}, {"beta", c.beta}});
  return json{{"basis", json{{"kind", to_string(spec.basis_kind)},
                             {"p", spec.basis_p},
                             {"grid_size", spec.grid_size}}},
              {"p", spec.p},
              {"N", spec.n},
              {"ar_order", spec.ar_order},
              {"phi_specs", phi_specs},
              {"signal", signal},
              {"omega", spec.omega},
              {"noise_scale", spec.noise_scale},
              {"burn_in", spec.burn_in},
              {"seed", spec.seed}};
}

inline SimSpec sim_spec_from_json(const json& j) {
  SimSpec spec;
  const json& basis = j.at("basis");
  spec.basis_kind = basis_kind_from_string(basis.at("kind").get<std::string>());
  spec.basis_p = basis.at("p").get<int>();
  spec.grid_size = basis.at("grid_size").get<int>();
  spec.p = j.at("p").get<int>();
  spec.n = j.at("N").get<int>();
  spec.ar_order = j.at("ar_order").get<int>();
  for (const json& m : j.at("phi_specs")) {
    const int rows = static_cast<int>(m.size());
    Eigen::MatrixXd phi(rows, rows > 0 ? static_cast<int>(m[0].size()) : 0);
    for (int i = 0; i < rows; ++i)
      for (int c = 0; c < phi.cols(); ++c) phi(i, c) = m[i][c].get<double>();
    spec.phi_specs.push_back(phi);
  }
  for (const json& c : j.at("signal"))
    spec.signal.push_back({c.at("theta").get<double>(), c.at("alpha").get<double>(),
                           c.at("beta").get<double>()});
  spec.omega = j.at("omega").get<std::vector<double>>();
  if (j.contains("noise_scale")) spec.noise_scale = j.at("noise_scale").get<double>();
  if (j.contains("burn_in")) spec.burn_in = j.at("burn_in").get<int>();
  if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
  validate_sim_spec(spec);
  return spec;
}

}  // namespace perioscope

#endif  // PERIOSCOPE_JSON_IO_HPP
