#ifndef PERIOSCOPE_CLI_HPP
#define PERIOSCOPE_CLI_HPP

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "perioscope/bench.hpp"
#include "perioscope/detector.hpp"
#include "perioscope/ingest.hpp"
#include "perioscope/json_io.hpp"
#include "perioscope/pipeline.hpp"
#include "perioscope/simgen.hpp"

namespace perioscope {

namespace detail {

// Whole-result-at-once write so a failure never leaves a partial file.
inline void write_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file " + out_path);
  out << content;
  if (!out) throw std::runtime_error("failed writing " + out_path);
}

inline std::string display_period(const PeriodReport& report) {
  std::ostringstream os;
  if (report.period_years >= 0.75) {
    os << static_cast<long long>(std::llround(report.period_years)) << " year-cycle";
  } else {
    os << static_cast<long long>(std::llround(report.period_days / 30.0)) << " month-cycle";
  }
  return os.str();
}

struct CommonOptions {
  double kappa = 5.0;
  int max_ar_order = 8;
  int r_max = 10;
  std::string criterion = "bic";
  std::string basis = "fpca";
  int p = 10;

  CriterionConfig criterion_config() const {
    CriterionConfig cfg;
    cfg.kappa = kappa;
    cfg.max_ar_order = max_ar_order;
    cfg.r_max = r_max;
    cfg.criterion = criterion_kind_from_string(criterion);
    return cfg;
  }
};

inline void add_common_options(CLI::App* cmd, CommonOptions& opts, bool with_kappa = true) {
  if (with_kappa)
    cmd->add_option("--kappa", opts.kappa, "penalty constant kappa")->capture_default_str();
  cmd->add_option("--H", opts.max_ar_order, "max autoregressive order")->capture_default_str();
  cmd->add_option("--rmax", opts.r_max, "max number of periodicities")->capture_default_str();
  cmd->add_option("--criterion", opts.criterion, "criterion kind")
      ->check(CLI::IsMember({"bic", "aic"}))
      ->capture_default_str();
  cmd->add_option("--p", opts.p, "score dimension")->capture_default_str();
  cmd->add_option("--basis", opts.basis, "score source")
      ->check(CLI::IsMember({"fpca", "bspline", "fourier", "haar"}))
      ->capture_default_str();
}

inline std::string format_matrix_csv(const Eigen::MatrixXd& m) {
  std::ostringstream os;
  os.precision(17);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << m(i, j);
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv) {
  CLI::App app{"periodicity detection for functional time series"};
  app.require_subcommand(1);

  // detect
  auto* detect_cmd = app.add_subcommand("detect", "detect periodicities in a daily series CSV");
  std::string detect_input;
  std::string detect_out;
  int detect_m = 0;
  int detect_days_per_year = 0;
  int detect_raw_year = 365;
  detail::CommonOptions detect_opts;
  detect_cmd->add_option("input", detect_input, "CSV, one value per line")->required();
  detect_cmd->add_option("--m", detect_m, "days per functional observation")->required();
  detect_cmd->add_option("--days-per-year", detect_days_per_year,
                         "trim each raw year to this many days (0 = no trimming)")
      ->capture_default_str();
  detect_cmd->add_option("--raw-year", detect_raw_year, "raw calendar year length in the input")
      ->capture_default_str();
  detect_cmd->add_option("--out", detect_out, "output JSON path (default stdout)");
  detail::add_common_options(detect_cmd, detect_opts);

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "generate a functional series from a spec");
  std::string sim_spec_path;
  std::string sim_out;
  std::string sim_scores_out;
  std::uint64_t sim_seed = 0;
  bool sim_seed_given = false;
  sim_cmd->add_option("--spec", sim_spec_path, "SimSpec JSON file")->required();
  sim_cmd->add_option("--out", sim_out, "flattened sample CSV path (default stdout)");
  sim_cmd->add_option("--scores-out", sim_scores_out, "optional N x p score CSV path");
  sim_cmd->add_option("--seed", sim_seed, "override the seed in the spec")
      ->each([&](const std::string&) { sim_seed_given = true; });

  // bench-kappa
  auto* bench_cmd = app.add_subcommand("bench-kappa", "r-hat frequency table over kappa values");
  std::string bench_spec_path;
  std::string bench_out;
  std::vector<double> bench_kappas{5.0};
  int bench_reps = 100;
  std::uint64_t bench_seed = 42;
  detail::CommonOptions bench_opts;
  bench_opts.basis = "bspline";
  bench_opts.p = 30;
  bench_cmd->add_option("--spec", bench_spec_path, "SimSpec JSON file")->required();
  bench_cmd->add_option("--kappa", bench_kappas, "kappa values")->capture_default_str();
  bench_cmd->add_option("--reps", bench_reps, "replications per kappa")->capture_default_str();
  bench_cmd->add_option("--seed", bench_seed, "base seed, split per replication")
      ->capture_default_str();
  bench_cmd->add_option("--out", bench_out, "output CSV path (default stdout)");
  detail::add_common_options(bench_cmd, bench_opts, /*with_kappa=*/false);

  // period
  auto* period_cmd = app.add_subcommand("period", "convert a frequency to period units");
  double period_theta = 0.0;
  int period_m = 0;
  int period_days_per_year = 0;
  std::string period_out;
  period_cmd->add_option("--theta", period_theta, "frequency in (0, pi)")->required();
  period_cmd->add_option("--m", period_m, "days per functional observation")->required();
  period_cmd->add_option("--days-per-year", period_days_per_year, "days per normalized year")
      ->capture_default_str();
  period_cmd->add_option("--out", period_out, "output JSON path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (detect_cmd->parsed()) {
      const SeriesFile raw = read_series_csv(detect_input);
      const std::vector<double> values = impute(raw);
      const FunctionalSample sample =
          segment(values, detect_m, detect_days_per_year, detect_raw_year);
      const ScoreSeries scores =
          scores_from_sample(sample, score_source_from_string(detect_opts.basis), detect_opts.p);
      const CriterionConfig cfg = detect_opts.criterion_config();
      const DetectionResult result = detect(scores, cfg);
      if (result.h4_regime_warning)
        std::cerr << "perioscope: note: H^4 = " << std::pow(cfg.max_ar_order, 4) << " exceeds N = "
                  << scores.n() << "; the criterion runs outside its asymptotic regime\n";

      json periods = json::array();
      for (double theta : result.freqs) {
        const PeriodReport report = period_convert(theta, detect_m, detect_days_per_year);
        json entry = to_json(report);
        entry["display"] = detail::display_period(report);
        periods.push_back(entry);
      }
      const json doc{{"config", json{{"m", detect_m},
                                     {"days_per_year", detect_days_per_year},
                                     {"p", detect_opts.p},
                                     {"basis", detect_opts.basis},
                                     {"kappa", cfg.kappa},
                                     {"H", cfg.max_ar_order},
                                     {"r_max", cfg.r_max},
                                     {"criterion", to_string(cfg.criterion)},
                                     {"n_functions", sample.n()}}},
                     {"detection", to_json(result)},
                     {"periods", periods}};
      detail::write_output(detect_out, doc.dump(2) + "\n");
      return 0;
    }

    if (sim_cmd->parsed()) {
      std::ifstream in(sim_spec_path);
      if (!in) throw std::runtime_error("cannot open spec file " + sim_spec_path);
      SimSpec spec = sim_spec_from_json(json::parse(in));
      if (sim_seed_given) spec.seed = sim_seed;
      const SimResult sim = simulate(spec);

      std::ostringstream flat;
      flat.precision(17);
      for (int t = 0; t < sim.sample.values.rows(); ++t)
        for (int g = 0; g < sim.sample.values.cols(); ++g) flat << sim.sample.values(t, g) << '\n';
      detail::write_output(sim_out, flat.str());
      if (!sim_scores_out.empty())
        detail::write_output(sim_scores_out, detail::format_matrix_csv(sim.scores.scores));
      return 0;
    }

    if (bench_cmd->parsed()) {
      std::ifstream in(bench_spec_path);
      if (!in) throw std::runtime_error("cannot open spec file " + bench_spec_path);
      const SimSpec spec = sim_spec_from_json(json::parse(in));
      BenchConfig bench;
      bench.source = score_source_from_string(bench_opts.basis);
      bench.p = bench_opts.p;
      bench.criterion = bench_opts.criterion_config();
      const KappaTable table = run_kappa_bench(spec, bench, bench_kappas, bench_reps, bench_seed);

      std::ostringstream os;
      os << "kappa";
      for (int r = 0; r <= table.r_max; ++r) os << ",r" << r;
      os << '\n';
      for (std::size_t i = 0; i < table.kappas.size(); ++i) {
        os << table.kappas[i];
        for (int count : table.counts[i]) os << ',' << count;
        os << '\n';
      }
      detail::write_output(bench_out, os.str());
      return 0;
    }

    if (period_cmd->parsed()) {
      const PeriodReport report = period_convert(period_theta, period_m, period_days_per_year);
      json doc = to_json(report);
      doc["display"] = detail::display_period(report);
      detail::write_output(period_out, doc.dump(2) + "\n");
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "perioscope: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace perioscope

#endif  // PERIOSCOPE_CLI_HPP
