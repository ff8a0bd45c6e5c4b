// Regenerates the bundled files under data/. Output is deterministic, so
// rerunning reproduces the committed files byte for byte.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "perioscope/json_io.hpp"
#include "perioscope/rng.hpp"
#include "perioscope/simgen.hpp"

using namespace perioscope;

namespace {

void write_eq10_spec(const std::string& path) {
  const SimSpec spec = make_ar2_threefreq_spec(960, 42);
  std::ofstream out(path, std::ios::binary);
  out << to_json(spec).dump(2) << "\n";
}

// Synthetic solar-activity-like daily series: 140 years of 365-day years,
// an 11-year cycle with slowly varying amplitude, strongly autocorrelated
// daily noise, a small annual component, a hard floor at zero, and sparse
// missing entries.
void write_sunspot_series(const std::string& path, std::uint64_t seed) {
  const int years = 140;
  const int days = years * 365;
  const double cycle_days = 11.0 * 365.0;
  SeededRng rng(seed);
  std::ofstream out(path, std::ios::binary);
  out << "sunspot_number\n";
  double noise = 0.0;
  for (int d = 0; d < days; ++d) {
    const double phase = 2.0 * kPi * d / cycle_days;
    const double envelope = 0.5 * (1.0 - std::cos(phase + 0.6));
    const double amp = 130.0 + 40.0 * std::sin(2.0 * kPi * d / 14900.0 + 1.0);
    noise = 0.95 * noise + 5.0 * rng.normal();
    const double annual = 5.0 * std::sin(2.0 * kPi * d / 365.0) * envelope;
    double value = amp * std::pow(envelope, 1.3) + noise * (0.4 + envelope) + annual;
    if (value < 0.0) value = 0.0;
    const bool missing = d > 0 && (rng.next_u64() % 251) == 0;
    if (missing)
      out << "NA\n";
    else
      out << std::llround(value * 10.0) / 10.0 << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : "data";
  write_eq10_spec(dir + "/eq10.json");
  write_sunspot_series(dir + "/sunspots_daily.csv", 770);
  std::printf("wrote %s/eq10.json and %s/sunspots_daily.csv\n", dir.c_str(), dir.c_str());
  return 0;
}
