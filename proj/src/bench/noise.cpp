#include "spot/bench/noise.hpp"

#include <cmath>

namespace spot::bench {

const char* noise_level_name(NoiseLevel level) {
  switch (level) {
    case NoiseLevel::low:
      return "low";
    case NoiseLevel::medium:
      return "medium";
    case NoiseLevel::high:
      return "high";
  }
  return "unknown";
}

NoiseModel NoiseModel::preset(NoiseLevel level, uint64_t seed) {
  NoiseModel nm;
  switch (level) {
    case NoiseLevel::low:
      nm.std_dev = TimeSpan::millis(50);
      break;
    case NoiseLevel::medium:
      nm.std_dev = TimeSpan::millis(150);
      break;
    case NoiseLevel::high:
      nm.std_dev = TimeSpan::millis(250);
      break;
  }
  nm.seed = seed;
  return nm;
}

void NoiseModel::validate() const {
  if (std_dev < TimeSpan()) throw BenchError("noise std dev must be non-negative");
  if (inject_prob < 0.0 || inject_prob > 1.0) throw BenchError("inject probability outside [0,1]");
  if (path_rtt < TimeSpan()) throw BenchError("path RTT must be non-negative");
}

Measurement measure_at(const ClockModel& truth, const NoiseModel& noise, TimePoint t) {
  Measurement m;
  m.time = t;
  m.true_offset = truth.true_offset(t);

  // Keyed stream: the draw depends only on (seed, query time), so every
  // protocol asking at the same instant sees the same disturbance.
  uint64_t state = rng::keyed_state(noise.seed, static_cast<uint64_t>(t.micros()));
  const double u = rng::to_unit(rng::splitmix_next(state));
  if (u < noise.inject_prob) {
    const uint64_t b1 = rng::splitmix_next(state);
    const uint64_t b2 = rng::splitmix_next(state);
    const double sigma_us = static_cast<double>(noise.std_dev.total_micros());
    const int64_t n_us = llround(rng::gaussian(b1, b2) * sigma_us);
    m.was_noisy = true;
    m.measured_offset = m.true_offset + TimeSpan::micros(n_us);
    // The observational delay hits both directions' timestamps.
    m.measured_rtt = noise.path_rtt + TimeSpan::micros(n_us < 0 ? -2 * n_us : 2 * n_us);
  } else {
    m.was_noisy = false;
    m.measured_offset = m.true_offset;
    m.measured_rtt = noise.path_rtt;
  }
  return m;
}

std::vector<Measurement> synthesize_measurements(const ClockModel& truth, const NoiseModel& noise,
                                                 std::span<const TimePoint> query_times) {
  noise.validate();
  std::vector<Measurement> out;
  out.reserve(query_times.size());
  for (TimePoint t : query_times) out.push_back(measure_at(truth, noise, t));
  return out;
}

}  // namespace spot::bench
