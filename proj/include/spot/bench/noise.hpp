#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "spot/clock_model.hpp"
#include "spot/error.hpp"
#include "spot/rng.hpp"
#include "spot/time.hpp"

namespace spot::bench {

class BenchError : public Error {
 public:
  using Error::Error;
};

enum class NoiseLevel : uint8_t { low, medium, high };

const char* noise_level_name(NoiseLevel level);

/// Observational noise model for synthetic measurements. With probability
/// inject_prob a sample picks up a Gaussian error n: the measured offset
/// shifts by n and the measured RTT grows by 2|n| over the base path RTT
/// (the extra delay is experienced in both directions' timestamps).
///
/// Noise is a pure function of (seed, query time), so every protocol
/// polling at the same instant within a run sees the same disturbance.
struct NoiseModel {
  TimeSpan std_dev;                          // sigma of the injected error
  double inject_prob = 0.5;
  TimeSpan path_rtt = TimeSpan::millis(300);
  uint64_t seed = 0;

  /// Presets: low 50 ms, medium 150 ms, high 250 ms.
  static NoiseModel preset(NoiseLevel level, uint64_t seed);

  void validate() const;
};

/// One synthetic measurement.
struct Measurement {
  TimePoint time;
  TimeSpan measured_offset;
  TimeSpan measured_rtt;
  TimeSpan true_offset;
  bool was_noisy = false;
};

/// Samples the ground truth at one query time and applies the noise model.
Measurement measure_at(const ClockModel& truth, const NoiseModel& noise, TimePoint t);

/// measure_at over a list of query times.
std::vector<Measurement> synthesize_measurements(const ClockModel& truth, const NoiseModel& noise,
                                                 std::span<const TimePoint> query_times);

}  // namespace spot::bench
