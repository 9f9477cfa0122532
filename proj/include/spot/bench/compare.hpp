#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spot/baselines.hpp"
#include "spot/bench/noise.hpp"
#include "spot/clock_model.hpp"
#include "spot/sync.hpp"

namespace spot::bench {

enum class Protocol : uint8_t { spot, sntp, mqtt, consensus, minrtt };

const char* protocol_name(Protocol p);
Protocol protocol_from_name(const std::string& name);

/// How errors are evaluated: at each protocol's own sync points, or on a
/// regular grid holding the last adopted value between sync points (with
/// offset+skew extrapolation for spot).
enum class EvalMode : uint8_t { sync_points, continuous };

struct ComparisonConfig {
  TimePoint start;
  TimeSpan duration = TimeSpan::hours(24);
  PollingPolicy spot_policy;
  TimeSpan spot_error_margin = TimeSpan::millis(10);
  baselines::BaselineConfig baseline;  // polling interval / burst shape
  int runs = 100;
  uint64_t seed = 1;
  EvalMode eval = EvalMode::sync_points;
  TimeSpan eval_period = TimeSpan::seconds(16);  // continuous mode grid
};

/// Full record of one spot run, enough to derive rate errors and the
/// polling profile afterwards.
struct SpotRunLog {
  struct Point {
    TimePoint time;
    TimeSpan corrected;
    TimeSpan true_offset;
    SampleQuality quality;
    // State after the step.
    bool have_sync;
    TimeSpan state_offset;
    Skew skew;
    TimePoint last_sync_time;
    TimeSpan polling_interval;
  };
  std::vector<Point> points;
};

/// One protocol's trajectory through one run.
struct ProtocolRun {
  std::vector<TimePoint> sync_times;
  std::vector<TimeSpan> adopted;
  std::vector<TimeSpan> true_at_sync;
  // Every underlying raw measurement (for burst protocols more than one
  // per sync point).
  std::vector<TimePoint> raw_times;
  std::vector<TimeSpan> raw_measured;
  std::vector<TimeSpan> raw_true;
  SpotRunLog spot_log;  // populated for Protocol::spot only
};

ProtocolRun run_protocol(Protocol proto, const ClockModel& truth, const NoiseModel& noise,
                         const ComparisonConfig& cfg);

/// Error statistics of one run (all in microseconds).
struct RunStats {
  double rmse = 0.0;
  double min_abs = 0.0;
  double max_abs = 0.0;
  double stddev = 0.0;
  double raw_rmse = 0.0;
  double raw_min_abs = 0.0;
  double raw_max_abs = 0.0;
  double raw_stddev = 0.0;
  double rate_rmse = 0.0;  // spot only, else NaN
  double poll_count = 0.0;
};

RunStats run_stats(const ProtocolRun& run, const ClockModel& truth, const ComparisonConfig& cfg);

/// Aggregated over-runs result for one (protocol, noise level) cell.
struct ExperimentReport {
  Protocol protocol = Protocol::spot;
  std::string noise_label;
  RunStats mean;  // each statistic averaged across runs
  int runs_averaged = 0;
};

/// Labelled noise level for a comparison sweep.
struct LevelSpec {
  std::string label;
  NoiseModel noise;  // seed is re-derived per run from ComparisonConfig::seed
};

/// Runs every protocol at every level cfg.runs times. Within one run all
/// protocols share the same run seed, so they see identical disturbances
/// at identical query times.
std::vector<ExperimentReport> run_comparison(const ClockModel& truth,
                                             std::span<const LevelSpec> levels,
                                             std::span<const Protocol> protocols,
                                             const ComparisonConfig& cfg);

/// Rate-sync quality: at each sync point, extrapolate the state's anchored
/// offset by its skew to the next sync point and compare with ground truth
/// there; returns the RMSE in microseconds. Requires >= 2 usable points.
double rate_error_rmse(const SpotRunLog& log);

/// Polling behaviour of one spot run.
struct PollingProfile {
  uint64_t poll_count = 0;
  std::vector<TimePoint> times;
  std::vector<TimeSpan> intervals;
};

PollingProfile polling_profile(const SpotRunLog& log);

}  // namespace spot::bench
