#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "spot/error.hpp"
#include "spot/time.hpp"

namespace spot {

/// Raised when a clock model is queried outside its domain or constructed
/// with invalid parameters.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Raised by trace CSV parsing; carries the offending 1-based line number
/// (0 when the error is not tied to a specific line).
class TraceError : public Error {
 public:
  explicit TraceError(const std::string& what, size_t line = 0) : Error(what), line_(line) {}
  size_t line() const { return line_; }

 private:
  size_t line_;
};

/// One ground-truth sample: device offset (device reading minus reference
/// time) at a reference timestamp.
struct TraceRecord {
  TimePoint ref_time;
  TimeSpan offset;

  bool operator==(const TraceRecord&) const = default;
};

/// A recorded device-offset trace with strictly increasing timestamps.
class OffsetTrace {
 public:
  /// Requires at least two records with strictly increasing timestamps;
  /// the sample period is derived from the first gap.
  OffsetTrace(std::vector<TraceRecord> records, std::string device_label = "");

  /// Reads a `ref_time_ms,offset_ms` CSV file. Values are decimal
  /// milliseconds with up to three fractional digits; `#` starts a comment
  /// line; a `# device: NAME` comment sets the device label.
  static OffsetTrace load_csv(const std::string& path);

  /// Writes the trace in the same CSV format load_csv reads.
  void save_csv(const std::string& path) const;

  std::span<const TraceRecord> records() const { return records_; }
  const std::string& device_label() const { return device_label_; }
  TimeSpan sample_period() const { return sample_period_; }
  TimePoint start_time() const { return records_.front().ref_time; }
  TimePoint end_time() const { return records_.back().ref_time; }

  /// True when every inter-record gap equals the sample period.
  bool uniformly_sampled() const;

 private:
  std::vector<TraceRecord> records_;
  std::string device_label_;
  TimeSpan sample_period_;
};

/// A rate-change point for piecewise-linear models: from `start` onward the
/// clock runs at `skew` until the next segment begins.
struct SkewSegment {
  TimePoint start;
  Skew skew;
};

/// Ground-truth clock simulator.
///
/// A model maps reference time to the device's offset (device reading minus
/// reference time at the same instant). Four kinds are supported:
///   - linear:      constant rate error
///   - piecewise:   rate changes at listed segment starts
///   - random_walk: rate takes seeded Gaussian steps each second and is
///                  integrated into the offset
///   - trace:       linear interpolation over a recorded trace
///
/// Readings are pure functions of (model, ref_time): instances are
/// immutable after construction and safe to share across threads. Queries
/// before the epoch (or outside the trace/horizon) raise ModelError.
class ClockModel {
 public:
  enum class Kind : uint8_t { linear, piecewise, random_walk, trace };

  static ClockModel linear(TimePoint epoch, Skew base_skew);
  static ClockModel piecewise(TimePoint epoch, Skew base_skew, std::vector<SkewSegment> segments);
  static ClockModel random_walk(TimePoint epoch, Skew base_skew, double wander_ppb_per_sqrt_s,
                                uint64_t seed, TimeSpan horizon = TimeSpan::hours(48));
  static ClockModel from_trace(OffsetTrace trace);

  Kind kind() const { return kind_; }
  TimePoint epoch() const { return epoch_; }

  /// Ground-truth offset at ref_time.
  TimeSpan true_offset(TimePoint ref_time) const;

  /// Simulated device clock reading at ref_time: ref_time + true_offset.
  TimePoint read(TimePoint ref_time) const;

  /// Instantaneous rate error at ref_time (undefined for trace models).
  Skew skew_at(TimePoint ref_time) const;

 private:
  struct WalkTable {
    std::vector<int64_t> skew_ppb;   // rate during second k
    std::vector<int64_t> cum_ppb_us; // integrated ppb*us up to second k
  };

  ClockModel() = default;

  Kind kind_ = Kind::linear;
  TimePoint epoch_;
  Skew base_skew_;
  std::vector<SkewSegment> segments_;
  std::shared_ptr<const WalkTable> walk_;
  std::shared_ptr<const OffsetTrace> trace_;
};

}  // namespace spot
