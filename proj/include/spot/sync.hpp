#pragma once

#include <cstdint>

#include "spot/error.hpp"
#include "spot/time.hpp"

namespace spot {

/// Raised on malformed exchange samples or non-monotonic update times.
class SyncError : public Error {
 public:
  using Error::Error;
};

/// Timestamps of one two-way request/reply exchange. request_sent and
/// reply_received are read from the requesting side's clock, the middle two
/// from the responding side's clock.
struct ExchangeSample {
  TimePoint request_sent;      // requester clock
  TimePoint request_received;  // responder clock
  TimePoint reply_sent;        // responder clock
  TimePoint reply_received;    // requester clock
};

/// Round-trip time excluding responder processing:
/// (reply_received - request_sent) - (reply_sent - request_received).
/// Throws SyncError when the sample is malformed (negative time-in-flight).
TimeSpan exchange_rtt(const ExchangeSample& s);

/// Offset of the responder clock relative to the requester clock, assuming
/// symmetric path delay: request_received - (request_sent + rtt/2), with
/// rtt/2 truncated toward zero.
TimeSpan exchange_offset(const ExchangeSample& s);

/// How a measurement was classified by the offset filter.
enum class SampleQuality : uint8_t {
  high,               // used as-is; eligible for rate updates
  corrected_forward,  // measured too high; asymmetric forward delay removed
  corrected_reverse,  // measured too low; asymmetric reverse delay added back
};

/// Polling-interval adaptation policy. The increase step runs when a whole
/// observation window stayed quiet; the decrease step when it did not.
struct PollingPolicy {
  enum class Style : uint8_t { aimd, mimd };

  struct Ratio {
    int32_t num = 1;
    int32_t den = 1;
  };

  Style style = Style::aimd;
  TimeSpan min_interval = TimeSpan::seconds(16);
  TimeSpan max_interval = TimeSpan::seconds(1024);
  TimeSpan initial_interval = TimeSpan::seconds(64);
  TimeSpan additive_step = TimeSpan::seconds(16);  // aimd increase
  Ratio increase_factor{2, 1};                     // mimd increase
  Ratio decrease_factor{1, 2};                     // both styles decrease
  TimeSpan observation_window = TimeSpan::minutes(5);
  int min_window_samples = 5;

  /// Throws SyncError when bounds or factors are inconsistent.
  void validate() const;

  /// Next interval after a quiet window, clamped to [min, max].
  TimeSpan increased(TimeSpan interval) const;

  /// Next interval after a noisy window, clamped to [min, max].
  TimeSpan decreased(TimeSpan interval) const;
};

/// Per-peer synchronization state.
///
/// Thirteen scalars plus the polling-policy constants; small enough for a
/// server to keep one per registered client, or for a constrained client to
/// keep exactly one.
struct SyncState {
  PollingPolicy policy;
  TimeSpan error_margin = TimeSpan::millis(10);

  // Measurement chain (updated every sample).
  bool have_sample = false;       // first-sample bootstrap flag
  TimeSpan last_offset;           // corrected offset of the latest sample
  TimePoint last_measure_time;    // when that sample was taken
  TimeSpan min_rtt;               // smallest RTT seen; never ages out

  // Rate-sync anchor (updated on high-quality samples only).
  bool have_sync = false;
  TimeSpan offset;                // offset adopted at the last high-quality sync
  Skew skew;
  TimePoint last_sync_time;

  // Current observation window.
  TimePoint observation_start;
  TimeSpan abs_error_sum;         // running sum of |estimated - corrected|
  int num_samples = 0;
  TimeSpan polling_interval;

  SyncState() : SyncState(PollingPolicy{}) {}
  explicit SyncState(PollingPolicy p, TimeSpan margin = TimeSpan::millis(10));

  /// Arithmetic mean of |estimated - corrected| over the current window.
  TimeSpan mean_abs_error() const;
};

/// Result of filtering one measurement.
struct FilterResult {
  TimeSpan corrected;
  TimeSpan estimated;
  SampleQuality quality;
};

/// One step's outputs, including what a server relays to a thin client.
struct SyncUpdate {
  TimeSpan corrected_offset;
  TimeSpan estimated_offset;
  Skew skew;
  TimeSpan next_poll_in;
  SampleQuality quality;
};

/// Offset filter. Extrapolates the expected offset from the last sample and
/// the learned rate; a measurement outside expected +/- error_margin is
/// pulled back by half the sample's asymmetric delay (its RTT excess over
/// the minimum RTT seen). The very first sample is accepted unfiltered and
/// seeds the state. Updates last_offset/last_measure_time/min_rtt.
FilterResult filter_offset(SyncState& st, TimeSpan measured_offset, TimeSpan measured_rtt,
                           TimePoint now);

/// Rate synchronization and polling adaptation. Accumulates the filter's
/// error inside the observation window; at a window boundary widens the
/// polling interval if the window stayed within twice the error margin and
/// shrinks it otherwise. High-quality samples (corrected == measured) move
/// the sync anchor and re-estimate the rate; anchors closer than one second
/// apart keep the previous rate, and a rate estimate outside the valid skew
/// range is discarded. Throws SyncError when now precedes the anchor.
SyncUpdate rate_sync_step(SyncState& st, const FilterResult& fr, TimePoint now);

/// Full update from one two-way exchange: derive RTT and offset, filter,
/// then run the rate step. Single entry point for both client modes and for
/// trace-driven runs.
SyncUpdate spot_step(SyncState& st, const ExchangeSample& sample, TimePoint now);

}  // namespace spot
