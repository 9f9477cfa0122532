#pragma once

#include <span>

#include "spot/sync.hpp"
#include "spot/time.hpp"

namespace spot::baselines {

/// Reference synchronization methods the benchmark compares against.
enum class BaselineKind : uint8_t { sntp, mqtt_push, consensus, min_rtt };

/// Scheduling parameters for baseline protocols in the benchmark harness.
/// SNTP and MQTT adopt one sample per polling interval; Consensus and
/// MinRTT take a burst of burst_count samples, burst_spacing apart, per
/// polling interval and adopt one value at the end of the burst.
struct BaselineConfig {
  BaselineKind kind = BaselineKind::sntp;
  TimeSpan polling_interval = TimeSpan::seconds(128);
  int burst_count = 8;
  TimeSpan burst_spacing = TimeSpan::seconds(15);

  void validate() const;
};

/// One measurement inside a burst.
struct BurstSample {
  TimeSpan offset;
  TimeSpan rtt;
};

/// Plain two-way offset with no filtering.
TimeSpan sntp_offset(const ExchangeSample& s);

/// Offset as observed by a broker push: the reference value plus the
/// one-way delivery delay the push experienced. Throws on negative delay.
TimeSpan mqtt_push_offset(TimeSpan true_offset, TimeSpan one_way_delay);

/// Median/MAD outlier elimination, then the mean of the survivors.
/// Samples deviating from the burst median by more than three times the
/// median absolute deviation are discarded; when the MAD is zero, any
/// sample not equal to the median is discarded. Requires >= 3 samples.
TimeSpan consensus_offset(std::span<const BurstSample> burst);

/// Offset of the burst sample with the smallest RTT (earliest wins ties).
/// Requires a non-empty burst.
TimeSpan minrtt_offset(std::span<const BurstSample> burst);

}  // namespace spot::baselines
