#include "spot/baselines.hpp"

#include <algorithm>
#include <vector>

namespace spot::baselines {

void BaselineConfig::validate() const {
  if (polling_interval <= TimeSpan()) throw SyncError("polling interval must be positive");
  if (burst_spacing <= TimeSpan()) throw SyncError("burst spacing must be positive");
  if (kind == BaselineKind::consensus && burst_count < 3)
    throw SyncError("consensus needs at least three samples per burst");
  if ((kind == BaselineKind::consensus || kind == BaselineKind::min_rtt) && burst_count < 1)
    throw SyncError("burst count must be positive");
}

TimeSpan sntp_offset(const ExchangeSample& s) { return exchange_offset(s); }

TimeSpan mqtt_push_offset(TimeSpan true_offset, TimeSpan one_way_delay) {
  if (one_way_delay < TimeSpan()) throw SyncError("one-way delay is negative");
  return true_offset + one_way_delay;
}

namespace {

// Median of sorted values; even counts average the middle pair
// (truncating toward zero).
TimeSpan median_sorted(const std::vector<TimeSpan>& sorted) {
  const size_t n = sorted.size();
  if (n % 2 == 1) return sorted[n / 2];
  const __int128 sum = static_cast<__int128>(sorted[n / 2 - 1].total_micros()) +
                       sorted[n / 2].total_micros();
  return TimeSpan::micros(static_cast<int64_t>(sum / 2));
}

// Mean rounded to the nearest microsecond, ties away from zero.
TimeSpan mean(const std::vector<TimeSpan>& values) {
  __int128 sum = 0;
  for (TimeSpan v : values) sum += v.total_micros();
  const __int128 n = static_cast<__int128>(values.size());
  const __int128 half = n / 2;
  const __int128 q = sum >= 0 ? (sum + half) / n : (sum - half) / n;
  return TimeSpan::micros(static_cast<int64_t>(q));
}

}  // namespace

TimeSpan consensus_offset(std::span<const BurstSample> burst) {
  if (burst.size() < 3) throw SyncError("consensus needs at least three samples");

  std::vector<TimeSpan> offsets;
  offsets.reserve(burst.size());
  for (const auto& s : burst) offsets.push_back(s.offset);
  std::vector<TimeSpan> sorted = offsets;
  std::sort(sorted.begin(), sorted.end());
  const TimeSpan med = median_sorted(sorted);

  std::vector<TimeSpan> deviations;
  deviations.reserve(burst.size());
  for (TimeSpan o : offsets) deviations.push_back((o - med).abs());
  std::sort(deviations.begin(), deviations.end());
  const TimeSpan mad = median_sorted(deviations);

  std::vector<TimeSpan> survivors;
  for (TimeSpan o : offsets) {
    const TimeSpan dev = (o - med).abs();
    // With a zero MAD the majority agrees exactly; anything else is an
    // outlier. Otherwise apply the usual 3*MAD fence.
    const bool outlier = mad == TimeSpan() ? dev > TimeSpan() : dev > mad * 3;
    if (!outlier) survivors.push_back(o);
  }
  return mean(survivors);
}

TimeSpan minrtt_offset(std::span<const BurstSample> burst) {
  if (burst.empty()) throw SyncError("minrtt selection over an empty burst");
  size_t best = 0;
  for (size_t i = 1; i < burst.size(); ++i) {
    if (burst[i].rtt < burst[best].rtt) best = i;  // earliest wins ties
  }
  return burst[best].offset;
}

}  // namespace spot::baselines
