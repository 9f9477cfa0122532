#include "spot/sync.hpp"

namespace spot {

TimeSpan exchange_rtt(const ExchangeSample& s) {
  if (s.reply_received < s.request_sent || s.reply_sent < s.request_received)
    throw SyncError("malformed exchange sample: negative leg duration");
  const TimeSpan rtt =
      (s.reply_received - s.request_sent) - (s.reply_sent - s.request_received);
  if (rtt < TimeSpan()) throw SyncError("malformed exchange sample: negative round-trip time");
  return rtt;
}

TimeSpan exchange_offset(const ExchangeSample& s) {
  const TimeSpan rtt = exchange_rtt(s);
  return s.request_received - (s.request_sent + rtt / 2);
}

void PollingPolicy::validate() const {
  if (min_interval <= TimeSpan() || max_interval < min_interval)
    throw SyncError("polling interval bounds are inconsistent");
  if (initial_interval < min_interval || initial_interval > max_interval)
    throw SyncError("initial polling interval outside bounds");
  if (additive_step <= TimeSpan()) throw SyncError("additive step must be positive");
  if (increase_factor.num <= 0 || increase_factor.den <= 0 || decrease_factor.num <= 0 ||
      decrease_factor.den <= 0)
    throw SyncError("polling factors must be positive");
  if (observation_window <= TimeSpan()) throw SyncError("observation window must be positive");
  if (min_window_samples < 1) throw SyncError("window sample minimum must be at least 1");
}

namespace {

TimeSpan clamp(TimeSpan v, TimeSpan lo, TimeSpan hi) { return v < lo ? lo : (v > hi ? hi : v); }

TimeSpan scale(TimeSpan v, PollingPolicy::Ratio r) {
  const __int128 scaled = static_cast<__int128>(v.total_micros()) * r.num / r.den;
  return TimeSpan::micros(static_cast<int64_t>(scaled));
}

}  // namespace

TimeSpan PollingPolicy::increased(TimeSpan interval) const {
  const TimeSpan next =
      style == Style::aimd ? interval + additive_step : scale(interval, increase_factor);
  return clamp(next, min_interval, max_interval);
}

TimeSpan PollingPolicy::decreased(TimeSpan interval) const {
  return clamp(scale(interval, decrease_factor), min_interval, max_interval);
}

SyncState::SyncState(PollingPolicy p, TimeSpan margin) : policy(p), error_margin(margin) {
  policy.validate();
  if (error_margin <= TimeSpan()) throw SyncError("error margin must be positive");
  polling_interval = policy.initial_interval;
}

TimeSpan SyncState::mean_abs_error() const {
  if (num_samples == 0) return TimeSpan();
  return abs_error_sum / num_samples;
}

FilterResult filter_offset(SyncState& st, TimeSpan measured_offset, TimeSpan measured_rtt,
                           TimePoint now) {
  if (measured_rtt < TimeSpan()) throw SyncError("measured RTT is negative");

  if (!st.have_sample) {
    // Bootstrap: nothing to extrapolate from, accept the sample as-is.
    st.have_sample = true;
    st.min_rtt = measured_rtt;
    st.last_offset = measured_offset;
    st.last_measure_time = now;
    st.observation_start = now;
    return {measured_offset, measured_offset, SampleQuality::high};
  }

  const TimeSpan time_delta = now - st.last_measure_time;
  const TimeSpan estimated = st.last_offset + st.skew.drift_over(time_delta);

  // Excess delay over the best path seen; a fresh minimum counts as clean.
  TimeSpan asymmetric_delay = measured_rtt - st.min_rtt;
  if (asymmetric_delay < TimeSpan()) asymmetric_delay = TimeSpan();

  TimeSpan corrected = measured_offset;
  if (measured_offset > estimated + st.error_margin) {
    corrected = measured_offset - asymmetric_delay / 2;
  } else if (measured_offset < estimated - st.error_margin) {
    corrected = measured_offset + asymmetric_delay / 2;
  }

  // Quality follows the applied correction, not the branch: a zero
  // asymmetric delay leaves the sample untouched and thus high quality.
  SampleQuality quality = SampleQuality::high;
  if (corrected < measured_offset) quality = SampleQuality::corrected_forward;
  else if (corrected > measured_offset) quality = SampleQuality::corrected_reverse;

  if (measured_rtt < st.min_rtt) st.min_rtt = measured_rtt;
  st.last_offset = corrected;
  st.last_measure_time = now;
  return {corrected, estimated, quality};
}

SyncUpdate rate_sync_step(SyncState& st, const FilterResult& fr, TimePoint now) {
  const PollingPolicy& pol = st.policy;

  const bool in_window = (now - st.observation_start) < pol.observation_window ||
                         st.num_samples < pol.min_window_samples;
  if (in_window) {
    st.abs_error_sum += (fr.estimated - fr.corrected).abs();
    st.num_samples += 1;
  } else {
    const bool quiet = st.mean_abs_error() < st.error_margin * 2;
    st.polling_interval =
        quiet ? pol.increased(st.polling_interval) : pol.decreased(st.polling_interval);
    st.observation_start = now;
    st.abs_error_sum = TimeSpan();
    st.num_samples = 0;
  }

  if (fr.quality == SampleQuality::high) {
    if (!st.have_sync) {
      st.have_sync = true;
      st.offset = fr.corrected;
      st.last_sync_time = now;
    } else {
      if (now <= st.last_sync_time)
        throw SyncError("non-monotonic time: sync update not after previous anchor");
      const TimeSpan baseline = now - st.last_sync_time;
      // Sub-second baselines would amplify quantization into the rate, and
      // implausibly large estimates are discarded; both keep the old rate.
      if (baseline >= TimeSpan::seconds(1)) {
        const __int128 drift =
            static_cast<__int128>((fr.corrected - st.offset).total_micros()) * 1'000'000'000;
        const __int128 candidate = drift / baseline.total_micros();
        if (candidate > -Skew::kMaxAbsPpb && candidate < Skew::kMaxAbsPpb)
          st.skew = Skew::from_drift(fr.corrected - st.offset, baseline);
      }
      st.offset = fr.corrected;
      st.last_sync_time = now;
    }
  }

  return {fr.corrected, fr.estimated, st.skew, st.polling_interval, fr.quality};
}

SyncUpdate spot_step(SyncState& st, const ExchangeSample& sample, TimePoint now) {
  const TimeSpan rtt = exchange_rtt(sample);
  const TimeSpan measured = exchange_offset(sample);
  const FilterResult fr = filter_offset(st, measured, rtt, now);
  return rate_sync_step(st, fr, now);
}

}  // namespace spot
