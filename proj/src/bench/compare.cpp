#include "spot/bench/compare.hpp"

#include <cmath>
#include <limits>

namespace spot::bench {

const char* protocol_name(Protocol p) {
  switch (p) {
    case Protocol::spot:
      return "spot";
    case Protocol::sntp:
      return "sntp";
    case Protocol::mqtt:
      return "mqtt";
    case Protocol::consensus:
      return "consensus";
    case Protocol::minrtt:
      return "minrtt";
  }
  return "unknown";
}

Protocol protocol_from_name(const std::string& name) {
  if (name == "spot") return Protocol::spot;
  if (name == "sntp") return Protocol::sntp;
  if (name == "mqtt") return Protocol::mqtt;
  if (name == "consensus") return Protocol::consensus;
  if (name == "minrtt") return Protocol::minrtt;
  throw BenchError("unknown protocol: " + name);
}

namespace {

// Packs a synthetic (offset, rtt) measurement into exchange timestamps with
// symmetric legs, so the sync pipeline consumes it through its normal entry
// point: reconstructing offset/RTT from the sample returns the inputs.
ExchangeSample pack_sample(const Measurement& m) {
  ExchangeSample s;
  s.request_sent = m.time - m.measured_rtt;
  s.request_received = s.request_sent + m.measured_rtt / 2 + m.measured_offset;
  s.reply_sent = s.request_received;
  s.reply_received = m.time;
  return s;
}

void record_raw(ProtocolRun& run, const Measurement& m) {
  run.raw_times.push_back(m.time);
  run.raw_measured.push_back(m.measured_offset);
  run.raw_true.push_back(m.true_offset);
}

void adopt(ProtocolRun& run, TimePoint t, TimeSpan value, TimeSpan truth) {
  run.sync_times.push_back(t);
  run.adopted.push_back(value);
  run.true_at_sync.push_back(truth);
}

void run_spot(ProtocolRun& run, const ClockModel& truth, const NoiseModel& noise,
              const ComparisonConfig& cfg, TimePoint end) {
  SyncState st(cfg.spot_policy, cfg.spot_error_margin);
  TimePoint t = cfg.start;
  while (t <= end) {
    const Measurement m = measure_at(truth, noise, t);
    record_raw(run, m);
    const SyncUpdate u = spot_step(st, pack_sample(m), t);
    adopt(run, t, u.corrected_offset, m.true_offset);
    run.spot_log.points.push_back(SpotRunLog::Point{t, u.corrected_offset, m.true_offset,
                                                    u.quality, st.have_sync, st.offset, st.skew,
                                                    st.last_sync_time, st.polling_interval});
    t = t + u.next_poll_in;
  }
}

void run_sntp(ProtocolRun& run, const ClockModel& truth, const NoiseModel& noise,
              const ComparisonConfig& cfg, TimePoint end) {
  for (TimePoint t = cfg.start; t <= end; t = t + cfg.baseline.polling_interval) {
    const Measurement m = measure_at(truth, noise, t);
    record_raw(run, m);
    adopt(run, t, baselines::sntp_offset(pack_sample(m)), m.true_offset);
  }
}

void run_mqtt(ProtocolRun& run, const ClockModel& truth, const NoiseModel& noise,
              const ComparisonConfig& cfg, TimePoint end) {
  for (TimePoint t = cfg.start; t <= end; t = t + cfg.baseline.polling_interval) {
    // A push delivery experiences half the path plus any observational
    // delay; the same keyed draw disturbs every protocol equally.
    const Measurement m = measure_at(truth, noise, t);
    const TimeSpan extra = (m.measured_rtt - noise.path_rtt) / 2;
    const TimeSpan owd = noise.path_rtt / 2 + extra;
    const TimeSpan adopted = baselines::mqtt_push_offset(m.true_offset, owd);
    run.raw_times.push_back(t);
    run.raw_measured.push_back(adopted);
    run.raw_true.push_back(m.true_offset);
    adopt(run, t, adopted, m.true_offset);
  }
}

void run_burst(ProtocolRun& run, Protocol proto, const ClockModel& truth, const NoiseModel& noise,
               const ComparisonConfig& cfg, TimePoint end) {
  const auto& bl = cfg.baseline;
  const TimeSpan burst_len = bl.burst_spacing * (bl.burst_count - 1);
  for (TimePoint burst_start = cfg.start; burst_start + burst_len <= end;
       burst_start = burst_start + bl.polling_interval) {
    std::vector<baselines::BurstSample> burst;
    burst.reserve(bl.burst_count);
    TimePoint t = burst_start;
    for (int i = 0; i < bl.burst_count; ++i, t = t + bl.burst_spacing) {
      const Measurement m = measure_at(truth, noise, t);
      record_raw(run, m);
      burst.push_back(baselines::BurstSample{m.measured_offset, m.measured_rtt});
    }
    const TimePoint adopt_time = burst_start + burst_len;
    const TimeSpan value = proto == Protocol::consensus ? baselines::consensus_offset(burst)
                                                        : baselines::minrtt_offset(burst);
    adopt(run, adopt_time, value, truth.true_offset(adopt_time));
  }
}

struct Series {
  double sq_sum = 0.0;
  double sum = 0.0;
  double min_abs = std::numeric_limits<double>::infinity();
  double max_abs = 0.0;
  size_t n = 0;

  void add(double err) {
    sq_sum += err * err;
    sum += err;
    const double a = std::abs(err);
    if (a < min_abs) min_abs = a;
    if (a > max_abs) max_abs = a;
    ++n;
  }
  double rmse() const { return n ? std::sqrt(sq_sum / n) : 0.0; }
  double stddev() const {
    if (!n) return 0.0;
    const double mean = sum / n;
    const double var = sq_sum / n - mean * mean;
    return var > 0 ? std::sqrt(var) : 0.0;
  }
};

}  // namespace

ProtocolRun run_protocol(Protocol proto, const ClockModel& truth, const NoiseModel& noise,
                         const ComparisonConfig& cfg) {
  noise.validate();
  cfg.spot_policy.validate();
  cfg.baseline.validate();
  ProtocolRun run;
  const TimePoint end = cfg.start + cfg.duration;
  switch (proto) {
    case Protocol::spot:
      run_spot(run, truth, noise, cfg, end);
      break;
    case Protocol::sntp:
      run_sntp(run, truth, noise, cfg, end);
      break;
    case Protocol::mqtt:
      run_mqtt(run, truth, noise, cfg, end);
      break;
    case Protocol::consensus:
      run_burst(run, Protocol::consensus, truth, noise, cfg, end);
      break;
    case Protocol::minrtt:
      run_burst(run, Protocol::minrtt, truth, noise, cfg, end);
      break;
  }
  return run;
}

RunStats run_stats(const ProtocolRun& run, const ClockModel& truth, const ComparisonConfig& cfg) {
  RunStats st;
  Series filtered;
  Series raw;

  if (cfg.eval == EvalMode::sync_points) {
    for (size_t i = 0; i < run.sync_times.size(); ++i) {
      filtered.add(
          static_cast<double>((run.adopted[i] - run.true_at_sync[i]).total_micros()));
    }
  } else {
    // Continuous: hold each adopted value (extrapolated by skew for spot)
    // until the next sync point, sampling on a regular grid.
    const TimePoint end = cfg.start + cfg.duration;
    size_t i = 0;
    const bool is_spot = !run.spot_log.points.empty();
    for (TimePoint t = cfg.start; t <= end; t = t + cfg.eval_period) {
      while (i + 1 < run.sync_times.size() && run.sync_times[i + 1] <= t) ++i;
      if (run.sync_times.empty() || t < run.sync_times.front()) continue;
      TimeSpan held = run.adopted[i];
      if (is_spot) {
        const auto& p = run.spot_log.points[i];
        if (p.have_sync) held = p.state_offset + p.skew.drift_over(t - p.last_sync_time);
      }
      filtered.add(static_cast<double>((held - truth.true_offset(t)).total_micros()));
    }
  }

  for (size_t i = 0; i < run.raw_times.size(); ++i) {
    raw.add(static_cast<double>((run.raw_measured[i] - run.raw_true[i]).total_micros()));
  }

  st.rmse = filtered.rmse();
  st.min_abs = filtered.n ? filtered.min_abs : 0.0;
  st.max_abs = filtered.max_abs;
  st.stddev = filtered.stddev();
  st.raw_rmse = raw.rmse();
  st.raw_min_abs = raw.n ? raw.min_abs : 0.0;
  st.raw_max_abs = raw.max_abs;
  st.raw_stddev = raw.stddev();
  if (!run.spot_log.points.empty()) {
    st.rate_rmse = rate_error_rmse(run.spot_log);
    st.poll_count = static_cast<double>(run.spot_log.points.size());
  } else {
    st.rate_rmse = std::numeric_limits<double>::quiet_NaN();
    st.poll_count = static_cast<double>(run.sync_times.size());
  }
  return st;
}

std::vector<ExperimentReport> run_comparison(const ClockModel& truth,
                                             std::span<const LevelSpec> levels,
                                             std::span<const Protocol> protocols,
                                             const ComparisonConfig& cfg) {
  if (cfg.runs < 1) throw BenchError("comparison needs at least one run");
  std::vector<ExperimentReport> reports;
  for (const LevelSpec& level : levels) {
    for (Protocol proto : protocols) {
      ExperimentReport rep;
      rep.protocol = proto;
      rep.noise_label = level.label;
      rep.runs_averaged = cfg.runs;
      RunStats acc;
      for (int r = 0; r < cfg.runs; ++r) {
        NoiseModel noise = level.noise;
        // One stream per run, shared by every protocol in that run.
        noise.seed = rng::keyed_state(cfg.seed, static_cast<uint64_t>(r));
        const ProtocolRun run = run_protocol(proto, truth, noise, cfg);
        const RunStats st = run_stats(run, truth, cfg);
        acc.rmse += st.rmse;
        acc.min_abs += st.min_abs;
        acc.max_abs += st.max_abs;
        acc.stddev += st.stddev;
        acc.raw_rmse += st.raw_rmse;
        acc.raw_min_abs += st.raw_min_abs;
        acc.raw_max_abs += st.raw_max_abs;
        acc.raw_stddev += st.raw_stddev;
        if (proto == Protocol::spot) acc.rate_rmse += st.rate_rmse;
        acc.poll_count += st.poll_count;
      }
      const double n = cfg.runs;
      rep.mean.rmse = acc.rmse / n;
      rep.mean.min_abs = acc.min_abs / n;
      rep.mean.max_abs = acc.max_abs / n;
      rep.mean.stddev = acc.stddev / n;
      rep.mean.raw_rmse = acc.raw_rmse / n;
      rep.mean.raw_min_abs = acc.raw_min_abs / n;
      rep.mean.raw_max_abs = acc.raw_max_abs / n;
      rep.mean.raw_stddev = acc.raw_stddev / n;
      rep.mean.rate_rmse = proto == Protocol::spot ? acc.rate_rmse / n
                                                   : std::numeric_limits<double>::quiet_NaN();
      rep.mean.poll_count = acc.poll_count / n;
      reports.push_back(std::move(rep));
    }
  }
  return reports;
}

double rate_error_rmse(const SpotRunLog& log) {
  double sq_sum = 0.0;
  size_t n = 0;
  for (size_t i = 0; i + 1 < log.points.size(); ++i) {
    const auto& p = log.points[i];
    const auto& next = log.points[i + 1];
    if (!p.have_sync) continue;
    const TimeSpan predicted = p.state_offset + p.skew.drift_over(next.time - p.last_sync_time);
    const double err = static_cast<double>((predicted - next.true_offset).total_micros());
    sq_sum += err * err;
    ++n;
  }
  if (n < 2) throw BenchError("rate error needs at least two sync points");
  return std::sqrt(sq_sum / n);
}

PollingProfile polling_profile(const SpotRunLog& log) {
  PollingProfile prof;
  prof.poll_count = log.points.size();
  prof.times.reserve(log.points.size());
  prof.intervals.reserve(log.points.size());
  for (const auto& p : log.points) {
    prof.times.push_back(p.time);
    prof.intervals.push_back(p.polling_interval);
  }
  return prof;
}

}  // namespace spot::bench
