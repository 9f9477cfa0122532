#include "spot/clock_model.hpp"

#include <algorithm>

#include "spot/rng.hpp"

namespace spot {

namespace {

constexpr int64_t kUsPerSecond = 1'000'000;
constexpr int64_t kPpbScale = 1'000'000'000;

// Truncating division toward zero; __int128 keeps ppb*us products exact.
int64_t ppb_us_to_us(__int128 v) { return static_cast<int64_t>(v / kPpbScale); }

}  // namespace

OffsetTrace::OffsetTrace(std::vector<TraceRecord> records, std::string device_label)
    : records_(std::move(records)), device_label_(std::move(device_label)) {
  if (records_.size() < 2) throw TraceError("trace needs at least two records");
  for (size_t i = 1; i < records_.size(); ++i) {
    if (records_[i].ref_time <= records_[i - 1].ref_time)
      throw TraceError("trace timestamps must be strictly increasing");
  }
  sample_period_ = records_[1].ref_time - records_[0].ref_time;
}

bool OffsetTrace::uniformly_sampled() const {
  for (size_t i = 1; i < records_.size(); ++i) {
    if (records_[i].ref_time - records_[i - 1].ref_time != sample_period_) return false;
  }
  return true;
}

ClockModel ClockModel::linear(TimePoint epoch, Skew base_skew) {
  ClockModel m;
  m.kind_ = Kind::linear;
  m.epoch_ = epoch;
  m.base_skew_ = base_skew;
  return m;
}

ClockModel ClockModel::piecewise(TimePoint epoch, Skew base_skew,
                                 std::vector<SkewSegment> segments) {
  ClockModel m;
  m.kind_ = Kind::piecewise;
  m.epoch_ = epoch;
  m.base_skew_ = base_skew;
  for (size_t i = 0; i < segments.size(); ++i) {
    if (segments[i].start < epoch) throw ModelError("segment starts before model epoch");
    if (i > 0 && segments[i].start <= segments[i - 1].start)
      throw ModelError("segment starts must be strictly increasing");
  }
  m.segments_ = std::move(segments);
  return m;
}

ClockModel ClockModel::random_walk(TimePoint epoch, Skew base_skew, double wander_ppb_per_sqrt_s,
                                   uint64_t seed, TimeSpan horizon) {
  if (wander_ppb_per_sqrt_s < 0) throw ModelError("wander density must be non-negative");
  if (horizon <= TimeSpan()) throw ModelError("random-walk horizon must be positive");

  ClockModel m;
  m.kind_ = Kind::random_walk;
  m.epoch_ = epoch;
  m.base_skew_ = base_skew;

  // One-second grid: the rate takes a Gaussian step each second and the
  // offset integrates it, so readings stay pure lookups afterwards.
  const size_t steps = static_cast<size_t>(horizon.total_seconds()) + 1;
  auto table = std::make_shared<WalkTable>();
  table->skew_ppb.resize(steps + 1);
  table->cum_ppb_us.resize(steps + 1);
  rng::GaussianStream gauss(seed);
  int64_t skew = base_skew.ppb();
  int64_t cum = 0;
  for (size_t k = 0; k <= steps; ++k) {
    table->skew_ppb[k] = skew;
    table->cum_ppb_us[k] = cum;
    if (k == steps) break;
    cum = detail::add_i64(cum, detail::mul_i64(skew, kUsPerSecond));
    skew += llround(wander_ppb_per_sqrt_s * gauss.next());
    if (skew <= -Skew::kMaxAbsPpb || skew >= Skew::kMaxAbsPpb)
      throw ModelError("random-walk skew left the valid range within the horizon");
  }
  m.walk_ = std::move(table);
  return m;
}

ClockModel ClockModel::from_trace(OffsetTrace trace) {
  ClockModel m;
  m.kind_ = Kind::trace;
  m.epoch_ = trace.start_time();
  m.trace_ = std::make_shared<const OffsetTrace>(std::move(trace));
  return m;
}

TimeSpan ClockModel::true_offset(TimePoint ref_time) const {
  switch (kind_) {
    case Kind::linear: {
      if (ref_time < epoch_) throw ModelError("reading before model epoch");
      return base_skew_.drift_over(ref_time - epoch_);
    }
    case Kind::piecewise: {
      if (ref_time < epoch_) throw ModelError("reading before model epoch");
      // Integrate the piecewise-constant rate; one final truncation keeps
      // the result within 1 us of exact.
      __int128 acc = 0;
      TimePoint cursor = epoch_;
      Skew current = base_skew_;
      for (const auto& seg : segments_) {
        if (seg.start >= ref_time) break;
        acc += static_cast<__int128>(current.ppb()) * (seg.start - cursor).total_micros();
        cursor = seg.start;
        current = seg.skew;
      }
      acc += static_cast<__int128>(current.ppb()) * (ref_time - cursor).total_micros();
      return TimeSpan::micros(ppb_us_to_us(acc));
    }
    case Kind::random_walk: {
      if (ref_time < epoch_) throw ModelError("reading before model epoch");
      const int64_t elapsed = (ref_time - epoch_).total_micros();
      const size_t k = static_cast<size_t>(elapsed / kUsPerSecond);
      if (k + 1 >= walk_->cum_ppb_us.size())
        throw ModelError("reading beyond random-walk horizon");
      const int64_t sub = elapsed - static_cast<int64_t>(k) * kUsPerSecond;
      __int128 acc = walk_->cum_ppb_us[k];
      acc += static_cast<__int128>(walk_->skew_ppb[k]) * sub;
      return TimeSpan::micros(ppb_us_to_us(acc));
    }
    case Kind::trace: {
      const auto recs = trace_->records();
      if (ref_time < recs.front().ref_time || ref_time > recs.back().ref_time)
        throw ModelError("reading outside trace range");
      auto it = std::upper_bound(recs.begin(), recs.end(), ref_time,
                                 [](TimePoint t, const TraceRecord& r) { return t < r.ref_time; });
      if (it == recs.begin()) return recs.front().offset;
      const TraceRecord& hi = (it == recs.end()) ? recs.back() : *it;
      const TraceRecord& lo = *(it - 1);
      if (ref_time == lo.ref_time) return lo.offset;
      const __int128 num = static_cast<__int128>((hi.offset - lo.offset).total_micros()) *
                           (ref_time - lo.ref_time).total_micros();
      const int64_t den = (hi.ref_time - lo.ref_time).total_micros();
      return lo.offset + TimeSpan::micros(static_cast<int64_t>(num / den));
    }
  }
  throw ModelError("unknown clock model kind");
}

TimePoint ClockModel::read(TimePoint ref_time) const { return ref_time + true_offset(ref_time); }

Skew ClockModel::skew_at(TimePoint ref_time) const {
  switch (kind_) {
    case Kind::linear:
      return base_skew_;
    case Kind::piecewise: {
      Skew current = base_skew_;
      for (const auto& seg : segments_) {
        if (seg.start > ref_time) break;
        current = seg.skew;
      }
      return current;
    }
    case Kind::random_walk: {
      if (ref_time < epoch_) throw ModelError("reading before model epoch");
      const size_t k =
          static_cast<size_t>((ref_time - epoch_).total_micros() / kUsPerSecond);
      if (k >= walk_->skew_ppb.size()) throw ModelError("reading beyond random-walk horizon");
      return Skew::parts_per_billion(walk_->skew_ppb[k]);
    }
    case Kind::trace:
      throw ModelError("trace models have no analytic rate");
  }
  throw ModelError("unknown clock model kind");
}

}  // namespace spot
