#include "spot/bench/allan.hpp"

#include <cmath>

namespace spot::bench {

AllanSeries allan_deviation(const OffsetTrace& trace, std::span<const TimeSpan> taus) {
  if (!trace.uniformly_sampled()) throw BenchError("allan deviation needs uniform sampling");
  if (taus.empty()) throw BenchError("allan deviation needs at least one tau");
  const auto& recs = trace.records();
  const int64_t period = trace.sample_period().total_micros();

  AllanSeries series;
  series.points.reserve(taus.size());
  TimeSpan prev = TimeSpan::micros(0);
  for (const TimeSpan tau : taus) {
    if (tau <= prev) throw BenchError("taus must be strictly increasing and positive");
    prev = tau;
    if (tau.total_micros() % period != 0) {
      throw BenchError("tau must be a multiple of the sample period");
    }
    const size_t m = static_cast<size_t>(tau.total_micros() / period);
    if (recs.size() < 2 * m + 1) throw BenchError("trace too short for requested tau");

    // Second difference of the decimated phase sequence.
    double sq_sum = 0.0;
    size_t n = 0;
    for (size_t j = 0; j + 2 * m < recs.size(); j += m) {
      const double x0 = static_cast<double>(recs[j].offset.total_micros());
      const double x1 = static_cast<double>(recs[j + m].offset.total_micros());
      const double x2 = static_cast<double>(recs[j + 2 * m].offset.total_micros());
      const double d = x2 - 2.0 * x1 + x0;
      sq_sum += d * d;
      ++n;
    }
    const double tau_us = static_cast<double>(tau.total_micros());
    const double avar = sq_sum / (2.0 * tau_us * tau_us * static_cast<double>(n));
    series.points.push_back(AllanPoint{tau, std::sqrt(avar)});
  }
  return series;
}

double allan_loglog_slope(const AllanSeries& series) {
  size_t n = 0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const AllanPoint& p : series.points) {
    if (p.adev <= 0.0) continue;
    const double x = std::log10(static_cast<double>(p.tau.total_micros()));
    const double y = std::log10(p.adev);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) throw BenchError("slope needs at least two nonzero points");
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw BenchError("degenerate tau spacing");
  return (n * sxy - sx * sy) / denom;
}

}  // namespace spot::bench
