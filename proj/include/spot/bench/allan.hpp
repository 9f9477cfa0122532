#pragma once

#include <span>
#include <vector>

#include "spot/bench/noise.hpp"
#include "spot/clock_model.hpp"
#include "spot/time.hpp"

namespace spot::bench {

/// Allan deviation at one averaging interval.
struct AllanPoint {
  TimeSpan tau;
  double adev;  // dimensionless
};

struct AllanSeries {
  std::vector<AllanPoint> points;
};

/// Non-overlapping Allan deviation of a uniformly sampled offset trace.
///
/// The trace's offsets are the phase data x(k). For each tau = m * period
/// the variance estimate is
///     AVAR(tau) = mean_j [ (x((j+2)m) - 2 x((j+1)m) + x(jm))^2 ] / (2 tau^2)
/// over consecutive decimated triples, and ADEV = sqrt(AVAR).
///
/// Requirements: the trace is uniformly sampled, every tau is a positive
/// multiple of the sample period, taus are strictly increasing, and the
/// trace spans at least 2m+1 samples for each tau.
AllanSeries allan_deviation(const OffsetTrace& trace, std::span<const TimeSpan> taus);

/// Least-squares slope of log10(adev) against log10(tau).
double allan_loglog_slope(const AllanSeries& series);

}  // namespace spot::bench
