#pragma once

#include <span>
#include <string>

#include "spot/bench/allan.hpp"
#include "spot/bench/compare.hpp"

namespace spot::bench {

enum class ReportFormat : uint8_t { csv, markdown };

/// Renders comparison results. CSV columns:
/// protocol,noise_level,rmse_ms,raw_rmse_ms,min_ms,max_ms,std_ms,rate_rmse_ms,poll_count
/// (rate_rmse_ms and poll_count are filled for spot only). Milliseconds are
/// printed with three decimals; output is deterministic for given inputs.
std::string render_report(std::span<const ExperimentReport> reports, ReportFormat format);

void write_report(const std::string& path, std::span<const ExperimentReport> reports,
                  ReportFormat format);

/// Renders an Allan series as CSV (tau_s,adev).
std::string render_allan_csv(const AllanSeries& series);

void write_allan_csv(const std::string& path, const AllanSeries& series);

/// Renders a polling profile as CSV (ref_time_ms,interval_s).
std::string render_polling_csv(const PollingProfile& profile);

void write_polling_csv(const std::string& path, const PollingProfile& profile);

}  // namespace spot::bench
