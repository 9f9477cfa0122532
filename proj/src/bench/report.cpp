#include "spot/bench/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace spot::bench {

namespace {

std::string fmt_ms(double us) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", us / 1000.0);
  return buf;
}

std::string fmt_count(double c) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", c);
  return buf;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw BenchError("cannot write " + path);
  out << text;
  if (!out) throw BenchError("failed writing " + path);
}

}  // namespace

std::string render_report(std::span<const ExperimentReport> reports, ReportFormat format) {
  std::string out;
  const bool md = format == ReportFormat::markdown;
  if (md) {
    out +=
        "| protocol | noise_level | rmse_ms | raw_rmse_ms | min_ms | max_ms | std_ms "
        "| rate_rmse_ms | poll_count |\n";
    out += "|---|---|---|---|---|---|---|---|---|\n";
  } else {
    out += "protocol,noise_level,rmse_ms,raw_rmse_ms,min_ms,max_ms,std_ms,rate_rmse_ms,poll_count\n";
  }
  for (const ExperimentReport& r : reports) {
    const bool is_spot = r.protocol == Protocol::spot;
    const std::string rate =
        is_spot && !std::isnan(r.mean.rate_rmse) ? fmt_ms(r.mean.rate_rmse) : "";
    const std::string polls = is_spot ? fmt_count(r.mean.poll_count) : "";
    const std::string cells[] = {protocol_name(r.protocol),
                                 r.noise_label,
                                 fmt_ms(r.mean.rmse),
                                 fmt_ms(r.mean.raw_rmse),
                                 fmt_ms(r.mean.min_abs),
                                 fmt_ms(r.mean.max_abs),
                                 fmt_ms(r.mean.stddev),
                                 rate,
                                 polls};
    if (md) {
      out += "|";
      for (const auto& c : cells) out += " " + c + " |";
      out += "\n";
    } else {
      for (size_t i = 0; i < std::size(cells); ++i) {
        if (i) out += ",";
        out += cells[i];
      }
      out += "\n";
    }
  }
  return out;
}

void write_report(const std::string& path, std::span<const ExperimentReport> reports,
                  ReportFormat format) {
  write_file(path, render_report(reports, format));
}

std::string render_allan_csv(const AllanSeries& series) {
  std::string out = "tau_s,adev\n";
  char buf[96];
  for (const AllanPoint& p : series.points) {
    std::snprintf(buf, sizeof buf, "%.6f,%.9e\n", p.tau.seconds_f(), p.adev);
    out += buf;
  }
  return out;
}

void write_allan_csv(const std::string& path, const AllanSeries& series) {
  write_file(path, render_allan_csv(series));
}

std::string render_polling_csv(const PollingProfile& profile) {
  std::string out = "ref_time_ms,interval_s\n";
  char buf[96];
  for (size_t i = 0; i < profile.times.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.3f,%lld\n",
                  static_cast<double>(profile.times[i].micros()) / 1000.0,
                  static_cast<long long>(profile.intervals[i].total_seconds()));
    out += buf;
  }
  return out;
}

void write_polling_csv(const std::string& path, const PollingProfile& profile) {
  write_file(path, render_polling_csv(profile));
}

}  // namespace spot::bench
