#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "spot/clock_model.hpp"

namespace spot {

namespace {

constexpr std::string_view kHeader = "ref_time_ms,offset_ms";
constexpr std::string_view kDeviceComment = "# device: ";

void strip_spaces(std::string_view& v) {
  while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
  while (!v.empty() && (v.back() == ' ' || v.back() == '\t' || v.back() == '\r')) v.remove_suffix(1);
}

// Parses decimal milliseconds with up to three fractional digits into exact
// microseconds.
int64_t parse_ms(std::string_view v, size_t line) {
  strip_spaces(v);
  if (v.empty()) throw TraceError("empty field", line);
  bool negative = false;
  if (v.front() == '+' || v.front() == '-') {
    negative = v.front() == '-';
    v.remove_prefix(1);
  }
  size_t dot = v.find('.');
  std::string_view whole = (dot == std::string_view::npos) ? v : v.substr(0, dot);
  std::string_view frac = (dot == std::string_view::npos) ? std::string_view{} : v.substr(dot + 1);
  if (whole.empty() && frac.empty()) throw TraceError("malformed number", line);
  if (frac.size() > 3) throw TraceError("more than three fractional digits", line);
  int64_t ms = 0;
  for (char c : whole) {
    if (!std::isdigit(static_cast<unsigned char>(c))) throw TraceError("malformed number", line);
    ms = detail::add_i64(detail::mul_i64(ms, 10), c - '0');
  }
  int64_t frac_us = 0;
  int digits = 0;
  for (char c : frac) {
    if (!std::isdigit(static_cast<unsigned char>(c))) throw TraceError("malformed number", line);
    frac_us = frac_us * 10 + (c - '0');
    ++digits;
  }
  while (digits < 3) {
    frac_us *= 10;
    ++digits;
  }
  int64_t us = detail::add_i64(detail::mul_i64(ms, 1000), frac_us);
  return negative ? -us : us;
}

std::string format_ms(int64_t us) {
  const char* sign = us < 0 ? "-" : "";
  uint64_t mag = us < 0 ? -static_cast<uint64_t>(us) : static_cast<uint64_t>(us);
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%s%" PRIu64 ".%03" PRIu64, sign, mag / 1000, mag % 1000);
  return buf;
}

}  // namespace

OffsetTrace OffsetTrace::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TraceError("cannot open trace file: " + path);

  std::vector<TraceRecord> records;
  std::string device;
  std::string line;
  size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view v = line;
    strip_spaces(v);
    if (v.empty()) continue;
    if (v.front() == '#') {
      if (v.substr(0, kDeviceComment.size()) == kDeviceComment)
        device = std::string(v.substr(kDeviceComment.size()));
      continue;
    }
    if (!saw_header) {
      if (v != kHeader) throw TraceError("missing ref_time_ms,offset_ms header", line_no);
      saw_header = true;
      continue;
    }
    size_t comma = v.find(',');
    if (comma == std::string_view::npos) throw TraceError("expected two comma-separated fields", line_no);
    std::string_view rest = v.substr(comma + 1);
    if (rest.find(',') != std::string_view::npos)
      throw TraceError("expected two comma-separated fields", line_no);
    TraceRecord rec{TimePoint::from_micros(parse_ms(v.substr(0, comma), line_no)),
                    TimeSpan::micros(parse_ms(rest, line_no))};
    if (!records.empty() && rec.ref_time <= records.back().ref_time)
      throw TraceError("timestamps must be strictly increasing", line_no);
    records.push_back(rec);
  }
  if (!saw_header) throw TraceError("empty trace file: " + path);
  if (records.size() < 2) throw TraceError("trace needs at least two records");
  return OffsetTrace(std::move(records), std::move(device));
}

void OffsetTrace::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw TraceError("cannot write trace file: " + path);
  if (!device_label_.empty()) out << kDeviceComment << device_label_ << '\n';
  out << kHeader << '\n';
  for (const auto& rec : records_) {
    out << format_ms(rec.ref_time.micros()) << ',' << format_ms(rec.offset.total_micros()) << '\n';
  }
  if (!out) throw TraceError("failed writing trace file: " + path);
}

}  // namespace spot
