// spotbench: offline protocol comparison, Allan deviation, polling profiles.
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spot/bench/allan.hpp"
#include "spot/bench/compare.hpp"
#include "spot/bench/model_spec.hpp"
#include "spot/bench/report.hpp"

namespace {

using namespace spot;
using namespace spot::bench;

// Accepts "300", "300s", "5m", "24h".
TimeSpan parse_duration(const std::string& text) {
  if (text.empty()) throw BenchError("empty duration");
  std::string num = text;
  int64_t mult = 1;
  switch (text.back()) {
    case 'h':
      mult = 3600;
      num.pop_back();
      break;
    case 'm':
      mult = 60;
      num.pop_back();
      break;
    case 's':
      num.pop_back();
      break;
    default:
      break;
  }
  size_t used = 0;
  const double v = std::stod(num, &used);
  if (used != num.size() || v <= 0) throw BenchError("bad duration: " + text);
  return TimeSpan::micros(static_cast<int64_t>(std::llround(v * 1e6 * mult)));
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    if (comma > pos) items.push_back(text.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return items;
}

LevelSpec parse_level(const std::string& text, uint64_t seed) {
  LevelSpec spec;
  spec.label = text;
  if (text == "low") {
    spec.noise = NoiseModel::preset(NoiseLevel::low, seed);
  } else if (text == "medium") {
    spec.noise = NoiseModel::preset(NoiseLevel::medium, seed);
  } else if (text == "high") {
    spec.noise = NoiseModel::preset(NoiseLevel::high, seed);
  } else if (text.rfind("sigma=", 0) == 0 || text.rfind("\xcf\x83=", 0) == 0) {
    const std::string val = text.substr(text.find('=') + 1);
    size_t used = 0;
    const double ms = std::stod(val, &used);
    if (used != val.size() || ms < 0) throw BenchError("bad noise sigma: " + text);
    spec.noise = NoiseModel::preset(NoiseLevel::low, seed);
    spec.noise.std_dev = TimeSpan::micros(static_cast<int64_t>(std::llround(ms * 1000.0)));
    spec.label = "sigma=" + val;
  } else {
    throw BenchError("unknown noise level: " + text);
  }
  return spec;
}

ClockModel load_model(const std::string& trace_path, const std::string& model_spec,
                      TimePoint epoch) {
  if (!trace_path.empty() && !model_spec.empty()) {
    throw BenchError("give either --trace or --model, not both");
  }
  if (!trace_path.empty()) return ClockModel::from_trace(OffsetTrace::load_csv(trace_path));
  if (!model_spec.empty()) return parse_model_spec(model_spec, epoch);
  throw BenchError("one of --trace or --model is required");
}

int cmd_run(const std::string& trace_path, const std::string& model_spec,
            const std::string& noise_csv, const std::string& protocols_csv, int runs,
            uint64_t seed, const std::string& out, const std::string& duration_text,
            const std::string& eval_text, const std::string& style) {
  ComparisonConfig cfg;
  cfg.start = TimePoint::from_micros(0);
  cfg.duration = parse_duration(duration_text);
  cfg.runs = runs;
  cfg.seed = seed;
  cfg.eval = eval_text == "continuous" ? EvalMode::continuous : EvalMode::sync_points;
  cfg.spot_policy.style =
      style == "mimd" ? PollingPolicy::Style::mimd : PollingPolicy::Style::aimd;

  const ClockModel truth = load_model(trace_path, model_spec, cfg.start);

  std::vector<LevelSpec> levels;
  for (const std::string& item : split_list(noise_csv)) levels.push_back(parse_level(item, seed));
  std::vector<Protocol> protos;
  for (const std::string& item : split_list(protocols_csv)) {
    protos.push_back(protocol_from_name(item));
  }
  if (levels.empty() || protos.empty()) throw BenchError("need noise levels and protocols");

  const auto reports = run_comparison(truth, levels, protos, cfg);
  if (out.empty()) {
    std::fputs(render_report(reports, ReportFormat::markdown).c_str(), stdout);
  } else {
    write_report(out, reports, ReportFormat::csv);
    std::printf("wrote %zu rows to %s\n", reports.size(), out.c_str());
  }
  return 0;
}

int cmd_allan(const std::string& trace_path, const std::string& taus_csv,
              const std::string& out) {
  const OffsetTrace trace = OffsetTrace::load_csv(trace_path);
  std::vector<TimeSpan> taus;
  for (const std::string& item : split_list(taus_csv)) {
    size_t used = 0;
    const double s = std::stod(item, &used);
    if (used != item.size() || s <= 0) throw BenchError("bad tau: " + item);
    taus.push_back(TimeSpan::micros(static_cast<int64_t>(std::llround(s * 1e6))));
  }
  const AllanSeries series = allan_deviation(trace, taus);
  if (out.empty()) {
    std::fputs(render_allan_csv(series).c_str(), stdout);
  } else {
    write_allan_csv(out, series);
    std::printf("wrote %zu points to %s\n", series.points.size(), out.c_str());
  }
  return 0;
}

int cmd_poll(const std::string& model_spec, const std::string& style,
             const std::string& duration_text, const std::string& out) {
  ComparisonConfig cfg;
  cfg.start = TimePoint::from_micros(0);
  cfg.duration = parse_duration(duration_text);
  cfg.spot_policy.style =
      style == "mimd" ? PollingPolicy::Style::mimd : PollingPolicy::Style::aimd;

  const ClockModel truth = parse_model_spec(model_spec, cfg.start);
  NoiseModel quiet;
  quiet.std_dev = TimeSpan::micros(0);
  quiet.inject_prob = 0.0;

  const ProtocolRun run = run_protocol(Protocol::spot, truth, quiet, cfg);
  const PollingProfile prof = polling_profile(run.spot_log);
  if (out.empty()) {
    std::fputs(render_polling_csv(prof).c_str(), stdout);
  } else {
    write_polling_csv(out, prof);
  }
  std::printf("polls=%llu\n", static_cast<unsigned long long>(prof.poll_count));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SPoT benchmark harness"};
  app.require_subcommand(1);

  std::string trace_path, model_spec, out;
  std::string noise_csv = "low,medium,high";
  std::string protocols_csv = "spot,sntp,mqtt,consensus,minrtt";
  std::string duration_text = "24h";
  std::string eval_text = "sync";
  std::string style = "aimd";
  int runs = 100;
  uint64_t seed = 1;

  auto* run = app.add_subcommand("run", "Compare protocols under injected noise");
  run->add_option("--trace", trace_path, "Ground-truth offset trace CSV");
  run->add_option("--model", model_spec, "Synthetic clock model spec");
  run->add_option("--noise", noise_csv, "Comma list: low|medium|high|sigma=MS");
  run->add_option("--protocols", protocols_csv, "Comma list of protocols");
  run->add_option("--runs", runs, "Runs to average per cell");
  run->add_option("--seed", seed, "Master seed");
  run->add_option("--out", out, "Report CSV path (stdout table if omitted)");
  run->add_option("--duration", duration_text, "Run length, e.g. 24h, 30m, 600s");
  run->add_option("--eval", eval_text, "sync|continuous")
      ->check(CLI::IsMember({"sync", "continuous"}));
  run->add_option("--style", style, "spot polling style: aimd|mimd")
      ->check(CLI::IsMember({"aimd", "mimd"}));

  std::string taus_csv = "1,2,4,8,16,32,64,128,256,512,1024";
  auto* allan = app.add_subcommand("allan", "Allan deviation of an offset trace");
  allan->add_option("--trace", trace_path, "Offset trace CSV")->required();
  allan->add_option("--taus", taus_csv, "Comma list of averaging intervals in seconds");
  allan->add_option("--out", out, "Output CSV path (stdout if omitted)");

  auto* poll = app.add_subcommand("poll", "Polling-interval profile of a noiseless run");
  poll->add_option("--model", model_spec, "Synthetic clock model spec")->required();
  poll->add_option("--style", style, "aimd|mimd")->check(CLI::IsMember({"aimd", "mimd"}));
  poll->add_option("--duration", duration_text, "Run length, e.g. 24h");
  poll->add_option("--out", out, "Output CSV path (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return cmd_run(trace_path, model_spec, noise_csv, protocols_csv, runs, seed, out,
                     duration_text, eval_text, style);
    }
    if (allan->parsed()) return cmd_allan(trace_path, taus_csv, out);
    return cmd_poll(model_spec, style, duration_text, out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
