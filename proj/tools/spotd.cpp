// spotd: SPoT time server and thin-client emulator.
#include <csignal>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "spot/net/emulator.hpp"
#include "spot/net/server.hpp"

namespace {

volatile std::sig_atomic_t g_stop = 0;
void on_signal(int) { g_stop = 1; }

int cmd_serve(uint16_t port, size_t max_clients, const std::string& log_path,
              int64_t duration_s) {
  spot::net::ServerConfig cfg;
  cfg.port = port;
  cfg.max_clients = max_clients;
  cfg.keep_adjust_log = !log_path.empty();

  spot::net::UdpServer server(cfg);
  server.start();
  std::printf("listening on udp port %u\n", server.port());
  std::fflush(stdout);

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  const spot::TimePoint start = spot::net::steady_now();
  while (!g_stop) {
    if (duration_s > 0 &&
        spot::net::steady_now() - start >= spot::TimeSpan::seconds(duration_s)) {
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(200));
  }
  server.stop();

  const auto st = server.stats();
  std::printf("thick_served=%llu registrations=%llu probes_sent=%llu adjusts_sent=%llu "
              "evictions=%llu stray=%llu clients=%zu mem_bytes=%zu\n",
              static_cast<unsigned long long>(st.thick_served),
              static_cast<unsigned long long>(st.registrations),
              static_cast<unsigned long long>(st.probes_sent),
              static_cast<unsigned long long>(st.adjusts_sent),
              static_cast<unsigned long long>(st.evictions),
              static_cast<unsigned long long>(st.stray_datagrams), server.thin_client_count(),
              server.memory_bytes());

  if (!log_path.empty()) {
    const auto rows = server.take_adjust_log();
    FILE* f = std::fopen(log_path.c_str(), "w");
    if (!f) {
      std::fprintf(stderr, "cannot write %s\n", log_path.c_str());
      return 1;
    }
    std::fprintf(f, "ref_time_ms,client_id,offset_ms,skew_ppb,next_poll_s\n");
    for (const auto& r : rows) {
      std::fprintf(f, "%.3f,%llu,%.3f,%lld,%lld\n",
                   static_cast<double>(r.time.micros()) / 1000.0,
                   static_cast<unsigned long long>(r.client_id), r.offset.millis_f(),
                   static_cast<long long>(r.skew.ppb()),
                   static_cast<long long>(r.next_poll.total_seconds()));
    }
    std::fclose(f);
    std::printf("wrote %zu adjust rows to %s\n", rows.size(), log_path.c_str());
  }
  return 0;
}

int cmd_emulate(const std::string& server, int clients, int64_t skew_ppb, int64_t duration_s,
                const std::string& log_path, const std::string& style) {
  spot::net::EmulatorConfig cfg;
  cfg.server = spot::net::resolve(server);
  cfg.clients = clients;
  cfg.duration = spot::TimeSpan::seconds(duration_s);
  cfg.log_path = log_path;
  cfg.polling_style = style == "mimd" ? spot::PollingPolicy::Style::mimd
                                      : spot::PollingPolicy::Style::aimd;
  const spot::TimePoint epoch = spot::net::steady_now();
  cfg.model_for = [epoch, skew_ppb](int i) {
    // Alternate drift direction so errors don't cancel systematically.
    const int64_t ppb = skew_ppb * ((i % 2 == 0) ? 1 : -1);
    return spot::ClockModel::linear(epoch, spot::Skew::parts_per_billion(ppb));
  };

  spot::net::Emulator emu(cfg);
  const auto sum = emu.run();
  std::printf("clients=%d registered=%d adjusted=%d probes_answered=%llu adjusts=%llu "
              "mean_rmse_ms=%.3f max_abs_error_ms=%.3f\n",
              sum.clients, sum.clients_registered, sum.clients_adjusted,
              static_cast<unsigned long long>(sum.probes_answered),
              static_cast<unsigned long long>(sum.adjusts_received),
              sum.mean_client_rmse_us / 1000.0, sum.max_abs_error.millis_f());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SPoT time server and client emulator"};
  app.require_subcommand(1);

  uint16_t port = spot::wire::kDefaultPort;
  size_t max_clients = 1'000'000;
  std::string log_path;
  int64_t duration_s = 0;
  auto* serve = app.add_subcommand("serve", "Run the UDP time server");
  serve->add_option("--port", port, "UDP port (default 3735)");
  serve->add_option("--max-clients", max_clients, "Registry capacity");
  serve->add_option("--log", log_path, "Write per-adjust sync log CSV here on exit");
  serve->add_option("--duration", duration_s, "Stop after this many seconds (default: run until signal)");

  std::string server_addr = "127.0.0.1:3735";
  int clients = 1;
  int64_t skew_ppb = 20000;
  int64_t emu_duration_s = 60;
  std::string emu_log;
  std::string style = "aimd";
  auto* emulate = app.add_subcommand("emulate", "Emulate a population of thin clients");
  emulate->add_option("--server", server_addr, "Server HOST:PORT")->required();
  emulate->add_option("--clients", clients, "Number of emulated clients")->required();
  emulate->add_option("--clock-skew-ppb", skew_ppb, "Magnitude of each client's frequency error");
  emulate->add_option("--duration", emu_duration_s, "Run time in seconds");
  emulate->add_option("--log", emu_log, "Write accuracy log CSV here");
  emulate->add_option("--style", style, "Polling style: aimd|mimd")
      ->check(CLI::IsMember({"aimd", "mimd"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (serve->parsed()) return cmd_serve(port, max_clients, log_path, duration_s);
    return cmd_emulate(server_addr, clients, skew_ppb, emu_duration_s, emu_log, style);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
