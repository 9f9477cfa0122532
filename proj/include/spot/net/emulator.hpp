#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "spot/clock_model.hpp"
#include "spot/net/endpoint.hpp"
#include "spot/net/udp.hpp"
#include "spot/sync.hpp"
#include "spot/time.hpp"

namespace spot::net {

/// One line of the emulator's accuracy log.
struct EmulatorLogRow {
  TimePoint ref_time;
  uint64_t client_id = 0;
  TimeSpan true_offset;
  TimeSpan adopted_offset;
  TimeSpan error;
};

struct EmulatorSummary {
  int clients = 0;
  int clients_registered = 0;
  int clients_adjusted = 0;   // received at least one ADJUST
  uint64_t probes_answered = 0;
  uint64_t adjusts_received = 0;
  double mean_client_rmse_us = 0.0;  // mean over clients of per-client RMSE
  TimeSpan max_abs_error;
};

struct EmulatorConfig {
  Endpoint server;
  int clients = 1;
  /// Ground-truth clock for client i (reference timescale = steady_now).
  std::function<ClockModel(int)> model_for;
  TimeSpan duration = TimeSpan::seconds(60);
  PollingPolicy::Style polling_style = PollingPolicy::Style::aimd;
  TimeSpan error_margin = TimeSpan::millis(10);
  uint8_t device_type = 0;
  int registrations_per_second = 2000;
  std::string log_path;  // CSV written on completion when non-empty
};

/// Emulates a population of thin clients on a single UDP socket.
///
/// Each client registers (requesting a server-assigned id), answers the
/// server's probes with timestamps from its own simulated clock, applies
/// the ADJUST it gets back, and records the error of the adopted offset
/// against its ground-truth model.
class Emulator {
 public:
  explicit Emulator(EmulatorConfig cfg);

  /// Runs for cfg.duration (blocking), then writes the log if configured.
  EmulatorSummary run();

  const std::vector<EmulatorLogRow>& log() const { return log_; }

 private:
  struct Client {
    ClockModel clock;
    uint64_t assigned_id = 0;
    bool registered = false;
    uint32_t adjusts = 0;
    double sq_error_sum_us2 = 0.0;
  };

  void handle_datagram(std::span<const uint8_t> bytes, std::vector<uint8_t>& reply_buf);
  void pump_registrations(TimePoint now);

  EmulatorConfig cfg_;
  UdpSocket sock_;
  std::vector<Client> clients_;
  std::unordered_map<uint64_t, size_t> by_assigned_;
  size_t next_unregistered_ = 0;
  TimePoint last_registration_sweep_;
  EmulatorSummary summary_;
  std::vector<EmulatorLogRow> log_;
};

/// Writes the emulator accuracy log as CSV
/// (ref_time_ms,client_id,true_offset_ms,adopted_offset_ms,error_ms).
void write_emulator_log(const std::string& path, const std::vector<EmulatorLogRow>& rows);

}  // namespace spot::net
