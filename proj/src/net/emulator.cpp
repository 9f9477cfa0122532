#include "spot/net/emulator.hpp"

#include <array>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "spot/wire.hpp"

namespace spot::net {

using wire::Message;
using wire::MsgKind;

Emulator::Emulator(EmulatorConfig cfg) : cfg_(std::move(cfg)) {
  if (cfg_.clients < 1) throw NetError("emulator needs at least one client");
  if (!cfg_.model_for) throw NetError("emulator needs a clock model factory");
  sock_.bind(0);
  clients_.reserve(cfg_.clients);
  for (int i = 0; i < cfg_.clients; ++i) {
    clients_.push_back(Client{cfg_.model_for(i), 0, false, 0, 0.0});
  }
}

void Emulator::pump_registrations(TimePoint now) {
  // Pace registrations so a large population does not flood the server,
  // and periodically re-send ones whose ack got lost.
  if (last_registration_sweep_ != TimePoint() &&
      now - last_registration_sweep_ < TimeSpan::seconds(1))
    return;
  last_registration_sweep_ = now;

  while (next_unregistered_ < clients_.size() && clients_[next_unregistered_].registered)
    ++next_unregistered_;

  int budget = cfg_.registrations_per_second;
  for (size_t i = next_unregistered_; i < clients_.size() && budget > 0; ++i) {
    // Skip acked clients: a repeat request with id 0 would mint a second
    // identity on the server.
    if (clients_[i].registered) continue;
    Message reg;
    reg.kind = MsgKind::register_req;
    reg.client_id = 0;  // request a server-assigned id
    reg.seq = static_cast<uint32_t>(i);
    wire::RegisterBody body;
    body.mode = wire::ClientMode::thin;
    body.polling_style = cfg_.polling_style;
    body.error_margin_us = static_cast<uint32_t>(cfg_.error_margin.total_micros());
    body.device_type = cfg_.device_type;
    reg.body = body;
    sock_.send(cfg_.server, wire::encode(reg));
    --budget;
  }
}

void Emulator::handle_datagram(std::span<const uint8_t> bytes, std::vector<uint8_t>& reply_buf) {
  reply_buf.clear();
  const wire::DecodeResult res = wire::decode(bytes);
  if (!res.ok()) return;
  const Message& m = res.message;

  switch (m.kind) {
    case MsgKind::register_ack: {
      const auto& ack = std::get<wire::RegisterAckBody>(m.body);
      if (ack.status != wire::RegisterStatus::accepted) return;
      const size_t idx = m.seq;
      if (idx >= clients_.size() || clients_[idx].registered) return;
      clients_[idx].registered = true;
      clients_[idx].assigned_id = m.client_id;
      by_assigned_[m.client_id] = idx;
      ++summary_.clients_registered;
      return;
    }
    case MsgKind::probe: {
      auto it = by_assigned_.find(m.client_id);
      if (it == by_assigned_.end()) return;
      Client& c = clients_[it->second];

      Message resp;
      resp.kind = MsgKind::probe_resp;
      resp.client_id = m.client_id;
      resp.seq = m.seq;
      wire::ProbeRespBody body;
      // Stamp with the emulated device clock.
      body.client_recv_us = c.clock.read(steady_now()).micros();
      body.client_send_us = c.clock.read(steady_now()).micros();
      resp.body = body;
      reply_buf = wire::encode(resp);
      ++summary_.probes_answered;
      return;
    }
    case MsgKind::adjust: {
      auto it = by_assigned_.find(m.client_id);
      if (it == by_assigned_.end()) return;
      Client& c = clients_[it->second];
      const auto& adj = std::get<wire::AdjustBody>(m.body);

      const TimePoint now = steady_now();
      const TimeSpan truth = c.clock.true_offset(now);
      const TimeSpan adopted = TimeSpan::micros(adj.offset_us);
      const TimeSpan error = adopted - truth;

      if (c.adjusts == 0) ++summary_.clients_adjusted;
      ++c.adjusts;
      const double err_us = static_cast<double>(error.total_micros());
      c.sq_error_sum_us2 += err_us * err_us;
      ++summary_.adjusts_received;
      if (error.abs() > summary_.max_abs_error) summary_.max_abs_error = error.abs();
      log_.push_back(EmulatorLogRow{now, m.client_id, truth, adopted, error});
      return;
    }
    default:
      return;
  }
}

EmulatorSummary Emulator::run() {
  summary_ = EmulatorSummary{};
  summary_.clients = cfg_.clients;
  log_.clear();

  const TimePoint start = steady_now();
  const TimePoint end = start + cfg_.duration;
  std::array<uint8_t, 2048> buf;
  std::vector<uint8_t> reply;
  Endpoint from;

  while (steady_now() < end) {
    pump_registrations(steady_now());
    sock_.wait_readable(20);
    int drained = 0;
    while (drained < 4096) {
      const int n = sock_.try_receive(buf, from);
      if (n < 0) break;
      handle_datagram(std::span(buf.data(), static_cast<size_t>(n)), reply);
      if (!reply.empty()) sock_.send(cfg_.server, reply);
      ++drained;
    }
  }

  double rmse_sum = 0.0;
  int rmse_clients = 0;
  for (const Client& c : clients_) {
    if (c.adjusts == 0) continue;
    rmse_sum += std::sqrt(c.sq_error_sum_us2 / c.adjusts);
    ++rmse_clients;
  }
  summary_.mean_client_rmse_us = rmse_clients > 0 ? rmse_sum / rmse_clients : 0.0;

  if (!cfg_.log_path.empty()) write_emulator_log(cfg_.log_path, log_);
  return summary_;
}

namespace {

std::string csv_ms(int64_t us) {
  const char* sign = us < 0 ? "-" : "";
  const uint64_t mag = us < 0 ? -static_cast<uint64_t>(us) : static_cast<uint64_t>(us);
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%s%" PRIu64 ".%03" PRIu64, sign, mag / 1000, mag % 1000);
  return buf;
}

}  // namespace

void write_emulator_log(const std::string& path, const std::vector<EmulatorLogRow>& rows) {
  std::ofstream out(path);
  if (!out) throw NetError("cannot write emulator log: " + path);
  out << "ref_time_ms,client_id,true_offset_ms,adopted_offset_ms,error_ms\n";
  for (const auto& r : rows) {
    out << csv_ms(r.ref_time.micros()) << ',' << r.client_id << ','
        << csv_ms(r.true_offset.total_micros()) << ',' << csv_ms(r.adopted_offset.total_micros())
        << ',' << csv_ms(r.error.total_micros()) << '\n';
  }
}

}  // namespace spot::net
