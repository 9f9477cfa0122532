#include "spot/net/server.hpp"

#include <algorithm>
#include <array>

namespace spot::net {

using wire::Message;
using wire::MsgKind;

ServerCore::ServerCore(ServerConfig cfg, Clock clock)
    : cfg_(cfg),
      clock_(std::move(clock)),
      registry_(Registry::allocator_type(&mem_bytes_)),
      schedule_(std::greater<ScheduleItem>{},
                std::vector<ScheduleItem, CountingAllocator<ScheduleItem>>(
                    CountingAllocator<ScheduleItem>(&mem_bytes_))),
      pending_(std::greater<PendingDeadline>{},
               std::vector<PendingDeadline, CountingAllocator<PendingDeadline>>(
                   CountingAllocator<PendingDeadline>(&mem_bytes_))) {
  cfg_.thin_policy.validate();
}

size_t ServerCore::thin_client_count() const {
  size_t n = 0;
  for (const auto& [id, e] : registry_) {
    if (e.reg.mode == wire::ClientMode::thin) ++n;
  }
  return n;
}

const SyncState* ServerCore::client_state(uint64_t client_id) const {
  auto it = registry_.find(client_id);
  if (it == registry_.end() || !it->second.state) return nullptr;
  return &*it->second.state;
}

bool ServerCore::client_scheduled(uint64_t client_id) const {
  auto it = registry_.find(client_id);
  return it != registry_.end() && it->second.reg.mode == wire::ClientMode::thin &&
         !it->second.unresponsive;
}

std::vector<AdjustLogRow> ServerCore::take_adjust_log() {
  std::vector<AdjustLogRow> rows;
  rows.swap(adjust_log_);
  return rows;
}

void ServerCore::handle_datagram(std::span<const uint8_t> bytes, const Endpoint& from,
                                 TimePoint recv_time, std::vector<Outgoing>& out) {
  const wire::DecodeResult res = wire::decode(bytes);
  if (!res.ok()) {
    ++stats_.stray_datagrams;
    return;
  }
  switch (res.message.kind) {
    case MsgKind::thick_req:
      handle_thick(res.message, from, recv_time, out);
      break;
    case MsgKind::register_req:
      handle_register(res.message, from, recv_time, out);
      break;
    case MsgKind::probe_resp:
      handle_probe_resp(res.message, recv_time, out);
      break;
    default:
      // Server-originated kinds bounced back at us.
      ++stats_.stray_datagrams;
      break;
  }
}

void ServerCore::handle_thick(const Message& m, const Endpoint& from, TimePoint recv_time,
                              std::vector<Outgoing>& out) {
  // Stateless: stamp receive/send times, echo the rest, touch nothing.
  const auto& req = std::get<wire::ThickBody>(m.body);
  Message resp;
  resp.kind = MsgKind::thick_resp;
  resp.client_id = m.client_id;
  resp.seq = m.seq;
  wire::ThickBody body;
  body.request_sent_us = req.request_sent_us;
  body.request_received_us = recv_time.micros();
  body.reply_sent_us = clock_().micros();
  resp.body = body;
  out.push_back(Outgoing{from, wire::encode(resp)});
  ++stats_.thick_served;
}

void ServerCore::schedule(uint64_t client_id, ClientEntry& e, TimePoint due) {
  ++e.generation;
  schedule_.push(ScheduleItem{due, client_id, e.generation});
}

void ServerCore::handle_register(const Message& m, const Endpoint& from, TimePoint recv_time,
                                 std::vector<Outgoing>& out) {
  const auto& reg = std::get<wire::RegisterBody>(m.body);

  uint64_t id = m.client_id;
  if (id == 0) id = next_assigned_id_++;

  auto it = registry_.find(id);
  const bool is_new = it == registry_.end();
  wire::RegisterStatus status = wire::RegisterStatus::accepted;

  if (is_new && registry_.size() >= cfg_.max_clients) {
    status = wire::RegisterStatus::rejected;
    ++stats_.registrations_rejected;
  } else {
    if (is_new) it = registry_.emplace(id, ClientEntry{}).first;
    ClientEntry& e = it->second;
    e.reg = reg;
    e.addr = from;
    e.last_seen = recv_time;
    e.unresponsive = false;
    e.pending = false;
    e.attempts = 0;
    e.consecutive_failures = 0;
    if (reg.mode == wire::ClientMode::thin) {
      if (!e.state) {
        PollingPolicy pol = cfg_.thin_policy;
        pol.style = reg.polling_style;
        e.state.emplace(pol, TimeSpan::micros(reg.error_margin_us));
      } else {
        // Re-registration keeps learned state but adopts the new knobs.
        e.state->policy.style = reg.polling_style;
        e.state->error_margin = TimeSpan::micros(reg.error_margin_us);
      }
      schedule(id, e, recv_time + e.state->polling_interval);
    } else {
      e.state.reset();
    }
    ++stats_.registrations;
  }

  Message ack;
  ack.kind = MsgKind::register_ack;
  ack.client_id = id;
  ack.seq = m.seq;
  ack.body = wire::RegisterAckBody{status};
  out.push_back(Outgoing{from, wire::encode(ack)});
}

void ServerCore::send_probe(uint64_t client_id, ClientEntry& e, TimePoint now,
                            std::vector<Outgoing>& out) {
  Message probe;
  probe.kind = MsgKind::probe;
  probe.client_id = client_id;
  probe.seq = ++next_seq_;
  const TimePoint t1 = clock_();
  probe.body = wire::ProbeBody{t1.micros()};

  e.pending = true;
  e.pending_seq = probe.seq;
  e.probe_sent_at = t1;
  pending_.push(PendingDeadline{now + cfg_.probe_timeout, client_id, probe.seq});

  out.push_back(Outgoing{e.addr, wire::encode(probe)});
  ++stats_.probes_sent;
}

void ServerCore::handle_probe_resp(const Message& m, TimePoint recv_time,
                                   std::vector<Outgoing>& out) {
  auto it = registry_.find(m.client_id);
  if (it == registry_.end() || !it->second.state || !it->second.pending ||
      it->second.pending_seq != m.seq) {
    ++stats_.stray_datagrams;
    return;
  }
  ClientEntry& e = it->second;
  const auto& body = std::get<wire::ProbeRespBody>(m.body);

  // Mirrored exchange: the server originates, so the responder clock is the
  // client's and the computed offset reads client-minus-reference.
  ExchangeSample sample;
  sample.request_sent = e.probe_sent_at;
  sample.request_received = TimePoint::from_micros(body.client_recv_us);
  sample.reply_sent = TimePoint::from_micros(body.client_send_us);
  sample.reply_received = recv_time;

  SyncUpdate update;
  try {
    update = spot_step(*e.state, sample, recv_time);
  } catch (const SyncError&) {
    // A garbled sample must not wedge the cycle; treat it as a failure.
    e.pending = false;
    ++e.consecutive_failures;
    ++stats_.cycles_failed;
    if (e.consecutive_failures >= cfg_.eviction_failures) {
      e.unresponsive = true;
      ++stats_.evictions;
    } else {
      schedule(m.client_id, e, recv_time + e.state->polling_interval);
    }
    return;
  }

  e.pending = false;
  e.attempts = 0;
  e.consecutive_failures = 0;
  e.last_seen = recv_time;

  Message adj;
  adj.kind = MsgKind::adjust;
  adj.client_id = m.client_id;
  adj.seq = m.seq;
  wire::AdjustBody ab;
  ab.offset_us = update.corrected_offset.total_micros();
  ab.skew_ppb = update.skew.ppb();
  ab.next_poll_s = static_cast<uint32_t>(update.next_poll_in.total_seconds());
  adj.body = ab;
  out.push_back(Outgoing{e.addr, wire::encode(adj)});
  ++stats_.adjusts_sent;

  if (cfg_.keep_adjust_log) {
    adjust_log_.push_back(AdjustLogRow{recv_time, m.client_id, update.corrected_offset,
                                       update.skew, update.next_poll_in, update.quality});
  }

  schedule(m.client_id, e, recv_time + update.next_poll_in);
}

void ServerCore::poll_due(TimePoint now, std::vector<Outgoing>& out) {
  // Expire unanswered probes.
  while (!pending_.empty() && pending_.top().deadline <= now) {
    const PendingDeadline d = pending_.top();
    pending_.pop();
    auto it = registry_.find(d.client_id);
    if (it == registry_.end()) continue;
    ClientEntry& e = it->second;
    if (!e.pending || e.pending_seq != d.seq) continue;  // answered or superseded

    if (e.attempts <= cfg_.probe_retries) {
      ++e.attempts;
      ++stats_.probe_retries;
      send_probe(d.client_id, e, now, out);
      continue;
    }
    // Whole cycle lost.
    e.pending = false;
    e.attempts = 0;
    ++e.consecutive_failures;
    ++stats_.cycles_failed;
    if (e.consecutive_failures >= cfg_.eviction_failures) {
      e.unresponsive = true;
      ++stats_.evictions;
    } else if (e.state) {
      schedule(d.client_id, e, now + e.state->polling_interval);
    }
  }

  // Dispatch due probes, paced so a burst of 10k clients coming due at the
  // same instant does not overrun socket buffers.
  int dispatched = 0;
  while (!schedule_.empty() && schedule_.top().due <= now &&
         dispatched < cfg_.max_probes_per_poll) {
    const ScheduleItem item = schedule_.top();
    schedule_.pop();
    auto it = registry_.find(item.client_id);
    if (it == registry_.end()) continue;
    ClientEntry& e = it->second;
    if (e.generation != item.generation || e.unresponsive || !e.state || e.pending) continue;

    const TimeSpan jitter = now - item.due;
    if (jitter > stats_.max_probe_jitter) stats_.max_probe_jitter = jitter;

    e.attempts = 1;
    send_probe(item.client_id, e, now, out);
    ++dispatched;
  }
}

std::optional<TimePoint> ServerCore::next_deadline() const {
  std::optional<TimePoint> next;
  if (!schedule_.empty()) next = schedule_.top().due;
  if (!pending_.empty() && (!next || pending_.top().deadline < *next))
    next = pending_.top().deadline;
  return next;
}

UdpServer::UdpServer(ServerConfig cfg) : cfg_(cfg), core_(cfg) { sock_.bind(cfg.port); }

UdpServer::~UdpServer() { stop(); }

void UdpServer::start() {
  if (running_.exchange(true)) return;
  loop_ = std::thread([this] { run_loop(); });
}

void UdpServer::stop() {
  if (!running_.exchange(false)) return;
  if (loop_.joinable()) loop_.join();
}

void UdpServer::run_loop() {
  std::array<uint8_t, 2048> buf;
  std::vector<Outgoing> out;
  while (running_.load(std::memory_order_relaxed)) {
    // Sleep until the next scheduled probe or timeout, capped so stop() is
    // honored promptly.
    int timeout_ms = 20;
    {
      std::lock_guard lock(mu_);
      if (auto next = core_.next_deadline()) {
        const int64_t until = (*next - steady_now()).total_millis();
        timeout_ms = static_cast<int>(std::clamp<int64_t>(until, 0, 20));
      }
    }
    sock_.wait_readable(timeout_ms);

    for (;;) {
      out.clear();
      {
        std::lock_guard lock(mu_);
        // Drain a bounded batch of datagrams, then let scheduled work run.
        Endpoint from;
        int received = 0;
        while (received < 512) {
          const int n = sock_.try_receive(buf, from);
          if (n < 0) break;
          core_.handle_datagram(std::span(buf.data(), static_cast<size_t>(n)), from,
                                steady_now(), out);
          ++received;
        }
        core_.poll_due(steady_now(), out);
      }
      if (out.empty()) break;
      for (const auto& o : out) sock_.send(o.to, o.payload);
    }
  }
}

ServerStats UdpServer::stats() const {
  std::lock_guard lock(mu_);
  return core_.stats();
}

size_t UdpServer::thin_client_count() const {
  std::lock_guard lock(mu_);
  return core_.thin_client_count();
}

size_t UdpServer::memory_bytes() const {
  std::lock_guard lock(mu_);
  return core_.memory_bytes();
}

std::vector<AdjustLogRow> UdpServer::take_adjust_log() {
  std::lock_guard lock(mu_);
  return core_.take_adjust_log();
}

}  // namespace spot::net
