#include "spot/net/thick_client.hpp"

#include <array>

#include "spot/wire.hpp"

namespace spot::net {

ThickClient::ThickClient(Endpoint server, uint64_t client_id, PollingPolicy policy,
                         TimeSpan error_margin)
    : server_(server), client_id_(client_id), state_(policy, error_margin) {
  sock_.bind(0);
}

std::optional<ExchangeSample> ThickClient::exchange(int timeout_ms) {
  wire::Message req;
  req.kind = wire::MsgKind::thick_req;
  req.client_id = client_id_;
  req.seq = ++seq_;
  const TimePoint t1 = steady_now();
  req.body = wire::ThickBody{t1.micros(), 0, 0, 0};
  sock_.send(server_, wire::encode(req));

  std::array<uint8_t, 2048> buf;
  Endpoint from;
  const TimePoint deadline = t1 + TimeSpan::millis(timeout_ms);
  while (steady_now() < deadline) {
    const int64_t left = (deadline - steady_now()).total_millis();
    if (!sock_.wait_readable(static_cast<int>(left) + 1)) continue;
    const int n = sock_.try_receive(buf, from);
    if (n < 0) continue;
    const TimePoint t4 = steady_now();
    const auto res = wire::decode(std::span(buf.data(), static_cast<size_t>(n)));
    if (!res.ok() || res.message.kind != wire::MsgKind::thick_resp || res.message.seq != seq_)
      continue;
    const auto& body = std::get<wire::ThickBody>(res.message.body);
    ExchangeSample s;
    s.request_sent = t1;
    s.request_received = TimePoint::from_micros(body.request_received_us);
    s.reply_sent = TimePoint::from_micros(body.reply_sent_us);
    s.reply_received = t4;
    return s;
  }
  return std::nullopt;
}

std::optional<SyncUpdate> ThickClient::poll_once(int timeout_ms) {
  auto sample = exchange(timeout_ms);
  if (!sample) return std::nullopt;
  return spot_step(state_, *sample, sample->reply_received);
}

}  // namespace spot::net
