#pragma once

#include <optional>

#include "spot/net/endpoint.hpp"
#include "spot/net/udp.hpp"
#include "spot/sync.hpp"

namespace spot::net {

/// Minimal self-driven (thick) client: performs two-way exchanges against a
/// server and runs the full sync pipeline locally.
class ThickClient {
 public:
  ThickClient(Endpoint server, uint64_t client_id, PollingPolicy policy = {},
              TimeSpan error_margin = TimeSpan::millis(10));

  /// One blocking request/reply exchange. Returns the timestamped sample,
  /// or nullopt on timeout.
  std::optional<ExchangeSample> exchange(int timeout_ms = 1000);

  /// exchange() + local sync update. Returns nullopt on timeout.
  std::optional<SyncUpdate> poll_once(int timeout_ms = 1000);

  const SyncState& state() const { return state_; }

 private:
  Endpoint server_;
  uint64_t client_id_;
  uint32_t seq_ = 0;
  UdpSocket sock_;
  SyncState state_;
};

}  // namespace spot::net
