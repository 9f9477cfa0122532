#pragma once

#include <cstdint>
#include <span>

#include "spot/net/endpoint.hpp"
#include "spot/time.hpp"

namespace spot::net {

/// Microseconds since an arbitrary process-independent epoch (the host's
/// monotonic clock). Every node on one host shares this timescale, which is
/// what loopback tests use as ground truth.
TimePoint steady_now();

/// Thin RAII wrapper around a non-blocking IPv4 UDP socket.
class UdpSocket {
 public:
  UdpSocket();
  ~UdpSocket();

  UdpSocket(const UdpSocket&) = delete;
  UdpSocket& operator=(const UdpSocket&) = delete;

  /// Binds to the given port (0 picks an ephemeral port).
  void bind(uint16_t port);
  uint16_t local_port() const;

  /// Best-effort send; a full buffer drops the datagram (UDP semantics).
  void send(const Endpoint& to, std::span<const uint8_t> payload);

  /// Blocks up to timeout_ms for readability. Returns false on timeout.
  bool wait_readable(int timeout_ms) const;

  /// Non-blocking receive. Returns the datagram size, or -1 when the
  /// receive queue is empty.
  int try_receive(std::span<uint8_t> buf, Endpoint& from);

 private:
  int fd_ = -1;
};

}  // namespace spot::net
