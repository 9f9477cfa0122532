#pragma once

#include <cstdint>
#include <string>

#include "spot/error.hpp"

namespace spot::net {

class NetError : public Error {
 public:
  using Error::Error;
};

/// IPv4 address/port pair (host byte order).
struct Endpoint {
  uint32_t addr = 0;
  uint16_t port = 0;

  bool operator==(const Endpoint&) const = default;
};

/// 127.0.0.1:port
Endpoint loopback(uint16_t port);

/// Resolves "host:port" (numeric or named host) to an IPv4 endpoint.
Endpoint resolve(const std::string& host_port);

std::string to_string(const Endpoint& ep);

}  // namespace spot::net
