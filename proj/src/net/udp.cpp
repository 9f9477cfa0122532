#include "spot/net/udp.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

#include "spot/net/endpoint.hpp"

namespace spot::net {

TimePoint steady_now() {
  const auto d = std::chrono::steady_clock::now().time_since_epoch();
  return TimePoint::from_micros(
      std::chrono::duration_cast<std::chrono::microseconds>(d).count());
}

Endpoint loopback(uint16_t port) { return Endpoint{INADDR_LOOPBACK, port}; }

Endpoint resolve(const std::string& host_port) {
  const size_t colon = host_port.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == host_port.size())
    throw NetError("expected HOST:PORT, got: " + host_port);
  const std::string host = host_port.substr(0, colon);
  const std::string port_str = host_port.substr(colon + 1);
  char* end = nullptr;
  const long port = std::strtol(port_str.c_str(), &end, 10);
  if (*end != '\0' || port < 1 || port > 65535) throw NetError("invalid port: " + port_str);

  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_DGRAM;
  addrinfo* res = nullptr;
  if (getaddrinfo(host.c_str(), nullptr, &hints, &res) != 0 || res == nullptr)
    throw NetError("cannot resolve host: " + host);
  const auto* sin = reinterpret_cast<const sockaddr_in*>(res->ai_addr);
  Endpoint ep{ntohl(sin->sin_addr.s_addr), static_cast<uint16_t>(port)};
  freeaddrinfo(res);
  return ep;
}

std::string to_string(const Endpoint& ep) {
  in_addr a{};
  a.s_addr = htonl(ep.addr);
  char buf[INET_ADDRSTRLEN];
  inet_ntop(AF_INET, &a, buf, sizeof(buf));
  return std::string(buf) + ":" + std::to_string(ep.port);
}

namespace {

sockaddr_in to_sockaddr(const Endpoint& ep) {
  sockaddr_in sa{};
  sa.sin_family = AF_INET;
  sa.sin_port = htons(ep.port);
  sa.sin_addr.s_addr = htonl(ep.addr);
  return sa;
}

}  // namespace

UdpSocket::UdpSocket() {
  fd_ = ::socket(AF_INET, SOCK_DGRAM | SOCK_NONBLOCK, 0);
  if (fd_ < 0) throw NetError(std::string("socket: ") + std::strerror(errno));
  // Best effort: large queues smooth out probe bursts; the kernel clamps
  // to its configured maximum.
  const int bufsize = 8 * 1024 * 1024;
  ::setsockopt(fd_, SOL_SOCKET, SO_RCVBUF, &bufsize, sizeof(bufsize));
  ::setsockopt(fd_, SOL_SOCKET, SO_SNDBUF, &bufsize, sizeof(bufsize));
}

UdpSocket::~UdpSocket() {
  if (fd_ >= 0) ::close(fd_);
}

void UdpSocket::bind(uint16_t port) {
  sockaddr_in sa = to_sockaddr(Endpoint{INADDR_ANY, port});
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&sa), sizeof(sa)) != 0)
    throw NetError(std::string("bind: ") + std::strerror(errno));
}

uint16_t UdpSocket::local_port() const {
  sockaddr_in sa{};
  socklen_t len = sizeof(sa);
  if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&sa), &len) != 0)
    throw NetError(std::string("getsockname: ") + std::strerror(errno));
  return ntohs(sa.sin_port);
}

void UdpSocket::send(const Endpoint& to, std::span<const uint8_t> payload) {
  sockaddr_in sa = to_sockaddr(to);
  // Drops on transient buffer exhaustion are fine: retry logic sits above.
  (void)::sendto(fd_, payload.data(), payload.size(), 0, reinterpret_cast<sockaddr*>(&sa),
                 sizeof(sa));
}

bool UdpSocket::wait_readable(int timeout_ms) const {
  pollfd pfd{fd_, POLLIN, 0};
  return ::poll(&pfd, 1, timeout_ms) > 0;
}

int UdpSocket::try_receive(std::span<uint8_t> buf, Endpoint& from) {
  sockaddr_in sa{};
  socklen_t len = sizeof(sa);
  const ssize_t n =
      ::recvfrom(fd_, buf.data(), buf.size(), 0, reinterpret_cast<sockaddr*>(&sa), &len);
  if (n < 0) return -1;
  from = Endpoint{ntohl(sa.sin_addr.s_addr), ntohs(sa.sin_port)};
  return static_cast<int>(n);
}

}  // namespace spot::net
