#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "spot/error.hpp"
#include "spot/sync.hpp"

namespace spot::wire {

// Datagram layout (all multi-byte fields big-endian):
//
//   offset  size  field
//   ------  ----  -----------------------------------------
//        0     4  magic 0x53506F54 ("SPoT")
//        4     1  version (currently 1)
//        5     1  message kind
//        6     2  reserved, must be zero
//        8     8  client_id
//       16     4  seq
//       20     -  kind-specific body (sizes below)
//
//   kind-specific bodies:
//     THICK_REQ / THICK_RESP (32 bytes)
//       4 x i64  exchange timestamps in microseconds, in order:
//                request_sent, request_received, reply_sent, reply_received;
//                fields not yet known are zero
//     REGISTER (7 bytes)
//       u8 mode (0 thick, 1 thin), u8 polling style (0 aimd, 1 mimd),
//       u32 error margin in microseconds (non-zero), u8 device type tag
//     REGISTER_ACK (1 byte)
//       u8 status (0 accepted, 1 rejected)
//     PROBE (8 bytes)
//       i64 server send time in microseconds
//     PROBE_RESP (16 bytes)
//       i64 client receive time, i64 client send time (client clock)
//     ADJUST (20 bytes)
//       i64 offset in microseconds, i64 skew in ppb, u32 next poll in
//       seconds (non-zero)

inline constexpr uint32_t kMagic = 0x53506F54;  // "SPoT"
inline constexpr uint8_t kVersion = 1;
inline constexpr uint16_t kDefaultPort = 3735;
inline constexpr size_t kHeaderSize = 20;  // fixed header incl. seq
inline constexpr size_t kMaxMessageSize = kHeaderSize + 32;

enum class MsgKind : uint8_t {
  thick_req = 1,
  thick_resp = 2,
  register_req = 3,
  register_ack = 4,
  probe = 5,
  probe_resp = 6,
  adjust = 7,
};

enum class ClientMode : uint8_t { thick = 0, thin = 1 };

enum class RegisterStatus : uint8_t { accepted = 0, rejected = 1 };

struct ThickBody {
  int64_t request_sent_us = 0;
  int64_t request_received_us = 0;
  int64_t reply_sent_us = 0;
  int64_t reply_received_us = 0;

  bool operator==(const ThickBody&) const = default;
};

struct RegisterBody {
  ClientMode mode = ClientMode::thin;
  PollingPolicy::Style polling_style = PollingPolicy::Style::aimd;
  uint32_t error_margin_us = 10'000;
  uint8_t device_type = 0;

  bool operator==(const RegisterBody&) const = default;
};

struct RegisterAckBody {
  RegisterStatus status = RegisterStatus::accepted;

  bool operator==(const RegisterAckBody&) const = default;
};

struct ProbeBody {
  int64_t server_send_us = 0;

  bool operator==(const ProbeBody&) const = default;
};

struct ProbeRespBody {
  int64_t client_recv_us = 0;
  int64_t client_send_us = 0;

  bool operator==(const ProbeRespBody&) const = default;
};

struct AdjustBody {
  int64_t offset_us = 0;
  int64_t skew_ppb = 0;
  uint32_t next_poll_s = 0;

  bool operator==(const AdjustBody&) const = default;
};

using Body = std::variant<ThickBody, RegisterBody, RegisterAckBody, ProbeBody, ProbeRespBody,
                          AdjustBody>;

struct Message {
  MsgKind kind = MsgKind::thick_req;
  uint64_t client_id = 0;
  uint32_t seq = 0;
  Body body;

  bool operator==(const Message&) const = default;
};

/// Raised by encode() when a message violates the wire contract
/// (kind/body mismatch, zero error margin, zero next_poll).
class WireError : public Error {
 public:
  using Error::Error;
};

enum class DecodeError : uint8_t {
  none = 0,
  bad_magic,
  bad_version,
  bad_kind,
  truncated,
  trailing_bytes,
  reserved_nonzero,
  bad_field,
};

/// Human-readable name of a decode error.
const char* decode_error_name(DecodeError e);

struct DecodeResult {
  DecodeError error = DecodeError::none;
  Message message;

  bool ok() const { return error == DecodeError::none; }
};

/// Serializes a message. Total sizes: thick 52, register 27, register_ack
/// 21, probe 28, probe_resp 36, adjust 40 bytes.
std::vector<uint8_t> encode(const Message& m);

/// Parses a datagram. Never throws and never reads out of bounds; any
/// input that is not a well-formed message yields a DecodeError.
DecodeResult decode(std::span<const uint8_t> bytes) noexcept;

/// Body size in bytes for a message kind.
size_t body_size(MsgKind kind);

}  // namespace spot::wire
