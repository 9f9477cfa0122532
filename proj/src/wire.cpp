#include "spot/wire.hpp"

namespace spot::wire {

namespace {

void put_u8(std::vector<uint8_t>& out, uint8_t v) { out.push_back(v); }

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<uint8_t>(v >> shift));
}

void put_u64(std::vector<uint8_t>& out, uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<uint8_t>(v >> shift));
}

void put_i64(std::vector<uint8_t>& out, int64_t v) { put_u64(out, static_cast<uint64_t>(v)); }

// Bounds are validated by the caller before any get_* call.
class Reader {
 public:
  explicit Reader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  uint8_t u8() { return bytes_[pos_++]; }
  uint16_t u16() { return static_cast<uint16_t>(u8() << 8 | u8()); }
  uint32_t u32() {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = v << 8 | u8();
    return v;
  }
  uint64_t u64() {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = v << 8 | u8();
    return v;
  }
  int64_t i64() { return static_cast<int64_t>(u64()); }

 private:
  std::span<const uint8_t> bytes_;
  size_t pos_ = 0;
};

bool kind_matches_body(const Message& m) {
  switch (m.kind) {
    case MsgKind::thick_req:
    case MsgKind::thick_resp:
      return std::holds_alternative<ThickBody>(m.body);
    case MsgKind::register_req:
      return std::holds_alternative<RegisterBody>(m.body);
    case MsgKind::register_ack:
      return std::holds_alternative<RegisterAckBody>(m.body);
    case MsgKind::probe:
      return std::holds_alternative<ProbeBody>(m.body);
    case MsgKind::probe_resp:
      return std::holds_alternative<ProbeRespBody>(m.body);
    case MsgKind::adjust:
      return std::holds_alternative<AdjustBody>(m.body);
  }
  return false;
}

}  // namespace

size_t body_size(MsgKind kind) {
  switch (kind) {
    case MsgKind::thick_req:
    case MsgKind::thick_resp:
      return 32;
    case MsgKind::register_req:
      return 7;
    case MsgKind::register_ack:
      return 1;
    case MsgKind::probe:
      return 8;
    case MsgKind::probe_resp:
      return 16;
    case MsgKind::adjust:
      return 20;
  }
  throw WireError("unknown message kind");
}

const char* decode_error_name(DecodeError e) {
  switch (e) {
    case DecodeError::none:
      return "none";
    case DecodeError::bad_magic:
      return "bad magic";
    case DecodeError::bad_version:
      return "unsupported version";
    case DecodeError::bad_kind:
      return "unknown message kind";
    case DecodeError::truncated:
      return "truncated datagram";
    case DecodeError::trailing_bytes:
      return "trailing bytes after body";
    case DecodeError::reserved_nonzero:
      return "non-zero reserved field";
    case DecodeError::bad_field:
      return "invalid field value";
  }
  return "unknown error";
}

std::vector<uint8_t> encode(const Message& m) {
  if (!kind_matches_body(m)) throw WireError("message body does not match its kind");

  std::vector<uint8_t> out;
  out.reserve(kHeaderSize + body_size(m.kind));
  put_u32(out, kMagic);
  put_u8(out, kVersion);
  put_u8(out, static_cast<uint8_t>(m.kind));
  put_u16(out, 0);  // reserved
  put_u64(out, m.client_id);
  put_u32(out, m.seq);

  switch (m.kind) {
    case MsgKind::thick_req:
    case MsgKind::thick_resp: {
      const auto& b = std::get<ThickBody>(m.body);
      put_i64(out, b.request_sent_us);
      put_i64(out, b.request_received_us);
      put_i64(out, b.reply_sent_us);
      put_i64(out, b.reply_received_us);
      break;
    }
    case MsgKind::register_req: {
      const auto& b = std::get<RegisterBody>(m.body);
      if (b.error_margin_us == 0) throw WireError("registration error margin must be non-zero");
      put_u8(out, static_cast<uint8_t>(b.mode));
      put_u8(out, static_cast<uint8_t>(b.polling_style));
      put_u32(out, b.error_margin_us);
      put_u8(out, b.device_type);
      break;
    }
    case MsgKind::register_ack: {
      const auto& b = std::get<RegisterAckBody>(m.body);
      put_u8(out, static_cast<uint8_t>(b.status));
      break;
    }
    case MsgKind::probe: {
      put_i64(out, std::get<ProbeBody>(m.body).server_send_us);
      break;
    }
    case MsgKind::probe_resp: {
      const auto& b = std::get<ProbeRespBody>(m.body);
      put_i64(out, b.client_recv_us);
      put_i64(out, b.client_send_us);
      break;
    }
    case MsgKind::adjust: {
      const auto& b = std::get<AdjustBody>(m.body);
      if (b.next_poll_s == 0) throw WireError("adjust next_poll must be non-zero");
      put_i64(out, b.offset_us);
      put_i64(out, b.skew_ppb);
      put_u32(out, b.next_poll_s);
      break;
    }
  }
  return out;
}

DecodeResult decode(std::span<const uint8_t> bytes) noexcept {
  DecodeResult res;
  if (bytes.size() < kHeaderSize) {
    res.error = DecodeError::truncated;
    return res;
  }
  Reader r(bytes);
  if (r.u32() != kMagic) {
    res.error = DecodeError::bad_magic;
    return res;
  }
  if (r.u8() != kVersion) {
    res.error = DecodeError::bad_version;
    return res;
  }
  const uint8_t kind_raw = r.u8();
  if (kind_raw < static_cast<uint8_t>(MsgKind::thick_req) ||
      kind_raw > static_cast<uint8_t>(MsgKind::adjust)) {
    res.error = DecodeError::bad_kind;
    return res;
  }
  const MsgKind kind = static_cast<MsgKind>(kind_raw);
  if (r.u16() != 0) {
    res.error = DecodeError::reserved_nonzero;
    return res;
  }
  res.message.kind = kind;
  res.message.client_id = r.u64();
  res.message.seq = r.u32();

  const size_t expect = kHeaderSize + body_size(kind);
  if (bytes.size() < expect) {
    res.error = DecodeError::truncated;
    return res;
  }
  if (bytes.size() > expect) {
    res.error = DecodeError::trailing_bytes;
    return res;
  }

  switch (kind) {
    case MsgKind::thick_req:
    case MsgKind::thick_resp: {
      ThickBody b;
      b.request_sent_us = r.i64();
      b.request_received_us = r.i64();
      b.reply_sent_us = r.i64();
      b.reply_received_us = r.i64();
      res.message.body = b;
      break;
    }
    case MsgKind::register_req: {
      RegisterBody b;
      const uint8_t mode = r.u8();
      const uint8_t style = r.u8();
      b.error_margin_us = r.u32();
      b.device_type = r.u8();
      if (mode > 1 || style > 1 || b.error_margin_us == 0) {
        res.error = DecodeError::bad_field;
        return res;
      }
      b.mode = static_cast<ClientMode>(mode);
      b.polling_style = static_cast<PollingPolicy::Style>(style);
      res.message.body = b;
      break;
    }
    case MsgKind::register_ack: {
      const uint8_t status = r.u8();
      if (status > 1) {
        res.error = DecodeError::bad_field;
        return res;
      }
      res.message.body = RegisterAckBody{static_cast<RegisterStatus>(status)};
      break;
    }
    case MsgKind::probe: {
      res.message.body = ProbeBody{r.i64()};
      break;
    }
    case MsgKind::probe_resp: {
      ProbeRespBody b;
      b.client_recv_us = r.i64();
      b.client_send_us = r.i64();
      res.message.body = b;
      break;
    }
    case MsgKind::adjust: {
      AdjustBody b;
      b.offset_us = r.i64();
      b.skew_ppb = r.i64();
      b.next_poll_s = r.u32();
      if (b.next_poll_s == 0) {
        res.error = DecodeError::bad_field;
        return res;
      }
      res.message.body = b;
      break;
    }
  }
  return res;
}

}  // namespace spot::wire
