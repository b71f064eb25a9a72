#include "quicktalk/protocol.hpp"

#include <memory>

namespace quicktalk {

namespace {

class Writer {
 public:
  Writer& u24(std::uint32_t v) { return put(v, 3); }
  Writer& u32(std::uint32_t v) { return put(v, 4); }
  Writer& u8(std::uint8_t v) { return put(v, 1); }
  Writer& bytes(std::span<const std::uint8_t> b) {
    out_.insert(out_.end(), b.begin(), b.end());
    return *this;
  }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  Writer& put(std::uint32_t v, int n) {
    for (int i = n - 1; i >= 0; --i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    return *this;
  }
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> b) : b_(b) {}
  bool u24(std::uint32_t& v) { return get(v, 3); }
  bool u32(std::uint32_t& v) { return get(v, 4); }
  bool u8(std::uint8_t& v) {
    std::uint32_t t;
    if (!get(t, 1)) return false;
    v = static_cast<std::uint8_t>(t);
    return true;
  }
  std::vector<std::uint8_t> rest() {
    std::vector<std::uint8_t> r(b_.begin() + static_cast<std::ptrdiff_t>(pos_), b_.end());
    pos_ = b_.size();
    return r;
  }
  bool done() const { return pos_ == b_.size(); }

 private:
  bool get(std::uint32_t& v, std::size_t n) {
    if (pos_ + n > b_.size()) return false;
    v = 0;
    for (std::size_t i = 0; i < n; ++i) v = (v << 8) | b_[pos_ + i];
    pos_ += n;
    return true;
  }
  std::span<const std::uint8_t> b_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode(const BeaconMsg& m) { return Writer().u24(m.user_id).u32(m.device_id).take(); }
std::vector<std::uint8_t> encode(const AckMsg& m) { return Writer().u24(m.user_id).u32(m.device_id).take(); }

std::vector<std::uint8_t> encode(const CommandMsg& m) {
  return Writer().u24(m.user_id).u32(m.device_id).u32(m.txn_id).bytes(m.body).take();
}

std::vector<std::uint8_t> encode(const ResponseMsg& m) {
  return Writer()
      .u24(m.user_id)
      .u32(m.device_id)
      .u32(m.txn_id)
      .u8(static_cast<std::uint8_t>(m.status))
      .bytes(m.body)
      .take();
}

std::optional<BeaconMsg> decode_beacon(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  BeaconMsg m{};
  if (!r.u24(m.user_id) || !r.u32(m.device_id) || !r.done()) return std::nullopt;
  return m;
}

std::optional<AckMsg> decode_ack(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  AckMsg m{};
  if (!r.u24(m.user_id) || !r.u32(m.device_id) || !r.done()) return std::nullopt;
  return m;
}

std::optional<CommandMsg> decode_command(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  CommandMsg m{};
  if (!r.u24(m.user_id) || !r.u32(m.device_id) || !r.u32(m.txn_id)) return std::nullopt;
  m.body = r.rest();
  return m;
}

std::optional<ResponseMsg> decode_response(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  ResponseMsg m{};
  std::uint8_t status = 0;
  if (!r.u24(m.user_id) || !r.u32(m.device_id) || !r.u32(m.txn_id) || !r.u8(status)) return std::nullopt;
  if (status > static_cast<std::uint8_t>(ResponseStatus::Unsupported)) return std::nullopt;
  m.status = static_cast<ResponseStatus>(status);
  m.body = r.rest();
  return m;
}

std::vector<std::uint8_t> to_bytes(std::string_view s) { return {s.begin(), s.end()}; }
std::string to_text(std::span<const std::uint8_t> bytes) { return {bytes.begin(), bytes.end()}; }

CommandProcessor echo_processor() {
  return [](std::span<const std::uint8_t> body) -> CommandResult {
    if (body.empty()) return {ResponseStatus::Malformed, to_bytes("empty command")};
    return {ResponseStatus::Ok, {body.begin(), body.end()}};
  };
}

CommandProcessor bulb_processor() {
  auto lit = std::make_shared<bool>(false);
  return [lit](std::span<const std::uint8_t> body) -> CommandResult {
    const std::string cmd = to_text(body);
    if (cmd.empty()) return {ResponseStatus::Malformed, to_bytes("empty command")};
    if (cmd == "ON") {
      *lit = true;
    } else if (cmd == "OFF") {
      *lit = false;
    } else if (cmd == "TOGGLE") {
      *lit = !*lit;
    } else if (cmd != "STATE") {
      return {ResponseStatus::Unsupported, to_bytes("unknown command")};
    }
    return {ResponseStatus::Ok, to_bytes(*lit ? "on" : "off")};
  };
}

CommandProcessor sensor_processor(std::string reading) {
  return [reading = std::move(reading)](std::span<const std::uint8_t> body) -> CommandResult {
    const std::string cmd = to_text(body);
    if (cmd.empty()) return {ResponseStatus::Malformed, to_bytes("empty command")};
    if (cmd != "READ") return {ResponseStatus::Unsupported, to_bytes("unknown command")};
    return {ResponseStatus::Ok, to_bytes(reading)};
  };
}

}  // namespace quicktalk
