#include "antroute/protocol/codec.hpp"

#include <string>

namespace antroute::protocol {

namespace {

class Writer {
 public:
  explicit Writer(std::size_t size) { out_.reserve(size); }

  template <typename T>
  void put(T value) {
    for (int shift = 8 * (static_cast<int>(sizeof(T)) - 1); shift >= 0; shift -= 8) {
      out_.push_back(static_cast<std::uint8_t>(static_cast<std::uint64_t>(value) >> shift));
    }
  }

  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  template <typename T>
  T get() {
    if (in_.size() - pos_ < sizeof(T)) throw DecodeError("truncated frame");
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v = (v << 8) | in_[pos_++];
    return static_cast<T>(v);
  }

  void expect_end() const {
    if (pos_ != in_.size()) {
      throw DecodeError("overlong frame: " + std::to_string(in_.size() - pos_) +
                        " trailing bytes");
    }
  }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

Direction read_direction(Reader& r) {
  const auto d = r.get<std::uint8_t>();
  if (d > 1) throw DecodeError("invalid direction byte " + std::to_string(d));
  return static_cast<Direction>(d);
}

std::uint8_t read_timestamp(Reader& r) {
  const auto t = r.get<std::uint8_t>();
  if (t >= kTimestampModulus) throw DecodeError("timestamp out of range: " + std::to_string(t));
  return t;
}

}  // namespace

std::vector<std::uint8_t> encode(const PheromoneMessage& m) {
  Writer w(kPheromoneFrameSize);
  w.put(static_cast<std::uint8_t>(MessageKind::pheromone));
  w.put(static_cast<std::uint8_t>(m.direction));
  w.put(m.seed);
  w.put(m.counter);
  w.put(m.remaining_fees);
  w.put(m.amount);
  w.put(m.timestamp);
  return w.take();
}

std::vector<std::uint8_t> encode(const MatchMessage& m) {
  Writer w(kMatchFrameSize);
  w.put(static_cast<std::uint8_t>(MessageKind::match));
  w.put(static_cast<std::uint8_t>(m.direction));
  w.put(m.seed);
  w.put(m.match_id);
  w.put(m.counter);
  w.put(m.total_counter);
  w.put(m.total_fees);
  w.put(m.timestamp);
  return w.take();
}

std::vector<std::uint8_t> encode(const ConfirmationMessage& m) {
  if (m.checks.size() > kMaxCheckListLength) {
    throw std::length_error("check list longer than 255 entries");
  }
  Writer w(kConfirmationFrameOverhead + 8 * m.checks.size());
  w.put(static_cast<std::uint8_t>(MessageKind::confirmation));
  w.put(m.match_id);
  w.put(static_cast<std::uint8_t>(m.checks.size()));
  for (auto c : m.checks) w.put(c);
  w.put(m.timestamp);
  return w.take();
}

std::vector<std::uint8_t> encode(const Message& m) {
  return std::visit([](const auto& msg) { return encode(msg); }, m);
}

std::size_t frame_size(const Message& m) {
  if (std::holds_alternative<PheromoneMessage>(m)) return kPheromoneFrameSize;
  if (std::holds_alternative<MatchMessage>(m)) return kMatchFrameSize;
  return kConfirmationFrameOverhead + 8 * std::get<ConfirmationMessage>(m).checks.size();
}

MessageKind kind_of(const Message& m) {
  if (std::holds_alternative<PheromoneMessage>(m)) return MessageKind::pheromone;
  if (std::holds_alternative<MatchMessage>(m)) return MessageKind::match;
  return MessageKind::confirmation;
}

const char* kind_name(MessageKind kind) {
  switch (kind) {
    case MessageKind::pheromone: return "pheromone";
    case MessageKind::match: return "match";
    case MessageKind::confirmation: return "confirmation";
  }
  return "unknown";
}

Message decode(std::span<const std::uint8_t> frame) {
  Reader r(frame);
  const auto kind = r.get<std::uint8_t>();
  switch (static_cast<MessageKind>(kind)) {
    case MessageKind::pheromone: {
      PheromoneMessage m;
      m.direction = read_direction(r);
      m.seed = r.get<std::uint64_t>();
      m.counter = r.get<std::uint8_t>();
      m.remaining_fees = r.get<std::uint32_t>();
      m.amount = r.get<std::uint32_t>();
      m.timestamp = read_timestamp(r);
      r.expect_end();
      return m;
    }
    case MessageKind::match: {
      MatchMessage m;
      m.direction = read_direction(r);
      m.seed = r.get<std::uint64_t>();
      m.match_id = r.get<std::uint64_t>();
      m.counter = r.get<std::uint8_t>();
      m.total_counter = r.get<std::uint8_t>();
      m.total_fees = r.get<std::uint32_t>();
      m.timestamp = read_timestamp(r);
      r.expect_end();
      return m;
    }
    case MessageKind::confirmation: {
      ConfirmationMessage m;
      m.match_id = r.get<std::uint64_t>();
      const auto len = r.get<std::uint8_t>();
      m.checks.reserve(len);
      for (int i = 0; i < len; ++i) m.checks.push_back(r.get<std::uint64_t>());
      m.timestamp = read_timestamp(r);
      r.expect_end();
      return m;
    }
  }
  throw DecodeError("unknown message kind " + std::to_string(kind));
}

}  // namespace antroute::protocol
