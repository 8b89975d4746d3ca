#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "antroute/protocol/messages.hpp"

namespace antroute::protocol {

// Wire frames, integers most-significant byte first:
//   Pheromone     [0x01][dir:1][seed:8][counter:1][fees:4][amount:4][ts:1]           20 bytes
//   Match         [0x02][dir:1][seed:8][id:8][counter:1][total_counter:1][F:4][ts:1] 25 bytes
//   Confirmation  [0x03][id:8][len:1][checks:8*len][ts:1]                            11 + 8*len
enum class MessageKind : std::uint8_t { pheromone = 0x01, match = 0x02, confirmation = 0x03 };

inline constexpr std::size_t kPheromoneFrameSize = 20;
inline constexpr std::size_t kMatchFrameSize = 25;
inline constexpr std::size_t kConfirmationFrameOverhead = 11;
inline constexpr std::size_t kMaxCheckListLength = 255;

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> encode(const PheromoneMessage& m);
std::vector<std::uint8_t> encode(const MatchMessage& m);
// Throws std::length_error if the check list exceeds 255 entries.
std::vector<std::uint8_t> encode(const ConfirmationMessage& m);
std::vector<std::uint8_t> encode(const Message& m);

std::size_t frame_size(const Message& m);
MessageKind kind_of(const Message& m);
const char* kind_name(MessageKind kind);

// Throws DecodeError on unknown kind, truncated or overlong input, or
// out-of-range fields.
Message decode(std::span<const std::uint8_t> frame);

}  // namespace antroute::protocol
