#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "antroute/sim_time.hpp"

namespace antroute::protocol {

using NodeId = std::uint32_t;

enum class Direction : std::uint8_t { payer = 0, payee = 1 };

inline constexpr std::size_t index(Direction d) { return static_cast<std::size_t>(d); }
inline constexpr Direction conjugate(Direction d) {
  return d == Direction::payer ? Direction::payee : Direction::payer;
}

// (P, c, f, a, t)
struct PheromoneMessage {
  Direction direction = Direction::payer;
  std::uint64_t seed = 0;
  std::uint8_t counter = 0;
  std::uint32_t remaining_fees = 0;
  std::uint32_t amount = 0;
  std::uint8_t timestamp = 0;

  friend bool operator==(const PheromoneMessage&, const PheromoneMessage&) = default;
};

// (M, Id, c, C, F, t)
struct MatchMessage {
  Direction direction = Direction::payer;
  std::uint64_t seed = 0;
  std::uint64_t match_id = 0;
  std::uint8_t counter = 0;
  std::uint8_t total_counter = 0;  // modulo 256 on the wire
  std::uint32_t total_fees = 0;
  std::uint8_t timestamp = 0;

  friend bool operator==(const MatchMessage&, const MatchMessage&) = default;
};

// (Id, l, t). The same frame carries both the confirmation pass and the
// counter-check pass; a node tells them apart by whether it already holds a
// confirmation record for Id.
struct ConfirmationMessage {
  std::uint64_t match_id = 0;
  std::vector<std::uint64_t> checks;
  std::uint8_t timestamp = 0;

  friend bool operator==(const ConfirmationMessage&, const ConfirmationMessage&) = default;
};

using Message = std::variant<PheromoneMessage, MatchMessage, ConfirmationMessage>;

struct PaymentRequest {
  NodeId payer = 0;
  NodeId payee = 0;
  std::uint32_t amount = 0;
  std::uint32_t max_fees = 0;
  std::uint8_t counter_start = 64;  // c_0 in [64, 128)
  std::uint64_t seed = 0;
  SimTime start_time{0};
};

// Throws std::invalid_argument when a request field is out of range.
void validate(const PaymentRequest& request);

struct RouteCandidate {
  std::uint64_t match_id = 0;
  NodeId first_hop = 0;
  std::uint8_t total_counter = 0;
  std::uint32_t total_fees = 0;
  std::uint64_t fees_payable = 0;  // 2*f_max - F
  int intermediary_count = 0;      // C - 2*c_0 (mod 256)

  friend bool operator==(const RouteCandidate&, const RouteCandidate&) = default;
};

enum class SelectionPolicy {
  max_remaining_fees,     // cheapest route: largest F
  fewest_intermediaries,  // shortest route, then largest F
};

struct SelectionConfig {
  SelectionPolicy policy = SelectionPolicy::max_remaining_fees;
  int privacy_floor = 2;  // minimum intermediaries preferred; 0 disables
};

}  // namespace antroute::protocol
