#pragma once

#include <array>
#include <cstdint>

namespace antroute::seedstore {

// Per-node local index of a neighbor. 0 means "self / none".
using NeighborSlot = std::uint8_t;
inline constexpr NeighborSlot kSelf = 0;

// One direction of a pheromone seed as seen by this node. Fields other than
// `present` stay zero until that direction has been received.
struct PheromoneSide {
  bool present = false;
  std::uint8_t counter = 0;
  std::uint32_t fees = 0;  // remaining fees as received (own fee not yet deducted)
  NeighborSlot sender = kSelf;

  friend bool operator==(const PheromoneSide&, const PheromoneSide&) = default;
};

// Both directions of a seed share one tree node keyed by the seed S.
// sides[0] is P(0) (payer side), sides[1] is P(1) (payee side).
struct PheromoneEntry {
  std::uint64_t seed = 0;
  std::uint32_t amount = 0;
  std::array<PheromoneSide, 2> sides{};

  friend bool operator==(const PheromoneEntry&, const PheromoneEntry&) = default;
};

struct MatchEntry {
  std::uint64_t match_id = 0;
  NeighborSlot target = kSelf;

  friend bool operator==(const MatchEntry&, const MatchEntry&) = default;
};

// Payer-only: a route candidate delivered to the originator.
struct SpecialMatchEntry {
  std::uint64_t match_id = 0;
  NeighborSlot target = kSelf;
  std::uint8_t total_counter = 0;
  std::uint32_t total_fees = 0;

  friend bool operator==(const SpecialMatchEntry&, const SpecialMatchEntry&) = default;
};

struct ConfirmationEntry {
  std::uint64_t match_id = 0;
  NeighborSlot target = kSelf;
  std::uint64_t check = 0;

  friend bool operator==(const ConfirmationEntry&, const ConfirmationEntry&) = default;
};

// Per-node byte accounting used by the memory model (one direction per
// pheromone record, 8-byte child pointers).
inline constexpr int kPheromoneRecordBytes = 8 + 1 + 4 + 4 + 1 + 16;
inline constexpr int kMatchRecordBytes = 8 + 1 + 16;
inline constexpr int kConfirmationRecordBytes = 8 + 1 + 16 + 8;
static_assert(kPheromoneRecordBytes == 34);
static_assert(kMatchRecordBytes == 25);
static_assert(kConfirmationRecordBytes == 33);

}  // namespace antroute::seedstore
