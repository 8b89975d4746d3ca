#pragma once

#include <chrono>
#include <cstdint>

namespace antroute {

// Simulation clock. Integer microseconds keep every run bit-reproducible.
using SimTime = std::chrono::microseconds;

using namespace std::chrono_literals;

inline constexpr SimTime kBucketWidth = 100ms;

// Number of 0.1 s timestamp slots before the 1-byte wire timestamp wraps (20 s).
inline constexpr std::int64_t kTimestampModulus = 200;

inline constexpr double to_seconds(SimTime t) {
  return std::chrono::duration<double>(t).count();
}

inline SimTime from_seconds(double seconds) {
  return std::chrono::round<SimTime>(std::chrono::duration<double>(seconds));
}

// Floor of t in 0.1 s units (t may be negative).
inline constexpr std::int64_t bucket_units(SimTime t) {
  const auto w = kBucketWidth.count();
  const auto v = t.count();
  return v >= 0 ? v / w : -((-v + w - 1) / w);
}

// Wire timestamp: 0.1 s units modulo 20 s.
inline constexpr std::uint8_t encode_timestamp(SimTime t) {
  auto units = bucket_units(t) % kTimestampModulus;
  if (units < 0) units += kTimestampModulus;
  return static_cast<std::uint8_t>(units);
}

// Inverse of encode_timestamp: the start of the most recent 0.1 s slot at or
// before `now` whose wire value is `stamp`.
inline constexpr SimTime resolve_timestamp(std::uint8_t stamp, SimTime now) {
  const auto now_units = bucket_units(now);
  auto delta = (now_units - static_cast<std::int64_t>(stamp)) % kTimestampModulus;
  if (delta < 0) delta += kTimestampModulus;
  return kBucketWidth * (now_units - delta);
}

}  // namespace antroute
