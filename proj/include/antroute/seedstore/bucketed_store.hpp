#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <vector>

#include "antroute/seedstore/avl_tree.hpp"
#include "antroute/sim_time.hpp"

namespace antroute::seedstore {

enum class StoreStatus {
  found,
  absent,
  inserted,
  already_present,
  updated,
  stale,  // timestamp outside the live window; the caller discards the seed
};

template <typename Record>
struct Found {
  StoreStatus status = StoreStatus::absent;
  Record* record = nullptr;

  explicit operator bool() const noexcept { return record != nullptr; }
  bool stale() const noexcept { return status == StoreStatus::stale; }
};

// Forest of k+1 AVL trees, one per 0.1 s timestamp slot, k = lifetime / 0.1 s.
//
// Bucket i holds records whose timestamp lies in
// [epoch_start + i*0.1, epoch_start + (i+1)*0.1). Timestamps outside
// [epoch_start, epoch_start + (k+1)*0.1) are stale. rotate() drops the oldest
// tree wholesale and opens a fresh one until `now` is back inside the window.
template <typename Record>
class BucketedStore {
 public:
  explicit BucketedStore(SimTime lifetime = 2s, SimTime epoch_start = SimTime{0})
      : lifetime_(lifetime), epoch_start_(epoch_start) {
    if (lifetime <= SimTime{0} || lifetime % kBucketWidth != SimTime{0}) {
      throw std::invalid_argument("seed lifetime must be a positive multiple of 0.1 s");
    }
    buckets_.resize(static_cast<std::size_t>(lifetime / kBucketWidth) + 1);
  }

  std::size_t bucket_count() const noexcept { return buckets_.size(); }
  SimTime lifetime() const noexcept { return lifetime_; }
  SimTime epoch_start() const noexcept { return epoch_start_; }
  SimTime window_end() const noexcept {
    return epoch_start_ + kBucketWidth * static_cast<std::int64_t>(buckets_.size());
  }

  bool is_live(SimTime timestamp) const noexcept {
    return timestamp >= epoch_start_ && timestamp < window_end();
  }

  std::optional<std::size_t> bucket_index(SimTime timestamp) const noexcept {
    if (!is_live(timestamp)) return std::nullopt;
    return static_cast<std::size_t>((timestamp - epoch_start_) / kBucketWidth);
  }

  Found<const Record> lookup(std::uint64_t key, SimTime timestamp) const {
    const auto idx = bucket_index(timestamp);
    if (!idx) return {StoreStatus::stale, nullptr};
    const Record* r = buckets_[*idx].find(key);
    return {r != nullptr ? StoreStatus::found : StoreStatus::absent, r};
  }

  StoreStatus insert(std::uint64_t key, Record record, SimTime timestamp) {
    const auto idx = bucket_index(timestamp);
    if (!idx) return StoreStatus::stale;
    return buckets_[*idx].insert(key, std::move(record)) ? StoreStatus::inserted
                                                         : StoreStatus::already_present;
  }

  // mutator(Record&) edits the stored record in place; tree shape is unchanged.
  template <typename Mutator>
  StoreStatus update(std::uint64_t key, SimTime timestamp, Mutator&& mutator) {
    const auto idx = bucket_index(timestamp);
    if (!idx) return StoreStatus::stale;
    Record* r = buckets_[*idx].find(key);
    if (r == nullptr) return StoreStatus::absent;
    mutator(*r);
    return StoreStatus::updated;
  }

  // Expires buckets until `now` falls inside the live window. Returns the
  // number of records destroyed.
  std::size_t rotate(SimTime now) {
    if (now < window_end()) return 0;
    const auto steps = (now - window_end()) / kBucketWidth + 1;
    std::size_t expired = 0;
    if (steps >= static_cast<std::int64_t>(buckets_.size())) {
      for (auto& tree : buckets_) {
        expired += tree.size();
        tree.clear();
      }
    } else {
      for (std::int64_t i = 0; i < steps; ++i) {
        expired += buckets_.front().size();
        buckets_.pop_front();
        buckets_.emplace_back();
      }
    }
    epoch_start_ += kBucketWidth * steps;
    return expired;
  }

  std::vector<std::size_t> bucket_sizes() const {
    std::vector<std::size_t> sizes;
    sizes.reserve(buckets_.size());
    for (const auto& tree : buckets_) sizes.push_back(tree.size());
    return sizes;
  }

  std::size_t size() const noexcept {
    std::size_t total = 0;
    for (const auto& tree : buckets_) total += tree.size();
    return total;
  }

  const AvlTree<Record>& bucket(std::size_t i) const { return buckets_.at(i); }

  bool check_invariants() const {
    for (const auto& tree : buckets_) {
      if (!tree.check_invariants()) return false;
    }
    return true;
  }

 private:
  SimTime lifetime_;
  SimTime epoch_start_;
  std::deque<AvlTree<Record>> buckets_;
};

}  // namespace antroute::seedstore
