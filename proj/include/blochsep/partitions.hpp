#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "bounds.hpp"
#include "errors.hpp"
#include "quantum_state.hpp"
#include "types.hpp"

namespace blochsep {

/// Multiset of block sizes (k_1 <= ... <= k_m) summing to n.
class PartitionShape {
 public:
  explicit PartitionShape(std::vector<int> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw DomainError("partition shape needs at least one block");
    for (int k : parts_)
      if (k < 1) throw DomainError("block sizes must be positive");
    std::sort(parts_.begin(), parts_.end());
  }

  const std::vector<int>& parts() const noexcept { return parts_; }
  std::size_t blocks() const noexcept { return parts_.size(); }
  int total() const {
    int s = 0;
    for (int k : parts_) s += k;
    return s;
  }
  /// The single-block shape (n); reported but never a separability class.
  bool is_baseline() const noexcept { return parts_.size() == 1; }

  /// Block size -> number of blocks of that size.
  std::map<int, int> multiplicities() const {
    std::map<int, int> out;
    for (int k : parts_) ++out[k];
    return out;
  }

  /// "(1,2,2)"
  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(parts_[i]);
    }
    return s + ")";
  }

  friend bool operator==(const PartitionShape& a, const PartitionShape& b) = default;

 private:
  std::vector<int> parts_;
};

/// Integer partitions of n with at least two parts, ordered by part count
/// descending, then lexicographically. The baseline (n) is appended on request.
inline std::vector<PartitionShape> enumerate_shapes(int n, bool include_baseline = false) {
  if (n < 2) throw DomainError("shape enumeration needs n >= 2");
  std::vector<std::vector<int>> all;
  std::vector<int> current;
  std::function<void(int, int)> grow = [&](int remaining, int min_part) {
    if (remaining == 0) {
      all.push_back(current);
      return;
    }
    for (int k = min_part; k <= remaining; ++k) {
      current.push_back(k);
      grow(remaining - k, k);
      current.pop_back();
    }
  };
  grow(n, 1);
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a < b;
  });
  std::vector<PartitionShape> out;
  for (auto& p : all)
    if (p.size() >= 2 || include_baseline) out.emplace_back(std::move(p));
  return out;
}

/// Concrete assignment of the parties {0..n-1} to disjoint blocks.
/// Blocks are kept sorted by (size, members).
class Partition {
 public:
  Partition(std::vector<PartySet> blocks, const DimsProfile& profile)
      : blocks_(std::move(blocks)), shape_({1}) {
    std::vector<int> seen(profile.parties(), 0);
    std::vector<int> sizes;
    for (auto& b : blocks_) {
      if (b.empty()) throw DomainError("partition blocks must be nonempty");
      std::sort(b.begin(), b.end());
      for (std::size_t p : b) {
        if (p >= profile.parties()) throw DomainError("party index out of range");
        if (seen[p]++) throw DomainError("partition blocks overlap");
      }
      sizes.push_back(static_cast<int>(b.size()));
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
      throw DomainError("partition blocks do not cover all parties");
    std::sort(blocks_.begin(), blocks_.end(), [](const PartySet& a, const PartySet& b) {
      if (a.size() != b.size()) return a.size() < b.size();
      return a < b;
    });
    shape_ = PartitionShape(std::move(sizes));
    for (const auto& b : blocks_) {
      std::vector<int> dims;
      for (std::size_t p : b) dims.push_back(profile.dim(p));
      std::sort(dims.begin(), dims.end());
      block_dims_.push_back(std::move(dims));
    }
  }

  const std::vector<PartySet>& blocks() const noexcept { return blocks_; }
  const PartitionShape& shape() const noexcept { return shape_; }
  /// Per block, the ascending local dimensions.
  const std::vector<std::vector<int>>& block_dims() const noexcept { return block_dims_; }

  /// "{1}{2,3}{4,5}" with 1-based labels; `labels[i]` relabels internal party i.
  /// Relabelled blocks are re-sorted by (size, members).
  std::string to_string(const std::vector<std::size_t>* labels = nullptr) const {
    std::vector<PartySet> shown;
    for (const auto& b : blocks_) {
      PartySet members;
      for (std::size_t p : b) members.push_back(labels ? (*labels)[p] : p);
      std::sort(members.begin(), members.end());
      shown.push_back(std::move(members));
    }
    std::sort(shown.begin(), shown.end(), [](const PartySet& a, const PartySet& b) {
      if (a.size() != b.size()) return a.size() < b.size();
      return a < b;
    });
    std::string s;
    for (const auto& members : shown) {
      s += '{';
      for (std::size_t i = 0; i < members.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(members[i] + 1);
      }
      s += '}';
    }
    return s;
  }

 private:
  std::vector<PartySet> blocks_;
  PartitionShape shape_;
  std::vector<std::vector<int>> block_dims_;
};

/// Every set partition of the parties whose block sizes match `shape`,
/// each listed once, in ascending order of the block lists.
inline std::vector<Partition> enumerate_assignments(const PartitionShape& shape,
                                                    const DimsProfile& profile) {
  const auto n = profile.parties();
  if (static_cast<std::size_t>(shape.total()) != n)
    throw DomainError("shape " + shape.to_string() + " does not sum to the party count");

  std::map<int, int> remaining = shape.multiplicities();
  std::vector<bool> used(n, false);
  std::vector<PartySet> blocks;
  std::vector<std::vector<PartySet>> found;

  // The block holding the smallest unassigned party is chosen first, so each
  // set partition is produced exactly once.
  std::function<void()> place = [&]() {
    std::size_t first = 0;
    while (first < n && used[first]) ++first;
    if (first == n) {
      found.push_back(blocks);
      return;
    }
    std::vector<std::size_t> pool;
    for (std::size_t p = first + 1; p < n; ++p)
      if (!used[p]) pool.push_back(p);
    for (auto& [size, count] : remaining) {
      if (count == 0) continue;
      const auto need = static_cast<std::size_t>(size - 1);
      if (need > pool.size()) continue;
      --count;
      PartySet block{first};
      std::function<void(std::size_t)> choose = [&](std::size_t from) {
        if (block.size() == need + 1) {
          for (std::size_t p : block) used[p] = true;
          blocks.push_back(block);
          place();
          blocks.pop_back();
          for (std::size_t p : block) used[p] = false;
          return;
        }
        for (std::size_t i = from; i + (need + 1 - block.size()) <= pool.size(); ++i) {
          block.push_back(pool[i]);
          choose(i + 1);
          block.pop_back();
        }
      };
      choose(0);
      ++count;
    }
  };
  place();

  std::vector<Partition> out;
  out.reserve(found.size());
  for (auto& b : found) out.emplace_back(std::move(b), profile);
  std::sort(out.begin(), out.end(),
            [](const Partition& a, const Partition& b) { return a.blocks() < b.blocks(); });
  return out;
}

/// Parties 0..k_1-1 form block 1, the next k_2 parties block 2, and so on.
inline Partition contiguous_partition(const PartitionShape& shape, const DimsProfile& profile) {
  if (static_cast<std::size_t>(shape.total()) != profile.parties())
    throw DomainError("shape " + shape.to_string() + " does not sum to the party count");
  std::vector<PartySet> blocks;
  std::size_t next = 0;
  for (int k : shape.parts()) {
    PartySet b;
    for (int i = 0; i < k; ++i) b.push_back(next++);
    blocks.push_back(std::move(b));
  }
  return Partition(std::move(blocks), profile);
}

struct BlockCheck {
  PartySet block;
  std::vector<int> dims;
  bool ok = true;
};

/// Blocks of size >= 3 pass when their largest dimension is at most the
/// product of the other dimensions; smaller blocks always pass.
inline std::vector<BlockCheck> check_block_constraints(const Partition& partition) {
  std::vector<BlockCheck> out;
  for (std::size_t i = 0; i < partition.blocks().size(); ++i) {
    const auto& dims = partition.block_dims()[i];
    out.push_back({partition.blocks()[i], dims, block_constraint_ok(dims)});
  }
  return out;
}

inline bool block_constraints_hold(const Partition& partition) {
  for (const auto& c : check_block_constraints(partition))
    if (!c.ok) return false;
  return true;
}

}  // namespace blochsep
