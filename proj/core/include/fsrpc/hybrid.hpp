#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fsrpc/counter.hpp"

namespace fsrpc {

// One stage of a concatenated counter. `seed` is the stage's reset value and
// `carry` the value at which it signals the next stage to advance. Defaults:
// radix-2 and mod-n stages seed at 0 and carry at their last value; FSR
// stages seed at 1 and carry at the last state before the seed on its cycle.
struct HybridSegment {
  CounterSpec spec;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> carry;
};

// Segments ordered low to high; segment 0 occupies the least-significant
// address bits and always steps, segment k+1 steps exactly when every lower
// segment sits at its carry value.
struct HybridSpec {
  std::vector<HybridSegment> segments;
};

struct AddressRange {
  std::uint64_t first = 0;
  std::uint64_t count = 0;
  friend bool operator==(const AddressRange&, const AddressRange&) = default;
};

// A validated, ready-to-step concatenated program counter. Validation checks
// that the total width fits 64 bits, that every seed lies on a cycle of its
// segment, and that every carry value lies on the same cycle as the seed.
class Hybrid {
public:
  explicit Hybrid(HybridSpec spec);

  unsigned width() const { return width_; }
  std::size_t segment_count() const { return segs_.size(); }
  const Counter& segment(std::size_t i) const { return segs_[i].counter; }
  unsigned segment_offset(std::size_t i) const { return segs_[i].offset; }
  unsigned segment_width(std::size_t i) const { return segs_[i].counter.width(); }
  std::uint64_t segment_seed(std::size_t i) const { return segs_[i].seed; }
  std::uint64_t segment_carry(std::size_t i) const { return segs_[i].carry; }
  // Cycle length of segment i's seed; 0 encodes 2^64 (full-width radix-2).
  std::uint64_t segment_cycle(std::size_t i) const { return segs_[i].cycle_length; }
  const HybridSpec& spec() const { return spec_; }

  CounterState reset() const;  // concatenated segment seeds

  std::uint64_t step_bits(std::uint64_t state) const;
  CounterState step(CounterState s) const;
  CounterState step_n(CounterState s, std::uint64_t k) const;

  // Product of the segment cycle lengths. Throws in the single corner where
  // the product is exactly 2^64 (an all-radix-2 64-bit counter); use
  // period_at_least for capacity checks that must cover that case.
  std::uint64_t period() const;
  bool period_at_least(std::uint64_t k) const;

  // Address ranges never fetched from because the top segment is an FSR that
  // cannot reach its zero state: one aligned block of 2^(low widths) lines.
  // Empty when the top segment is radix-2/mod-n or visits zero anyway.
  std::vector<AddressRange> skipped_lines() const;

private:
  struct Seg {
    Counter counter;
    unsigned offset;
    std::uint64_t seed;
    std::uint64_t carry;
    std::uint64_t cycle_length;
  };

  HybridSpec spec_;
  std::vector<Seg> segs_;
  unsigned width_ = 0;
};

}  // namespace fsrpc
