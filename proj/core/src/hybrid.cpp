#include "fsrpc/hybrid.hpp"

#include <string>

#include "fsrpc/error.hpp"

namespace fsrpc {

using gf2::u64;
using gf2::u128;

namespace {

// Forward-walk budget for segments whose cycle cannot be derived in closed
// form (non-primitive FSR feedback on a wide register).
constexpr u64 kWalkBudget = u64{1} << 24;
constexpr unsigned kExactWidth = 24;  // up to here Brent is always affordable

std::string seg_tag(std::size_t i) { return "segment " + std::to_string(i); }

}  // namespace

Hybrid::Hybrid(HybridSpec spec) : spec_(std::move(spec)) {
  if (spec_.segments.empty()) throw Error("hybrid: needs at least one segment");
  unsigned offset = 0;
  for (std::size_t i = 0; i < spec_.segments.size(); ++i) {
    const HybridSegment& hs = spec_.segments[i];
    Counter counter{hs.spec};
    const unsigned w = counter.width();
    if (offset + w > 64) throw Error("hybrid: total width above 64 bits");

    const bool is_fsr = std::holds_alternative<FsrSpec>(hs.spec);
    const u64 seed = hs.seed.value_or(is_fsr ? 1 : 0);
    CounterState seed_state(seed, w);
    if (seed_state.bits() != seed)
      throw Error("hybrid: " + seg_tag(i) + " seed wider than the segment");

    // Establish that the seed sits on a cycle and how long that cycle is.
    u64 cycle = 0;  // sentinel: 2^64 (radix-2 full width only)
    if (const auto* m = std::get_if<ModNSpec>(&hs.spec)) {
      if (seed >= m->modulus)
        throw Error("hybrid: " + seg_tag(i) + " seed " + std::to_string(seed) +
                    " not on a cycle (modulus " + std::to_string(m->modulus) + ")");
      cycle = m->modulus;
    } else if (std::holds_alternative<Radix2Spec>(hs.spec)) {
      cycle = w == 64 ? 0 : (u64{1} << w);
    } else if (seed == 0) {
      cycle = 1;  // the all-zero fixed point
    } else if (gf2::is_primitive(char_poly_of(std::get<FsrSpec>(hs.spec)))) {
      cycle = w == 64 ? ~u64{0} : (u64{1} << w) - 1;
    } else if (w <= kExactWidth) {
      CycleInfo info = counter.find_cycle(seed_state);
      if (info.tail_length != 0)
        throw Error("hybrid: " + seg_tag(i) + " seed not on a cycle (tail " +
                    std::to_string(info.tail_length) + ")");
      cycle = info.cycle_length;
    } else {
      u64 cur = counter.step_bits(seed);
      u64 count = 1;
      while (cur != seed && count < kWalkBudget) {
        cur = counter.step_bits(cur);
        ++count;
      }
      if (cur != seed)
        throw Error("hybrid: " + seg_tag(i) +
                    " cycle length undetermined within the iteration budget; "
                    "declare primitive feedback or use radix2");
      cycle = count;
    }

    // Resolve the carry value and pin it to the seed's cycle.
    u64 carry;
    if (hs.carry) {
      carry = *hs.carry;
      if (CounterState(carry, w).bits() != carry)
        throw Error("hybrid: " + seg_tag(i) + " carry wider than the segment");
      bool on_cycle;
      if (const auto* m = std::get_if<ModNSpec>(&hs.spec)) {
        on_cycle = carry < m->modulus;
      } else if (std::holds_alternative<Radix2Spec>(hs.spec)) {
        on_cycle = true;
      } else if (gf2::is_primitive(char_poly_of(std::get<FsrSpec>(hs.spec)))) {
        on_cycle = (seed == 0) ? carry == 0 : carry != 0;
      } else {
        // Small enough to have an exact cycle length by now; scan it.
        on_cycle = false;
        u64 cur = seed;
        for (u64 k = 0; k < cycle; ++k) {
          if (cur == carry) {
            on_cycle = true;
            break;
          }
          cur = counter.step_bits(cur);
        }
      }
      if (!on_cycle)
        throw Error("hybrid: " + seg_tag(i) + " carry value " + std::to_string(carry) +
                    " not on the seed's cycle");
    } else if (const auto* m = std::get_if<ModNSpec>(&hs.spec)) {
      carry = m->modulus - 1;
    } else if (std::holds_alternative<Radix2Spec>(hs.spec)) {
      carry = CounterState(~u64{0}, w).bits();  // all ones
    } else {
      // Last state before the seed comes around again.
      carry = cycle == 0 ? seed : counter.step_n(seed_state, cycle - 1).bits();
    }

    segs_.push_back(Seg{std::move(counter), offset, seed, carry, cycle});
    offset += w;
  }
  width_ = offset;
}

CounterState Hybrid::reset() const {
  u64 bits = 0;
  for (const Seg& s : segs_) bits |= s.seed << s.offset;
  return CounterState(bits, width_);
}

std::uint64_t Hybrid::step_bits(std::uint64_t state) const {
  u64 out = 0;
  bool advance = true;  // the lowest segment always steps
  for (const Seg& s : segs_) {
    const unsigned w = s.counter.width();
    const u64 mask = w == 64 ? ~u64{0} : (u64{1} << w) - 1;
    const u64 v = (state >> s.offset) & mask;
    const u64 nv = advance ? s.counter.step_bits(v) : v;
    advance = advance && v == s.carry;  // judged on the pre-step value
    out |= nv << s.offset;
  }
  return out;
}

CounterState Hybrid::step(CounterState s) const {
  if (s.width() != width_)
    throw Error("hybrid step: state width " + std::to_string(s.width()) +
                " does not match counter width " + std::to_string(width_));
  return CounterState(step_bits(s.bits()), width_);
}

CounterState Hybrid::step_n(CounterState s, std::uint64_t k) const {
  CounterState cur = s;
  u64 bits = cur.bits();
  for (u64 i = 0; i < k; ++i) bits = step_bits(bits);
  return CounterState(bits, width_);
}

std::uint64_t Hybrid::period() const {
  u128 p = 1;
  for (const Seg& s : segs_) {
    p *= s.cycle_length == 0 ? (u128(1) << 64) : u128(s.cycle_length);
    if (p > (u128(1) << 64)) throw Error("hybrid: period overflows 64 bits");
  }
  if (p > ~u64{0}) throw Error("hybrid: period 2^64 does not fit a 64-bit count");
  return static_cast<u64>(p);
}

bool Hybrid::period_at_least(std::uint64_t k) const {
  u128 p = 1;
  for (const Seg& s : segs_) {
    p *= s.cycle_length == 0 ? (u128(1) << 64) : u128(s.cycle_length);
    if (p >= k) return true;
  }
  return p >= k;
}

std::vector<AddressRange> Hybrid::skipped_lines() const {
  const Seg& top = segs_.back();
  if (!std::holds_alternative<FsrSpec>(spec_.segments.back().spec)) return {};
  if (top.seed == 0) return {};  // zero is on the (degenerate) cycle
  // A nonzero-seeded linear FSR can never reach the all-zero fixed point, so
  // the block of addresses whose high bits are zero is never fetched.
  return {AddressRange{0, u64{1} << top.offset}};
}

}  // namespace fsrpc
