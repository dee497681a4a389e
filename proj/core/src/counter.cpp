#include "fsrpc/counter.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>
#include <unordered_set>

#include "fsrpc/error.hpp"

namespace fsrpc {

using gf2::u64;

namespace {

u64 width_mask(unsigned w) { return w == 64 ? ~u64{0} : (u64{1} << w) - 1; }

unsigned modn_width(u64 n) {
  unsigned w = n > 1 ? static_cast<unsigned>(std::bit_width(n - 1)) : 1;
  return w;
}

}  // namespace

CounterState::CounterState(std::uint64_t bits, unsigned width) : width_(width) {
  if (width < 1 || width > 64) throw Error("state width must be in [1, 64]");
  bits_ = bits & width_mask(width);
}

unsigned spec_width(const CounterSpec& spec) {
  return std::visit(
      [](const auto& s) -> unsigned {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Radix2Spec>) return s.width;
        else if constexpr (std::is_same_v<T, ModNSpec>) return modn_width(s.modulus);
        else return s.width;
      },
      spec);
}

std::string to_string(const CounterSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Radix2Spec>)
          return "family=radix2 width=" + std::to_string(s.width);
        else if constexpr (std::is_same_v<T, ModNSpec>)
          return "family=modn n=" + std::to_string(s.modulus);
        else
          return to_string(s);
      },
      spec);
}

Counter::Counter(CounterSpec spec) : spec_(std::move(spec)) {
  if (const auto* r = std::get_if<Radix2Spec>(&spec_)) {
    if (r->width < 1 || r->width > 64) throw Error("radix2: width must be in [1, 64]");
    kind_ = Kind::Radix2;
    width_ = r->width;
  } else if (const auto* m = std::get_if<ModNSpec>(&spec_)) {
    if (m->modulus == 0) throw Error("modn: modulus must be >= 1");
    kind_ = Kind::ModN;
    modulus_ = m->modulus;
    width_ = modn_width(modulus_);
  } else {
    const FsrSpec& f = std::get<FsrSpec>(spec_);
    validate(f);
    width_ = f.width;
    switch (f.family) {
      case FsrFamily::Fibonacci:
        kind_ = Kind::Fibonacci;
        for (unsigned t : f.taps) fib_taps_ |= u64{1} << t;
        break;
      case FsrFamily::Galois:
        kind_ = Kind::Galois;
        for (unsigned t : f.taps) galois_taps_ |= u64{1} << t;
        break;
      case FsrFamily::RingGenerator:
      case FsrFamily::Mfsr:
        kind_ = Kind::Ring;
        conns_ = f.conns;
        break;
      case FsrFamily::CellularAutomaton:
        kind_ = Kind::Ca;
        rule150_ = f.rule150_mask;
        break;
    }
  }
  mask_ = width_mask(width_);
}

std::uint64_t Counter::step_bits(std::uint64_t state) const {
  state &= mask_;
  switch (kind_) {
    case Kind::Radix2:
      return (state + 1) & mask_;
    case Kind::ModN:
      // (state + 1) mod n, written so state = 2^64-1 cannot overflow first.
      if (state >= modulus_ - 1) return (state - (modulus_ - 1)) % modulus_;
      return state + 1;
    case Kind::Fibonacci: {
      u64 fb = static_cast<u64>(std::popcount(state & fib_taps_) & 1);
      return ((state >> 1) | (fb << (width_ - 1))) & mask_;
    }
    case Kind::Galois: {
      u64 next = state >> 1;
      if (state & 1) next ^= galois_taps_;
      return next & mask_;
    }
    case Kind::Ring: {
      u64 next = (state >> 1) | ((state & 1) << (width_ - 1));
      for (const auto& c : conns_) next ^= ((state >> c.source) & 1) << c.dest;
      return next & mask_;
    }
    case Kind::Ca:
      return ((state << 1) ^ (state >> 1) ^ (state & rule150_)) & mask_;
  }
  return 0;
}

void Counter::check_width(const CounterState& s, const char* op) const {
  if (s.width() != width_)
    throw Error(std::string(op) + ": state width " + std::to_string(s.width()) +
                " does not match counter width " + std::to_string(width_));
}

CounterState Counter::step(CounterState s) const {
  check_width(s, "step");
  return CounterState(step_bits(s.bits()), width_);
}

CounterState Counter::step_n(CounterState s, std::uint64_t k) const {
  check_width(s, "step_n");
  u64 bits = s.bits();
  for (u64 i = 0; i < k; ++i) bits = step_bits(bits);
  return CounterState(bits, width_);
}

CounterState Counter::offset_add(CounterState s, std::uint64_t b) const {
  check_width(s, "offset_add");
  if (b == 0) return s;
  switch (kind_) {
    case Kind::Radix2:
      return CounterState((s.bits() + b) & mask_, width_);
    case Kind::ModN: {
      // (s + b) mod n. v + add < 2n, so one subtract is enough; the second
      // disjunct catches the u64 wrap when n is close to 2^64.
      u64 v = s.bits() % modulus_;
      u64 add = b % modulus_;
      u64 sum = v + add;
      u64 next = (sum >= modulus_ || sum < v) ? sum - modulus_ : sum;
      return CounterState(next, width_);
    }
    default: {
      if (b < 64) return step_n(s, b);  // cheaper than assembling M^b
      gf2::Matrix m = transition_matrix(std::get<FsrSpec>(spec_));
      return CounterState(m.pow(b).apply(s.bits()), width_);
    }
  }
}

CycleInfo Counter::find_cycle(CounterState start) const {
  check_width(start, "find_cycle");
  const u64 x0 = start.bits();

  // Brent: find the cycle length with power-of-two teleports, then the tail.
  u64 power = 1, lambda = 1;
  u64 tortoise = x0;
  u64 hare = step_bits(x0);
  while (tortoise != hare) {
    if (power == lambda) {
      tortoise = hare;
      power <<= 1;
      lambda = 0;
    }
    hare = step_bits(hare);
    ++lambda;
  }

  u64 mu = 0;
  tortoise = x0;
  hare = x0;
  for (u64 i = 0; i < lambda; ++i) hare = step_bits(hare);
  while (tortoise != hare) {
    tortoise = step_bits(tortoise);
    hare = step_bits(hare);
    ++mu;
  }

  return CycleInfo{mu, lambda, CounterState(tortoise, width_)};
}

Counter::CyclicCheck Counter::is_n_cyclic(std::span<const CounterState> states) const {
  if (states.empty()) throw Error("is_n_cyclic: empty state set");
  std::unordered_set<u64> set;
  for (const auto& s : states) {
    check_width(s, "is_n_cyclic");
    set.insert(s.bits());
  }
  const u64 n = set.size();
  u64 cur = states.front().bits();
  std::unordered_set<u64> visited;
  for (u64 i = 0; i < n; ++i) {
    if (!set.contains(cur)) return {false, 0};  // left the set: not closed
    if (!visited.insert(cur).second) return {false, 0};  // early repeat
    cur = step_bits(cur);
  }
  if (cur != states.front().bits()) return {false, 0};
  return {true, n};
}

std::uint64_t Counter::iso_index(CounterState s0, CounterState t, std::uint64_t n) const {
  check_width(s0, "iso_index");
  check_width(t, "iso_index");
  u64 cur = s0.bits();
  for (u64 i = 0; i < n; ++i) {
    if (cur == t.bits()) return i;
    cur = step_bits(cur);
  }
  throw Error("iso_index: target state not on cycle within " + std::to_string(n) +
              " steps");
}

std::optional<gf2::Matrix> Counter::transition() const {
  if (const auto* f = std::get_if<FsrSpec>(&spec_)) return transition_matrix(*f);
  return std::nullopt;
}

}  // namespace fsrpc
