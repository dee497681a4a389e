#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>

#include "fsrpc/fsr.hpp"

namespace fsrpc {

// Fixed-width bit-vector state. The width (1..64) is immutable; construction
// masks excess bits away. States of different widths never compare equal.
class CounterState {
public:
  CounterState(std::uint64_t bits, unsigned width);

  std::uint64_t bits() const { return bits_; }
  unsigned width() const { return width_; }

  friend bool operator==(const CounterState&, const CounterState&) = default;

private:
  std::uint64_t bits_;
  unsigned width_;
};

// Binary up-counter, s -> (s + 1) mod 2^width.
struct Radix2Spec {
  unsigned width = 0;
  friend bool operator==(const Radix2Spec&, const Radix2Spec&) = default;
};

// s -> (s + 1) mod n over 0..n-1; out-of-range states of the same bit width
// fold into the cycle after one step. Width is the narrowest that holds n-1.
struct ModNSpec {
  std::uint64_t modulus = 0;
  friend bool operator==(const ModNSpec&, const ModNSpec&) = default;
};

using CounterSpec = std::variant<Radix2Spec, ModNSpec, FsrSpec>;

unsigned spec_width(const CounterSpec& spec);
std::string to_string(const CounterSpec& spec);

struct CycleInfo {
  std::uint64_t tail_length = 0;   // steps before the orbit becomes periodic
  std::uint64_t cycle_length = 0;  // minimal period once it has
  CounterState cycle_entry;        // first state on the cycle
};

// A realized step function over one spec. All operations are pure; the class
// only precomputes the masks the hot paths need.
class Counter {
public:
  explicit Counter(CounterSpec spec);  // validates

  unsigned width() const { return width_; }
  const CounterSpec& spec() const { return spec_; }

  std::uint64_t step_bits(std::uint64_t state) const;
  CounterState step(CounterState s) const;
  CounterState step_n(CounterState s, std::uint64_t k) const;

  // s + b by repeated stepping semantics. Radix-2 and mod-n counters use
  // modular arithmetic; linear FSR counters above a small offset use GF(2)
  // matrix exponentiation. Bit-exact with step_n by construction.
  CounterState offset_add(CounterState s, std::uint64_t b) const;

  // Brent's cycle detection: tail length, minimal cycle length and the entry
  // state, in O(tail + cycle) steps and constant memory.
  CycleInfo find_cycle(CounterState start) const;

  struct CyclicCheck {
    bool cyclic = false;
    std::uint64_t n = 0;  // witness cycle length when cyclic
  };
  // True when the given states are closed under the step function and form a
  // single cycle visiting each exactly once. Duplicates collapse to the set.
  CyclicCheck is_n_cyclic(std::span<const CounterState> states) const;

  // The unique i in [0, n) with step^i(s0) == t, by forward iteration.
  // Throws when t is not reached ("not on cycle").
  std::uint64_t iso_index(CounterState s0, CounterState t, std::uint64_t n) const;

  // Transition matrix for the GF(2)-linear families; nullopt for radix-2 and
  // mod-n counters, whose increment is not linear over GF(2).
  std::optional<gf2::Matrix> transition() const;

private:
  void check_width(const CounterState& s, const char* op) const;

  CounterSpec spec_;
  unsigned width_;
  std::uint64_t mask_;
  enum class Kind { Radix2, ModN, Fibonacci, Galois, Ring, Ca } kind_;
  std::uint64_t modulus_ = 0;
  std::uint64_t fib_taps_ = 0;
  std::uint64_t galois_taps_ = 0;
  std::uint64_t rule150_ = 0;
  std::vector<FsrConnection> conns_;
};

// fsr-families entry point: a spec compiled into its counter.
inline Counter build_counter(const FsrSpec& spec) { return Counter(CounterSpec(spec)); }

}  // namespace fsrpc
