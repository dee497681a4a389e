#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fsrpc/gf2.hpp"

namespace fsrpc {

enum class FsrFamily { Fibonacci, Galois, RingGenerator, Mfsr, CellularAutomaton };

std::string_view family_name(FsrFamily f);
std::optional<FsrFamily> family_from_name(std::string_view name);

// One XOR feedback connection on a ring-shaped register: the output of
// `source` is XORed into the input of `dest`.
struct FsrConnection {
  unsigned source = 0;
  unsigned dest = 0;
  friend bool operator==(const FsrConnection&, const FsrConnection&) = default;
  friend auto operator<=>(const FsrConnection&, const FsrConnection&) = default;
};

// Declarative description of one shift-register counter. Register bits are
// numbered b_{W-1}..b_0 and a step shifts toward b_0. Feedback encoding:
//   Fibonacci  taps: register indices whose outputs XOR into the new b_{W-1}.
//              The characteristic polynomial is x^W + sum of x^t over taps.
//   Galois     taps: register inputs that XOR with the b_0 output as it
//              recirculates (tap W-1 is the plain wrap into the top bit).
//   Ring/Mfsr  conns: ring topology b_i <- b_{(i+1) mod W} plus XOR
//              connections, fan-in and fan-out capped at 2 per register.
//   CellularAutomaton  rule150_mask: cell i reads its neighbours (null
//              boundary) plus itself when bit i is set (rule 150 vs 90).
struct FsrSpec {
  FsrFamily family = FsrFamily::Fibonacci;
  unsigned width = 0;
  std::vector<unsigned> taps;
  std::vector<FsrConnection> conns;
  std::uint64_t rule150_mask = 0;

  friend bool operator==(const FsrSpec&, const FsrSpec&) = default;
};

// Throws Error on bad indices, duplicate taps, fan-in/fan-out violations for
// the ring-shaped families, or fields that do not belong to the family.
void validate(const FsrSpec& spec);

// One step of the register update. `state` uses bit i for register b_i and
// must already be masked to `spec.width` bits; the result is masked too.
std::uint64_t fsr_step(const FsrSpec& spec, std::uint64_t state);

// M with fsr_step(spec, s) == M*s for every state s.
gf2::Matrix transition_matrix(const FsrSpec& spec);
gf2::Poly char_poly_of(const FsrSpec& spec);

// Gate-level cost summary. xor_gate_count counts XOR networks at LUT
// granularity (a Fibonacci feedback tree is one gate no matter how many taps
// feed it); raw_xor2_count is the same logic decomposed into 2-input XORs.
struct StructuralMetrics {
  unsigned xor_gate_count = 0;
  unsigned raw_xor2_count = 0;
  unsigned max_fan_in = 0;
  unsigned max_fan_out = 0;
  // 2-input XOR levels on the deepest register-to-register path; a plain
  // shift still counts one register-to-register level.
  unsigned max_gate_depth = 0;
};
StructuralMetrics metrics(const FsrSpec& spec);

// Constructors from a characteristic polynomial (monic, degree = width).
FsrSpec fibonacci_from_poly(gf2::Poly p);
FsrSpec galois_from_poly(gf2::Poly p);
// Places one ring connection per middle term of p, spreading sources so both
// fan-in and fan-out stay at 2, then verifies the characteristic polynomial
// really is p (connection spans can interact). nullopt when no placement in
// the search budget works.
std::optional<FsrSpec> ring_from_poly(gf2::Poly p);

struct SearchBudget {
  std::uint64_t max_candidates = 2'000'000;
};

// Deterministic search for maximal-cycle specs of one family: candidates are
// enumerated smallest-feedback-first (tap or connection count, then
// lexicographic), tested with is_primitive(char_poly), and for width <= 16
// additionally verified by walking the full cycle. Returns up to max_results
// specs in discovery order; empty when the budget runs out first.
// Width must be in [2, 64].
std::vector<FsrSpec> find_maximal(FsrFamily family, unsigned width,
                                  std::size_t max_results,
                                  SearchBudget budget = {});

// "family=mfsr width=8 conns=[(7,0),(5,3)]" form, round-trippable.
std::string to_string(const FsrSpec& spec);

}  // namespace fsrpc
