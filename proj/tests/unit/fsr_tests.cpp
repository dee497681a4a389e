#include <doctest.h>

#include <random>

#include "fsrpc/counter.hpp"
#include "fsrpc/error.hpp"
#include "fsrpc/fsr.hpp"
#include "oracles.hpp"

using fsrpc::FsrConnection;
using fsrpc::FsrFamily;
using fsrpc::FsrSpec;
namespace gf2 = fsrpc::gf2;
using u64 = std::uint64_t;

namespace {

// The five pinned 8-bit reference configurations, one per family.
FsrSpec fib8() { return {FsrFamily::Fibonacci, 8, {0, 1, 2, 7}, {}, 0}; }
FsrSpec gal8() { return {FsrFamily::Galois, 8, {0, 1, 6, 7}, {}, 0}; }
FsrSpec ring8() {
  return {FsrFamily::RingGenerator, 8, {}, {{0, 6}, {2, 7}, {3, 3}}, 0};
}
FsrSpec mfsr8() { return {FsrFamily::Mfsr, 8, {}, {{0, 0}, {1, 5}}, 0}; }
FsrSpec ca8() { return {FsrFamily::CellularAutomaton, 8, {}, {}, 0x93}; }

// True iff the orbit of state 1 visits every nonzero state exactly once.
bool walks_full_cycle(const FsrSpec& spec) {
  const u64 period = (spec.width == 64) ? ~u64{0} : (u64{1} << spec.width) - 1;
  u64 s = 1;
  for (u64 i = 0; i < period; ++i) {
    s = fsrpc::fsr_step(spec, s);
    if (s == 1) return i + 1 == period;
  }
  return false;
}

}  // namespace

TEST_CASE("family names round trip") {
  for (FsrFamily f :
       {FsrFamily::Fibonacci, FsrFamily::Galois, FsrFamily::RingGenerator,
        FsrFamily::Mfsr, FsrFamily::CellularAutomaton})
    CHECK(fsrpc::family_from_name(fsrpc::family_name(f)) == f);
  CHECK_FALSE(fsrpc::family_from_name("radix2").has_value());
  CHECK_FALSE(fsrpc::family_from_name("").has_value());
}

TEST_CASE("validate rejects out-of-family fields and fan violations") {
  CHECK_THROWS_AS(fsrpc::validate({FsrFamily::Fibonacci, 4, {4}, {}, 0}),
                  fsrpc::Error);  // tap out of range
  CHECK_THROWS_AS(fsrpc::validate({FsrFamily::Fibonacci, 4, {1, 1}, {}, 0}),
                  fsrpc::Error);  // duplicate tap
  CHECK_THROWS_AS(fsrpc::validate({FsrFamily::Fibonacci, 65, {0}, {}, 0}),
                  fsrpc::Error);
  CHECK_THROWS_AS(
      fsrpc::validate({FsrFamily::Fibonacci, 4, {0}, {{0, 1}}, 0}),
      fsrpc::Error);  // conns on a tap family
  CHECK_THROWS_AS(
      fsrpc::validate({FsrFamily::Mfsr, 4, {}, {{0, 3}, {1, 3}}, 0}),
      fsrpc::Error);  // two feeds into register 3
  CHECK_THROWS_AS(
      fsrpc::validate({FsrFamily::Mfsr, 4, {}, {{2, 0}, {2, 1}}, 0}),
      fsrpc::Error);  // register 2 driving two XORs
  CHECK_THROWS_AS(
      fsrpc::validate({FsrFamily::CellularAutomaton, 4, {}, {}, 0x10}),
      fsrpc::Error);  // rule mask wider than the array
  CHECK_NOTHROW(fsrpc::validate(mfsr8()));
  CHECK_NOTHROW(fsrpc::validate(ca8()));
}

TEST_CASE("single steps worked by hand, one per family") {
  // Width-4 members with feedback small enough to trace on paper.
  const FsrSpec fib{FsrFamily::Fibonacci, 4, {0, 3}, {}, 0};
  CHECK(fsrpc::fsr_step(fib, 0b0001) == 0b1000);
  CHECK(fsrpc::fsr_step(fib, 0b1000) == 0b1100);
  CHECK(fsrpc::fsr_step(fib, 0b0000) == 0b0000);

  const FsrSpec gal{FsrFamily::Galois, 4, {0, 3}, {}, 0};
  CHECK(fsrpc::fsr_step(gal, 0b0001) == 0b1001);
  CHECK(fsrpc::fsr_step(gal, 0b1000) == 0b0100);
  CHECK(fsrpc::fsr_step(gal, 0b1001) == 0b1101);

  const FsrSpec ring{FsrFamily::RingGenerator, 4, {}, {{0, 2}}, 0};
  CHECK(fsrpc::fsr_step(ring, 0b0001) == 0b1100);
  CHECK(fsrpc::fsr_step(ring, 0b1000) == 0b0100);

  const FsrSpec mfsr{FsrFamily::Mfsr, 4, {}, {{0, 0}}, 0};
  CHECK(fsrpc::fsr_step(mfsr, 0b0001) == 0b1001);

  const FsrSpec ca{FsrFamily::CellularAutomaton, 4, {}, {}, 0b0010};
  CHECK(fsrpc::fsr_step(ca, 0b0001) == 0b0010);
  CHECK(fsrpc::fsr_step(ca, 0b0010) == 0b0111);
  CHECK(fsrpc::fsr_step(ca, 0b1000) == 0b0100);  // null boundary drops the carry-out
}

TEST_CASE("transition matrix reproduces the step function") {
  const FsrSpec specs[] = {
      {FsrFamily::Fibonacci, 4, {0, 3}, {}, 0},
      {FsrFamily::Galois, 4, {0, 3}, {}, 0},
      {FsrFamily::RingGenerator, 4, {}, {{0, 2}}, 0},
      {FsrFamily::Mfsr, 4, {}, {{0, 0}}, 0},
      {FsrFamily::CellularAutomaton, 4, {}, {}, 0b0010},
  };
  for (const FsrSpec& spec : specs) {
    const gf2::Matrix m = fsrpc::transition_matrix(spec);
    for (u64 s = 0; s < 16; ++s) CHECK(m.apply(s) == fsrpc::fsr_step(spec, s));
  }

  // A wider sampled case.
  std::mt19937_64 rng(5);
  const FsrSpec wide{FsrFamily::Mfsr, 12, {}, {{0, 2}, {3, 7}}, 0};
  const gf2::Matrix m = fsrpc::transition_matrix(wide);
  for (int i = 0; i < 200; ++i) {
    const u64 s = rng() & 0xFFF;
    CHECK(m.apply(s) == fsrpc::fsr_step(wide, s));
  }
}

TEST_CASE("characteristic polynomials of the worked examples") {
  auto cp = [](const FsrSpec& s) { return gf2::to_caret(fsrpc::char_poly_of(s)); };
  CHECK(cp({FsrFamily::Fibonacci, 4, {0, 3}, {}, 0}) == "x^4+x^3+1");
  // Same polynomial as the Fibonacci form above: tap 0 sits at register
  // input W-1-0 = 3, so both feedbacks realize x^4+x^3+1.
  CHECK(cp({FsrFamily::Galois, 4, {0, 3}, {}, 0}) == "x^4+x^3+1");
  CHECK(cp({FsrFamily::RingGenerator, 4, {}, {{0, 2}}, 0}) == "x^4+x+1");
  CHECK(cp({FsrFamily::Mfsr, 4, {}, {{0, 0}}, 0}) == "x^4+x^3+1");
  CHECK(cp({FsrFamily::Mfsr, 10, {}, {{0, 2}}, 0}) == "x^10+x^7+1");
  CHECK(cp({FsrFamily::Mfsr, 7, {}, {{0, 0}}, 0}) == "x^7+x^6+1");
}

TEST_CASE("char_poly_of matches the minor-expansion oracle") {
  for (const FsrSpec& spec : {fib8(), gal8(), ring8(), mfsr8(), ca8()})
    CHECK(fsrpc::char_poly_of(spec) ==
          oracles::char_poly_ref(fsrpc::transition_matrix(spec)));

  // Cellular automata have the least obvious polynomials; sweep masks.
  for (unsigned w : {3u, 5u, 9u}) {
    for (u64 mask = 0; mask < (u64{1} << w); ++mask) {
      const FsrSpec ca{FsrFamily::CellularAutomaton, w, {}, {}, mask};
      CHECK(fsrpc::char_poly_of(ca) ==
            oracles::char_poly_ref(fsrpc::transition_matrix(ca)));
    }
  }
}

TEST_CASE("reference configurations are maximal and report pinned metrics") {
  struct Row {
    FsrSpec spec;
    unsigned xors, fan_in, fan_out;
  };
  const Row table[] = {
      {fib8(), 1, 4, 2},  {gal8(), 3, 2, 4}, {ring8(), 3, 2, 2},
      {mfsr8(), 2, 2, 2}, {ca8(), 8, 3, 3},
  };
  for (const Row& row : table) {
    CAPTURE(fsrpc::to_string(row.spec));
    CHECK(walks_full_cycle(row.spec));
    CHECK(gf2::is_primitive(fsrpc::char_poly_of(row.spec)));
    const auto m = fsrpc::metrics(row.spec);
    CHECK(m.xor_gate_count == row.xors);
    CHECK(m.max_fan_in == row.fan_in);
    CHECK(m.max_fan_out == row.fan_out);
  }

  // Finer-grained structure of two of them, counted by hand.
  const auto fib = fsrpc::metrics(fib8());
  CHECK(fib.raw_xor2_count == 3);   // 4-input parity = 3 two-input gates
  CHECK(fib.max_gate_depth == 2);   // balanced tree over 4 inputs
  const auto ca = fsrpc::metrics(ca8());
  CHECK(ca.raw_xor2_count == 10);   // 4 three-input cells + 4 two-input cells
  CHECK(ca.max_gate_depth == 2);
}

TEST_CASE("tap-form constructors invert char_poly_of on primitive octics") {
  for (u64 low = 0; low < 256; ++low) {
    const gf2::Poly p(oracles::u128(low) | (oracles::u128(1) << 8));
    if (!gf2::is_primitive(p)) continue;
    const FsrSpec fib = fsrpc::fibonacci_from_poly(p);
    CHECK(fib.family == FsrFamily::Fibonacci);
    CHECK(fsrpc::char_poly_of(fib) == p);
    CHECK(walks_full_cycle(fib));
    const FsrSpec gal = fsrpc::galois_from_poly(p);
    CHECK(gal.family == FsrFamily::Galois);
    CHECK(fsrpc::char_poly_of(gal) == p);
    CHECK(walks_full_cycle(gal));
  }
}

TEST_CASE("ring realization: verified polynomial, bounded fan usage") {
  unsigned realized = 0;
  for (u64 low = 1; low < 256; low += 2) {  // constant term required
    const gf2::Poly p(oracles::u128(low) | (oracles::u128(1) << 8));
    const auto ring = fsrpc::ring_from_poly(p);
    if (!ring) continue;
    ++realized;
    CHECK(ring->family == FsrFamily::RingGenerator);
    CHECK_NOTHROW(fsrpc::validate(*ring));
    CHECK(fsrpc::char_poly_of(*ring) == p);
  }
  CHECK(realized > 64);  // most octics place cleanly

  // The dense all-ones polynomial has no span decomposition of this shape.
  CHECK_FALSE(fsrpc::ring_from_poly(gf2::Poly(0x1FF)).has_value());
}

TEST_CASE("find_maximal: smallest members and discovery order") {
  const auto fib2 = fsrpc::find_maximal(FsrFamily::Fibonacci, 2, 5);
  REQUIRE(fib2.size() == 1);  // x^2+x+1 is the only primitive quadratic
  CHECK(fib2[0].taps == std::vector<unsigned>{0, 1});

  const auto mfsr10 = fsrpc::find_maximal(FsrFamily::Mfsr, 10, 1);
  REQUIRE(mfsr10.size() == 1);
  CHECK(mfsr10[0].conns == std::vector<FsrConnection>{{0, 2}});

  const auto mfsr7 = fsrpc::find_maximal(FsrFamily::Mfsr, 7, 1);
  REQUIRE(mfsr7.size() == 1);
  CHECK(mfsr7[0].conns == std::vector<FsrConnection>{{0, 0}});

  // Every result must actually be maximal.
  for (FsrFamily f :
       {FsrFamily::Fibonacci, FsrFamily::Galois, FsrFamily::RingGenerator,
        FsrFamily::Mfsr, FsrFamily::CellularAutomaton}) {
    const auto found = fsrpc::find_maximal(f, 6, 3);
    CHECK(!found.empty());
    for (const FsrSpec& s : found) {
      CHECK(s.family == f);
      CHECK(walks_full_cycle(s));
    }
  }

  CHECK_THROWS_AS(fsrpc::find_maximal(FsrFamily::Fibonacci, 1, 1), fsrpc::Error);
  CHECK_THROWS_AS(fsrpc::find_maximal(FsrFamily::Fibonacci, 65, 1), fsrpc::Error);

  // A budget too small to reach any primitive candidate comes back empty.
  const auto none =
      fsrpc::find_maximal(FsrFamily::Fibonacci, 14, 1, {.max_candidates = 3});
  CHECK(none.empty());
}

TEST_CASE("spec text form round-trips the canonical members") {
  CHECK(fsrpc::to_string(mfsr8()) == "family=mfsr width=8 conns=[(0,0),(1,5)]");
  CHECK(fsrpc::to_string(fib8()) == "family=fibonacci width=8 taps=[0,1,2,7]");
}
