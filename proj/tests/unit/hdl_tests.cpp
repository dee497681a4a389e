#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "fsrpc/hdl.hpp"

using fsrpc::FsrFamily;
using fsrpc::FsrSpec;
using fsrpc::Hybrid;
using fsrpc::HybridSpec;
using fsrpc::ModNSpec;
using fsrpc::Radix2Spec;

namespace {

Hybrid single(fsrpc::CounterSpec spec) {
  HybridSpec s;
  s.segments.push_back({std::move(spec), {}, {}});
  return Hybrid(s);
}

Hybrid hybrid_3_7() {
  HybridSpec s;
  s.segments.push_back({Radix2Spec{3}, {}, {}});
  s.segments.push_back({FsrSpec{FsrFamily::Mfsr, 7, {}, {{0, 0}}, 0}, {}, {}});
  return Hybrid(s);
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("module names are lowered, cleaned, and never start with a digit") {
  CHECK(fsrpc::sanitize_module_name("TTA16 PC") == "tta16_pc");
  CHECK(fsrpc::sanitize_module_name("plain") == "plain");
  CHECK(fsrpc::sanitize_module_name("16bit") == "m16bit");
  CHECK(fsrpc::sanitize_module_name("") == "m");
  CHECK(fsrpc::sanitize_module_name("a-b.c") == "a_b_c");
}

TEST_CASE("binary counter module: increment, reset seed, control priority") {
  const std::string v = fsrpc::emit_module(single(Radix2Spec{4}), "tiny");
  CHECK(contains(v, "module tiny_pc ("));
  CHECK(contains(v, "assign next = state + 1'b1;"));
  CHECK(contains(v, "state <= 4'h0;"));
  CHECK(contains(v, "assign OUT = state;"));
  // RESET wins over LOAD wins over ENABLE.
  const auto reset_pos = v.find("if (RESET)");
  const auto load_pos = v.find("else if (LOAD)");
  const auto enable_pos = v.find("else if (ENABLE)");
  REQUIRE(reset_pos != std::string::npos);
  REQUIRE(load_pos != std::string::npos);
  REQUIRE(enable_pos != std::string::npos);
  CHECK(reset_pos < load_pos);
  CHECK(load_pos < enable_pos);
}

TEST_CASE("modulus counter module wraps through a comparison") {
  const std::string v = fsrpc::emit_module(single(ModNSpec{5}), "m5");
  CHECK(contains(v, "assign next = (state >= 3'h4) ? 3'h0 : state + 1'b1;"));
}

TEST_CASE("feedback next-state equations, bit by bit") {
  const std::string fib =
      fsrpc::emit_module(single(FsrSpec{FsrFamily::Fibonacci, 4, {0, 3}, {}, 0}), "f");
  CHECK(contains(fib, "assign next[3] = state[0] ^ state[3];"));
  CHECK(contains(fib, "assign next[2] = state[3];"));
  CHECK(contains(fib, "assign next[1] = state[2];"));
  CHECK(contains(fib, "assign next[0] = state[1];"));

  const std::string mfsr =
      fsrpc::emit_module(single(FsrSpec{FsrFamily::Mfsr, 4, {}, {{0, 0}}, 0}), "m");
  CHECK(contains(mfsr, "assign next[3] = state[0];"));
  CHECK(contains(mfsr, "assign next[0] = state[1] ^ state[0];"));

  const std::string ca = fsrpc::emit_module(
      single(FsrSpec{FsrFamily::CellularAutomaton, 4, {}, {}, 0b0010}), "c");
  CHECK(contains(ca, "assign next[3] = state[2];"));
  CHECK(contains(ca, "assign next[2] = state[1] ^ state[3];"));
  CHECK(contains(ca, "assign next[1] = state[0] ^ state[2] ^ state[1];"));
  CHECK(contains(ca, "assign next[0] = state[1];"));
}

TEST_CASE("feedback families never need an XOR wider than two inputs") {
  // One '^' per assignment at most, for every tap-free family member.
  for (const FsrSpec& spec :
       {FsrSpec{FsrFamily::Mfsr, 10, {}, {{0, 2}}, 0},
        FsrSpec{FsrFamily::Mfsr, 8, {}, {{0, 0}, {1, 5}}, 0},
        FsrSpec{FsrFamily::RingGenerator, 8, {}, {{0, 6}, {2, 7}, {3, 3}}, 0}}) {
    const std::string v = fsrpc::emit_module(single(spec), "x");
    std::istringstream lines(v);
    std::string line;
    while (std::getline(lines, line)) {
      const auto carets = std::count(line.begin(), line.end(), '^');
      CHECK(carets <= 1);
    }
  }
}

TEST_CASE("composed counter: gated enables and concatenated output") {
  const std::string v = fsrpc::emit_module(hybrid_3_7(), "tta16");
  CHECK(contains(v, "module tta16_seg0 ("));
  CHECK(contains(v, "module tta16_seg1 ("));
  CHECK(contains(v, "module tta16_pc ("));
  // The low segment wraps at 7; the high segment only then advances.
  CHECK(contains(v, "wire seg0_carry = (seg0_out == 3'h7);"));
  CHECK(contains(v, "wire seg0_enable = ENABLE;"));
  CHECK(contains(v, "wire seg1_enable = seg0_enable & seg0_carry;"));
  CHECK(contains(v, ".IN(IN[2:0])"));
  CHECK(contains(v, ".IN(IN[9:3])"));
  CHECK(contains(v, "assign OUT = {seg1_out, seg0_out};"));
}

TEST_CASE("testbench replays a golden trace and reports a verdict") {
  Hybrid pc = hybrid_3_7();
  const std::string tb = fsrpc::emit_testbench(pc, "tta16", 100);
  CHECK(contains(tb, "module tta16_tb;"));
  CHECK(contains(tb, "$readmemh(\"tta16_trace.hex\", golden);"));
  CHECK(contains(tb, "golden [0:100];"));
  CHECK(contains(tb, "always #5 CLOCK = ~CLOCK;"));
  CHECK(contains(tb, "$display(\"PASS: 101 states match\");"));
  CHECK(contains(tb, "$finish;"));
}

TEST_CASE("trace file: one padded hex state per cycle, seed first") {
  const std::string t = fsrpc::emit_trace_hex(single(Radix2Spec{3}), 4);
  CHECK(t == "0\n1\n2\n3\n4\n");

  Hybrid pc = hybrid_3_7();
  const std::string h = fsrpc::emit_trace_hex(pc, 8);
  // Reset 0x008, seven in-line steps, then the wrap into the next line.
  CHECK(h == "008\n009\n00a\n00b\n00c\n00d\n00e\n00f\n208\n");
}

TEST_CASE("emission is deterministic byte for byte") {
  Hybrid pc = hybrid_3_7();
  const auto a = fsrpc::emit_bundle(pc, "tta16", 1016);
  const auto b = fsrpc::emit_bundle(pc, "tta16", 1016);
  CHECK(a.module_name == "tta16_pc");
  CHECK(a.module_source == b.module_source);
  CHECK(a.testbench_source == b.testbench_source);
  CHECK(a.trace_hex == b.trace_hex);
}

namespace {

// Reads the per-bit feedback equations back out of the emitted text:
// "  assign next[i] = state[a] ^ state[b] ...;" becomes a tap mask per bit.
// Evaluating those masks is an independent model of the generated netlist.
std::vector<std::uint64_t> next_bit_masks(const std::string& verilog,
                                          unsigned width) {
  std::vector<std::uint64_t> masks(width, 0);
  std::vector<bool> seen(width, false);
  std::istringstream lines(verilog);
  std::string line;
  while (std::getline(lines, line)) {
    const std::string head = "  assign next[";
    if (line.rfind(head, 0) != 0) continue;
    std::size_t pos = head.size();
    const unsigned bit = static_cast<unsigned>(std::stoul(line.substr(pos), &pos));
    REQUIRE(bit < width);
    REQUIRE_FALSE(seen[bit]);
    seen[bit] = true;
    std::size_t at = head.size() + pos;
    REQUIRE(line.compare(at, 4, "] = ") == 0);
    at += 4;
    REQUIRE(line.back() == ';');
    std::istringstream expr(line.substr(at, line.size() - at - 1));
    std::string term, sep;
    bool first = true;
    while (expr >> term) {
      if (!first) {
        REQUIRE(term == "^");
        expr >> term;
      }
      first = false;
      REQUIRE(term.rfind("state[", 0) == 0);
      const unsigned src = static_cast<unsigned>(std::stoul(term.substr(6)));
      REQUIRE(src < width);
      masks[bit] |= std::uint64_t{1} << src;
    }
    REQUIRE(masks[bit] != 0);
  }
  for (unsigned i = 0; i < width; ++i) REQUIRE(seen[i]);
  return masks;
}

std::uint64_t eval_masks(const std::vector<std::uint64_t>& masks,
                         std::uint64_t state) {
  std::uint64_t out = 0;
  for (unsigned i = 0; i < masks.size(); ++i)
    out |= static_cast<std::uint64_t>(__builtin_parityll(masks[i] & state)) << i;
  return out;
}

}  // namespace

TEST_CASE("emitted feedback netlists compute the step function") {
  std::vector<FsrSpec> specs = {
      {FsrFamily::Fibonacci, 8, {0, 1, 2, 7}, {}, 0},
      {FsrFamily::Galois, 8, {0, 1, 6, 7}, {}, 0},
      {FsrFamily::RingGenerator, 8, {}, {{0, 6}, {2, 7}, {3, 3}}, 0},
      {FsrFamily::Mfsr, 8, {}, {{0, 0}, {1, 5}}, 0},
      {FsrFamily::CellularAutomaton, 8, {}, {}, 0x93},
  };
  for (FsrFamily family :
       {FsrFamily::Fibonacci, FsrFamily::Galois, FsrFamily::RingGenerator,
        FsrFamily::Mfsr, FsrFamily::CellularAutomaton}) {
    for (unsigned w : {4u, 6u, 10u, 12u}) {
      const auto found = fsrpc::find_maximal(family, w, 1);
      if (!found.empty()) specs.push_back(found[0]);
    }
  }

  for (const FsrSpec& spec : specs) {
    CAPTURE(fsrpc::to_string(spec));
    const std::string v = fsrpc::emit_module(single(spec), "netcheck");
    const auto masks = next_bit_masks(v, spec.width);
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << spec.width); ++s)
      REQUIRE(eval_masks(masks, s) == fsrpc::fsr_step(spec, s));
  }
}
