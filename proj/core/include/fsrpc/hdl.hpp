#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "fsrpc/hybrid.hpp"

namespace fsrpc {

// Verilog-2001 generation for any counter layout: structural registers plus
// continuous assignments, no vendor primitives. Every module presents the
// same black-box contract:
//
//   ports   CLOCK, RESET, ENABLE, LOAD, IN[W-1:0], OUT[W-1:0]
//   RESET   synchronous, loads the counter's seed state, wins over everything
//   LOAD    synchronous parallel load from IN, wins over ENABLE
//   ENABLE  advances one state per rising CLOCK edge
//   OUT     continuously reflects the register
//
// Next-state logic is one assign per bit. Shift-register families need at
// most one 2-input XOR per bit (ring/MFSR) or a single parity tree
// (Fibonacci); radix-2 is an increment. A hybrid emits one submodule per
// segment plus a top module whose carry-enable wires gate each higher
// segment on all lower segments sitting at their carry values.
//
// The only software/hardware divergence: a mod-n register LOADed with a value
// >= n re-enters the cycle at 0, while the software step folds it into the
// cycle arithmetically. On-cycle behaviour is identical.
//
// Output is deterministic: identical input, byte-identical text.

// Lowercases and maps characters outside [A-Za-z0-9_] to '_'; prefixes 'm'
// when the result would start with a digit or be empty.
std::string sanitize_module_name(std::string_view raw);

// Self-contained synthesizable source holding module <name>_pc (and its
// segment submodules for hybrids).
std::string emit_module(const Hybrid& pc, std::string_view name);

// Testbench <name>_tb: drives RESET then ENABLE and compares OUT against a
// golden trace of `cycles` steps loaded from <name>_trace.hex via $readmemh.
std::string emit_testbench(const Hybrid& pc, std::string_view name,
                           std::uint64_t cycles);

// The golden trace itself: cycles+1 states (seed first), one zero-padded hex
// word per line, generated from the same step function the tests verify.
std::string emit_trace_hex(const Hybrid& pc, std::uint64_t cycles);

struct HdlBundle {
  std::string module_name;       // sanitized top module name, "<name>_pc"
  std::string module_source;     // file <name>_pc.v
  std::string testbench_source;  // file <name>_tb.v
  std::string trace_hex;         // file <name>_trace.hex
};

HdlBundle emit_bundle(const Hybrid& pc, std::string_view name,
                      std::uint64_t cycles);

}  // namespace fsrpc
