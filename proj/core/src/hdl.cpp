#include "fsrpc/hdl.hpp"

#include <cctype>
#include <cstdio>
#include <string>
#include <vector>

#include "fsrpc/error.hpp"
#include "fsrpc/fsr.hpp"

namespace fsrpc {

using gf2::u64;

namespace {

std::string hex_literal(unsigned width, u64 value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%u'h%llx", width,
                static_cast<unsigned long long>(value));
  return buf;
}

std::string range(unsigned width) {
  return "[" + std::to_string(width - 1) + ":0]";
}

std::string bit(std::string_view net, unsigned i) {
  return std::string(net) + "[" + std::to_string(i) + "]";
}

std::string join_xor(const std::vector<std::string>& terms) {
  if (terms.empty()) return "1'b0";
  std::string out = terms[0];
  for (std::size_t i = 1; i < terms.size(); ++i) out += " ^ " + terms[i];
  return out;
}

// One assign per next-state bit; ring/MFSR bits never exceed two XOR inputs.
void emit_next_logic(std::string& out, const CounterSpec& spec, unsigned w) {
  if (std::holds_alternative<Radix2Spec>(spec)) {
    out += "  assign next = state + 1'b1;\n";
    return;
  }
  if (const auto* m = std::get_if<ModNSpec>(&spec)) {
    out += "  assign next = (state >= " + hex_literal(w, m->modulus - 1) +
           ") ? " + hex_literal(w, 0) + " : state + 1'b1;\n";
    return;
  }
  const FsrSpec& f = std::get<FsrSpec>(spec);
  for (unsigned i = w; i-- > 0;) {
    std::vector<std::string> terms;
    switch (f.family) {
      case FsrFamily::Fibonacci:
        if (i == w - 1) {
          for (unsigned t : f.taps) terms.push_back(bit("state", t));
        } else {
          terms.push_back(bit("state", i + 1));
        }
        break;
      case FsrFamily::Galois:
        if (i + 1 < w) terms.push_back(bit("state", i + 1));
        for (unsigned t : f.taps)
          if (t == i) terms.push_back(bit("state", 0));
        break;
      case FsrFamily::RingGenerator:
      case FsrFamily::Mfsr:
        terms.push_back(bit("state", (i + 1) % w));
        for (const FsrConnection& c : f.conns)
          if (c.dest == i) terms.push_back(bit("state", c.source));
        break;
      case FsrFamily::CellularAutomaton:
        if (i > 0) terms.push_back(bit("state", i - 1));
        if (i + 1 < w) terms.push_back(bit("state", i + 1));
        if ((f.rule150_mask >> i) & 1) terms.push_back(bit("state", i));
        break;
    }
    out += "  assign " + bit("next", i) + " = " + join_xor(terms) + ";\n";
  }
}

void emit_counter_module(std::string& out, const std::string& module_name,
                         const CounterSpec& spec, unsigned w, u64 seed) {
  out += "module " + module_name + " (\n";
  out += "  input wire CLOCK,\n";
  out += "  input wire RESET,\n";
  out += "  input wire ENABLE,\n";
  out += "  input wire LOAD,\n";
  out += "  input wire " + range(w) + " IN,\n";
  out += "  output wire " + range(w) + " OUT\n";
  out += ");\n";
  out += "  reg " + range(w) + " state;\n";
  out += "  wire " + range(w) + " next;\n";
  out += "\n";
  emit_next_logic(out, spec, w);
  out += "\n";
  out += "  always @(posedge CLOCK) begin\n";
  out += "    if (RESET)\n";
  out += "      state <= " + hex_literal(w, seed) + ";\n";
  out += "    else if (LOAD)\n";
  out += "      state <= IN;\n";
  out += "    else if (ENABLE)\n";
  out += "      state <= next;\n";
  out += "  end\n";
  out += "\n";
  out += "  assign OUT = state;\n";
  out += "endmodule\n";
}

std::string slice(unsigned hi, unsigned lo) {
  return "[" + std::to_string(hi) + ":" + std::to_string(lo) + "]";
}

}  // namespace

std::string sanitize_module_name(std::string_view raw) {
  std::string out;
  for (char c : raw) {
    unsigned char u = static_cast<unsigned char>(c);
    out += std::isalnum(u) || c == '_'
               ? static_cast<char>(std::tolower(u))
               : '_';
  }
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0])))
    out.insert(out.begin(), 'm');
  return out;
}

std::string emit_module(const Hybrid& pc, std::string_view name) {
  const std::string base = sanitize_module_name(name);
  const std::string top = base + "_pc";
  std::string out;

  if (pc.segment_count() == 1) {
    emit_counter_module(out, top, pc.spec().segments[0].spec, pc.width(),
                        pc.segment_seed(0));
    return out;
  }

  for (std::size_t k = 0; k < pc.segment_count(); ++k) {
    emit_counter_module(out, base + "_seg" + std::to_string(k),
                        pc.spec().segments[k].spec, pc.segment_width(k),
                        pc.segment_seed(k));
    out += "\n";
  }

  const unsigned w = pc.width();
  out += "module " + top + " (\n";
  out += "  input wire CLOCK,\n";
  out += "  input wire RESET,\n";
  out += "  input wire ENABLE,\n";
  out += "  input wire LOAD,\n";
  out += "  input wire " + range(w) + " IN,\n";
  out += "  output wire " + range(w) + " OUT\n";
  out += ");\n";
  for (std::size_t k = 0; k < pc.segment_count(); ++k) {
    out += "  wire " + range(pc.segment_width(k)) + " seg" +
           std::to_string(k) + "_out;\n";
  }
  out += "\n";
  // A segment advances when every lower segment sits at its carry value.
  for (std::size_t k = 0; k + 1 < pc.segment_count(); ++k) {
    out += "  wire seg" + std::to_string(k) + "_carry = (seg" +
           std::to_string(k) + "_out == " +
           hex_literal(pc.segment_width(k), pc.segment_carry(k)) + ");\n";
  }
  out += "  wire seg0_enable = ENABLE;\n";
  for (std::size_t k = 1; k < pc.segment_count(); ++k) {
    out += "  wire seg" + std::to_string(k) + "_enable = seg" +
           std::to_string(k - 1) + "_enable & seg" + std::to_string(k - 1) +
           "_carry;\n";
  }
  out += "\n";
  for (std::size_t k = 0; k < pc.segment_count(); ++k) {
    const std::string sk = "seg" + std::to_string(k);
    const unsigned lo = pc.segment_offset(k);
    const unsigned hi = lo + pc.segment_width(k) - 1;
    out += "  " + base + "_" + sk + " " + sk + " (.CLOCK(CLOCK), .RESET(RESET), .ENABLE(" +
           sk + "_enable), .LOAD(LOAD), .IN(IN" + slice(hi, lo) + "), .OUT(" +
           sk + "_out));\n";
  }
  out += "\n";
  out += "  assign OUT = {";
  for (std::size_t k = pc.segment_count(); k-- > 0;) {
    out += "seg" + std::to_string(k) + "_out";
    if (k != 0) out += ", ";
  }
  out += "};\n";
  out += "endmodule\n";
  return out;
}

std::string emit_testbench(const Hybrid& pc, std::string_view name,
                           std::uint64_t cycles) {
  const std::string base = sanitize_module_name(name);
  const unsigned w = pc.width();
  const std::string r = range(w);
  std::string out;
  out += "`timescale 1ns / 1ps\n";
  out += "module " + base + "_tb;\n";
  out += "  reg CLOCK = 1'b0;\n";
  out += "  reg RESET = 1'b1;\n";
  out += "  reg ENABLE = 1'b0;\n";
  out += "  reg LOAD = 1'b0;\n";
  out += "  reg " + r + " IN = " + hex_literal(w, 0) + ";\n";
  out += "  wire " + r + " OUT;\n";
  out += "  reg " + r + " golden [0:" + std::to_string(cycles) + "];\n";
  out += "  integer i;\n";
  out += "  integer errors;\n";
  out += "\n";
  out += "  " + base + "_pc dut (.CLOCK(CLOCK), .RESET(RESET), .ENABLE(ENABLE), "
         ".LOAD(LOAD), .IN(IN), .OUT(OUT));\n";
  out += "\n";
  out += "  always #5 CLOCK = ~CLOCK;\n";
  out += "\n";
  out += "  initial begin\n";
  out += "    $readmemh(\"" + base + "_trace.hex\", golden);\n";
  out += "    errors = 0;\n";
  out += "    @(posedge CLOCK);\n";
  out += "    #1;\n";
  out += "    RESET = 1'b0;\n";
  out += "    if (OUT !== golden[0]) begin\n";
  out += "      errors = errors + 1;\n";
  out += "      $display(\"FAIL reset: OUT=%h expected %h\", OUT, golden[0]);\n";
  out += "    end\n";
  out += "    ENABLE = 1'b1;\n";
  out += "    for (i = 1; i <= " + std::to_string(cycles) + "; i = i + 1) begin\n";
  out += "      @(posedge CLOCK);\n";
  out += "      #1;\n";
  out += "      if (OUT !== golden[i]) begin\n";
  out += "        errors = errors + 1;\n";
  out += "        $display(\"FAIL step %0d: OUT=%h expected %h\", i, OUT, golden[i]);\n";
  out += "      end\n";
  out += "    end\n";
  out += "    if (errors == 0)\n";
  out += "      $display(\"PASS: " + std::to_string(cycles + 1) +
         " states match\");\n";
  out += "    $finish;\n";
  out += "  end\n";
  out += "endmodule\n";
  return out;
}

std::string emit_trace_hex(const Hybrid& pc, std::uint64_t cycles) {
  const unsigned digits = (pc.width() + 3) / 4;
  std::string out;
  u64 state = pc.reset().bits();
  char buf[19];
  for (u64 i = 0; i <= cycles; ++i) {
    std::snprintf(buf, sizeof buf, "%0*llx", static_cast<int>(digits),
                  static_cast<unsigned long long>(state));
    out += buf;
    out += "\n";
    if (i < cycles) state = pc.step_bits(state);
  }
  return out;
}

HdlBundle emit_bundle(const Hybrid& pc, std::string_view name,
                      std::uint64_t cycles) {
  HdlBundle b;
  b.module_name = sanitize_module_name(name) + "_pc";
  b.module_source = emit_module(pc, name);
  b.testbench_source = emit_testbench(pc, name, cycles);
  b.trace_hex = emit_trace_hex(pc, cycles);
  return b;
}

}  // namespace fsrpc
