// fsrpc: counters, program mapping, cache studies, and HDL emission for
// shift-register program counters. Exit codes: 0 success, 1 domain failure,
// 2 usage error. Diagnostics go to stderr, one line each.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fsrpc/cachesim.hpp"
#include "fsrpc/error.hpp"
#include "fsrpc/fsr.hpp"
#include "fsrpc/hdl.hpp"
#include "fsrpc/hybrid.hpp"
#include "fsrpc/latency.hpp"
#include "fsrpc/mapper.hpp"

namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw fsrpc::Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& data) {
  if (path.empty()) {
    std::cout << data;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw fsrpc::Error("cannot write '" + path + "'");
  out << data;
}

std::uint64_t parse_u64(const std::string& s, const char* what) {
  int base = 10;
  std::size_t skip = 0;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    base = 16;
    skip = 2;
  } else if (s.size() > 2 && s[0] == '0' && (s[1] == 'b' || s[1] == 'B')) {
    base = 2;
    skip = 2;
  }
  try {
    std::size_t used = 0;
    std::uint64_t v = std::stoull(s.substr(skip), &used, base);
    if (used != s.size() - skip) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw CLI::ValidationError(std::string(what) + ": invalid number '" + s + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t next = s.find(sep, pos);
    if (next == std::string::npos) {
      parts.push_back(s.substr(pos));
      break;
    }
    parts.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
  return parts;
}

std::vector<unsigned> parse_taps(const std::string& s) {
  std::vector<unsigned> taps;
  for (const std::string& p : split(s, ','))
    taps.push_back(static_cast<unsigned>(parse_u64(p, "--taps")));
  return taps;
}

std::vector<fsrpc::FsrConnection> parse_conns(const std::string& s) {
  std::vector<fsrpc::FsrConnection> conns;
  for (const std::string& p : split(s, ',')) {
    auto parts = split(p, ':');
    if (parts.size() != 2)
      throw CLI::ValidationError("--conns: expected source:dest pairs, got '" + p + "'");
    conns.push_back(fsrpc::FsrConnection{
        static_cast<unsigned>(parse_u64(parts[0], "--conns")),
        static_cast<unsigned>(parse_u64(parts[1], "--conns"))});
  }
  return conns;
}

// Shared spec-from-flags options for subcommands that accept an inline
// counter instead of a description file.
struct SpecFlags {
  std::string family;
  unsigned width = 0;
  std::string modulus;
  std::string taps;
  std::string conns;
  std::string rule150;

  void attach(CLI::App* cmd, CLI::Option** family_opt) {
    *family_opt = cmd->add_option(
        "--family", family,
        "counter kind: radix2, modn, fibonacci, galois, ring, mfsr, ca");
    cmd->add_option("--width", width, "register width in bits");
    cmd->add_option("--modulus", modulus, "modulus for --family modn");
    cmd->add_option("--taps", taps, "feedback taps, e.g. 0,1 (fibonacci/galois)");
    cmd->add_option("--conns", conns, "ring connections, e.g. 6:0,4:2 (ring/mfsr)");
    cmd->add_option("--rule150", rule150, "rule-150 cell mask for --family ca");
  }

  fsrpc::CounterSpec build() const {
    using namespace fsrpc;
    if (family == "radix2") {
      if (width == 0) throw CLI::ValidationError("--family radix2 needs --width");
      return Radix2Spec{width};
    }
    if (family == "modn") {
      if (modulus.empty()) throw CLI::ValidationError("--family modn needs --modulus");
      return ModNSpec{parse_u64(modulus, "--modulus")};
    }
    auto fam = family_from_name(family);
    if (!fam) throw CLI::ValidationError("unknown family '" + family + "'");
    if (width == 0) throw CLI::ValidationError("--family " + family + " needs --width");
    if (taps.empty() && conns.empty() && rule150.empty()) {
      // No feedback given: search for the first maximal register.
      auto found = find_maximal(*fam, width, 1);
      if (found.empty())
        throw Error("no maximal " + family + " register of width " +
                    std::to_string(width) + " found");
      std::cerr << "note: using " << to_string(found[0]) << "\n";
      return found[0];
    }
    FsrSpec spec;
    spec.family = *fam;
    spec.width = width;
    if (!taps.empty()) spec.taps = parse_taps(taps);
    if (!conns.empty()) spec.conns = parse_conns(conns);
    if (!rule150.empty()) spec.rule150_mask = parse_u64(rule150, "--rule150");
    validate(spec);
    return spec;
  }
};

int cmd_find(const std::string& family, unsigned width, unsigned count) {
  auto fam = fsrpc::family_from_name(family);
  if (!fam) throw CLI::ValidationError("unknown family '" + family + "'");
  auto found = fsrpc::find_maximal(*fam, width, count);
  for (const fsrpc::FsrSpec& spec : found)
    std::cout << fsrpc::to_string(spec) << "\n";
  if (found.empty())
    throw fsrpc::Error("find: no maximal " + family + " register of width " +
                       std::to_string(width) + " found");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "shift-register program counters: search, sequences, assembly, cache "
      "studies, latency models, HDL"};
  app.require_subcommand(1);

  // ---- find ----
  auto* find = app.add_subcommand("find", "search maximal-cycle registers");
  std::string find_family;
  unsigned find_width = 0;
  unsigned find_count = 1;
  find->add_option("family", find_family, "fibonacci, galois, ring, mfsr, ca")
      ->required();
  find->add_option("width", find_width, "register width in bits")
      ->required()
      ->check(CLI::Range(2u, 64u));
  find->add_option("count", find_count, "how many to list (default 1)")
      ->check(CLI::Range(1u, 1000000u));
  find->callback([&] { cmd_find(find_family, find_width, find_count); });

  // ---- seq ----
  auto* seq = app.add_subcommand("seq", "print the fetch-address sequence");
  std::string seq_desc;
  SpecFlags seq_spec;
  CLI::Option* seq_family_opt = nullptr;
  std::string seq_seed;
  std::uint64_t seq_count = 16;
  auto* seq_desc_opt =
      seq->add_option("--desc", seq_desc, "processor description file")
          ->check(CLI::ExistingFile);
  seq_spec.attach(seq, &seq_family_opt);
  seq_desc_opt->excludes(seq_family_opt);
  seq->add_option("--seed", seq_seed, "start state (full counter bits)");
  seq->add_option("--count", seq_count, "addresses to print (default 16)");
  seq->callback([&] {
    fsrpc::HybridSpec hspec;
    if (!seq_desc.empty()) {
      hspec = fsrpc::parse_description(read_file(seq_desc)).pc().spec();
    } else if (!seq_spec.family.empty()) {
      hspec.segments.push_back(fsrpc::HybridSegment{seq_spec.build(), {}, {}});
    } else {
      throw CLI::ValidationError("seq needs --desc or --family");
    }
    fsrpc::Hybrid pc(hspec);
    std::uint64_t state = pc.reset().bits();
    if (!seq_seed.empty())
      state = fsrpc::CounterState(parse_u64(seq_seed, "--seed"), pc.width()).bits();
    if (pc.segment_count() == 1 && state == 0 &&
        std::holds_alternative<fsrpc::FsrSpec>(hspec.segments[0].spec))
      std::cerr << "warning: seed 0 is the zero fixed point; the sequence "
                   "never leaves it\n";
    std::ostringstream out;
    for (std::uint64_t i = 0; i < seq_count; ++i) {
      out << std::hex << state << "\n";
      state = pc.step_bits(state);
    }
    std::cout << out.str();
  });

  // ---- asm ----
  auto* asm_cmd = app.add_subcommand("asm", "map a linear program into memory");
  std::string asm_desc, asm_program, asm_out, asm_format = "hex";
  asm_cmd->add_option("--desc", asm_desc, "processor description file")
      ->required()
      ->check(CLI::ExistingFile);
  asm_cmd->add_option("--program", asm_program, "linear program file")
      ->required()
      ->check(CLI::ExistingFile);
  asm_cmd->add_option("--out", asm_out, "output path (default stdout)");
  asm_cmd->add_option("--format", asm_format, "hex or binary (default hex)")
      ->check(CLI::IsMember({"hex", "binary"}));
  asm_cmd->callback([&] {
    auto d = fsrpc::parse_description(read_file(asm_desc));
    auto p = fsrpc::parse_program(read_file(asm_program));
    auto img = fsrpc::map_program(d, p);
    write_output(asm_out, fsrpc::emit_image(img, asm_format == "hex"
                                                     ? fsrpc::ImageFormat::Hex
                                                     : fsrpc::ImageFormat::Binary));
  });

  // ---- cachesim ----
  auto* sim = app.add_subcommand("cachesim", "count instruction-cache misses");
  std::string sim_desc, sim_trace, sim_out;
  std::uint64_t sim_line = 8, sim_lines = 16, sim_steps = 1024;
  unsigned sim_assoc = 1;
  bool sim_compare = false;
  auto* sim_desc_opt =
      sim->add_option("--desc", sim_desc, "processor description file")
          ->check(CLI::ExistingFile);
  auto* sim_trace_opt =
      sim->add_option("--trace", sim_trace, "address-trace file, one hex per line")
          ->check(CLI::ExistingFile);
  sim_desc_opt->excludes(sim_trace_opt);
  sim->add_option("--line-size", sim_line, "words per cache line (default 8)");
  sim->add_option("--lines", sim_lines, "number of cache lines (default 16)");
  sim->add_option("--assoc", sim_assoc, "associativity (default 1, direct-mapped)");
  sim->add_option("--steps", sim_steps, "fetches to replay (default 1024)");
  sim->add_flag("--compare", sim_compare,
                "also report a radix-2 baseline of the same width");
  sim->add_option("--out", sim_out, "output path (default stdout)");
  sim->callback([&] {
    fsrpc::CacheConfig cfg{sim_line, sim_lines, sim_assoc};
    std::vector<fsrpc::SimReport> rows;
    if (!sim_trace.empty()) {
      std::vector<std::uint64_t> addrs;
      for (const std::string& line : split(read_file(sim_trace), '\n')) {
        std::string t = line;
        if (auto pos = t.find('#'); pos != std::string::npos) t = t.substr(0, pos);
        while (!t.empty() && (t.back() == ' ' || t.back() == '\r')) t.pop_back();
        while (!t.empty() && t.front() == ' ') t.erase(t.begin());
        if (t.empty()) continue;
        addrs.push_back(parse_u64("0x" + t, "--trace address"));
      }
      rows.push_back(fsrpc::simulate_trace(addrs, cfg));
    } else if (!sim_desc.empty()) {
      auto d = fsrpc::parse_description(read_file(sim_desc));
      if (sim_compare) {
        std::vector<fsrpc::ComparePc> pcs;
        fsrpc::HybridSpec base;
        base.segments.push_back(
            fsrpc::HybridSegment{fsrpc::Radix2Spec{d.pc().width()}, {}, {}});
        pcs.push_back(fsrpc::ComparePc{"radix2", fsrpc::Hybrid(base)});
        pcs.push_back(fsrpc::ComparePc{"", d.pc()});
        rows = fsrpc::compare(pcs, cfg, sim_steps);
      } else {
        rows.push_back(fsrpc::simulate(d.pc(), cfg, sim_steps));
      }
    } else {
      throw CLI::ValidationError("cachesim needs --desc or --trace");
    }
    write_output(sim_out, fsrpc::to_csv(rows));
  });

  // ---- latency ----
  auto* lat = app.add_subcommand("latency", "fitted latency model tables");
  std::string lat_widths, lat_coeffs, lat_out;
  bool lat_plot = false;
  lat->add_option("--widths", lat_widths,
                  "comma-separated widths (default 2..64)");
  lat->add_option("--coeffs", lat_coeffs,
                  "coefficient override file (or env FSRPC_COEFFS)")
      ->check(CLI::ExistingFile);
  lat->add_flag("--plot", lat_plot, "long-form N,model,latency_ns output");
  lat->add_option("--out", lat_out, "output path (default stdout)");
  lat->callback([&] {
    fsrpc::LatencyCoeffs coeffs;
    std::string coeff_path = lat_coeffs;
    if (coeff_path.empty())
      if (const char* env = std::getenv("FSRPC_COEFFS")) coeff_path = env;
    if (!coeff_path.empty()) coeffs = fsrpc::load_coeffs(read_file(coeff_path));
    std::vector<unsigned> widths;
    if (lat_widths.empty()) {
      for (unsigned w = 2; w <= 64; ++w) widths.push_back(w);
    } else {
      for (const std::string& p : split(lat_widths, ','))
        widths.push_back(static_cast<unsigned>(parse_u64(p, "--widths")));
    }
    std::string body =
        lat_plot ? fsrpc::plot_csv(widths, coeffs)
                 : fsrpc::crossover_csv(fsrpc::crossover_table(widths, coeffs));
    write_output(lat_out, "# model fit: " + std::string(fsrpc::kLatencyProvenance) +
                              " (estimates, not measurements)\n" + body);
  });

  // ---- emit-hdl ----
  auto* hdl = app.add_subcommand("emit-hdl", "write Verilog plus a golden-trace testbench");
  std::string hdl_desc, hdl_out;
  std::uint64_t hdl_cycles = 0;
  bool hdl_cycles_set = false;
  hdl->add_option("--desc", hdl_desc, "processor description file")
      ->required()
      ->check(CLI::ExistingFile);
  hdl->add_option("--out", hdl_out, "output directory")->required();
  hdl->add_option("--cycles", hdl_cycles,
                  "testbench depth (default: one full period, capped at 65536)")
      ->each([&](const std::string&) { hdl_cycles_set = true; });
  hdl->callback([&] {
    auto d = fsrpc::parse_description(read_file(hdl_desc));
    std::uint64_t cycles = hdl_cycles;
    if (!hdl_cycles_set)
      cycles = d.pc().period_at_least(65537) ? 65536 : d.pc().period();
    auto bundle = fsrpc::emit_bundle(d.pc(), d.name(), cycles);
    fs::create_directories(hdl_out);
    const std::string base = fsrpc::sanitize_module_name(d.name());
    struct {
      const char* suffix;
      const std::string* data;
    } files[] = {{"_pc.v", &bundle.module_source},
                 {"_tb.v", &bundle.testbench_source},
                 {"_trace.hex", &bundle.trace_hex}};
    for (const auto& f : files) {
      fs::path path = fs::path(hdl_out) / (base + f.suffix);
      write_output(path.string(), *f.data);
      std::cout << path.string() << "\n";
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const fsrpc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
