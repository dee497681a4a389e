#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fsrpc/hybrid.hpp"

namespace fsrpc {

// Bit range holding an absolute jump target inside an instruction word.
struct JumpField {
  unsigned offset = 0;  // bit position of the field's LSB
  unsigned width = 0;   // must equal the program counter width
  friend bool operator==(const JumpField&, const JumpField&) = default;
};

// A processor, validated on construction: the program counter is built (which
// checks every segment's seed and carry), the jump field must span exactly the
// PC width and fit the instruction word, and no FSR segment may sit at its
// all-zero fixed point (such a PC would allocate the unreachable zero block).
class ProcessorDescription {
public:
  ProcessorDescription(std::string name, unsigned word_width,
                       std::uint64_t memory_words, JumpField jump_field,
                       HybridSpec pc);

  const std::string& name() const { return name_; }
  unsigned word_width() const { return word_width_; }
  std::uint64_t memory_words() const { return memory_words_; }
  JumpField jump_field() const { return jump_field_; }
  const Hybrid& pc() const { return pc_; }
  CounterState reset_state() const { return pc_.reset(); }

private:
  std::string name_;
  unsigned word_width_;
  std::uint64_t memory_words_;
  JumpField jump_field_;
  Hybrid pc_;
};

// Parses the line-oriented description format:
//
//   procdesc v1
//   name=tta16  word_width=16  memory_words=1024  jump_field=0:10
//   [pc] segment=radix2 width=3
//   [pc] segment=mfsr width=7 conns=[(6,0),(4,2)] seed=0x01
//
// The first line must be the version header. Every other line holds
// whitespace-separated key=value tokens; '#' starts a comment. Lines starting
// with [pc] declare counter segments low to high. Unknown keys are rejected
// with the line and column of the offending token. Integers accept decimal,
// 0x hex, and 0b binary. Segment keys: segment, width, modulus, taps, conns,
// rule150, seed, carry, maximal. A segment declared maximal=true whose
// feedback is not primitive is a validation error.
ProcessorDescription parse_description(std::string_view text);

struct ProgramEntry {
  enum class Kind { Word, Jump };
  Kind kind = Kind::Word;
  std::uint64_t word = 0;  // literal word, or the jump's template word
  std::string label;       // jump target (Kind::Jump only)
  unsigned line = 0;       // source line, for diagnostics
};

// A linear program: ordered entries plus label -> entry-index bindings.
struct LinearProgram {
  std::vector<ProgramEntry> entries;
  std::map<std::string, std::size_t> labels;
};

// Parses one entry per line: "word <hex>", "jump <hex-template> <label>",
// "label <name>" (binds to the next entry). Blank lines and '#' comments are
// skipped. "jumprel" is recognized and rejected: PC-relative addressing is
// unsupported because successive fetch addresses are not numerically adjacent.
// Duplicate labels, undefined jump targets, and a trailing label with no
// entry are errors.
LinearProgram parse_program(std::string_view text);

// Sparse word-addressed memory. Writes are range-checked, width-checked, and
// single-shot (a second write to the same address is an error).
class MemoryImage {
public:
  MemoryImage(std::string description_name, std::string pc_hash,
              unsigned word_width, std::uint64_t memory_words);

  void write(std::uint64_t address, std::uint64_t word);
  std::optional<std::uint64_t> read(std::uint64_t address) const;
  const std::map<std::uint64_t, std::uint64_t>& words() const { return words_; }

  const std::string& description_name() const { return description_name_; }
  const std::string& pc_hash() const { return pc_hash_; }
  unsigned word_width() const { return word_width_; }
  std::uint64_t memory_words() const { return memory_words_; }

private:
  std::string description_name_;
  std::string pc_hash_;
  unsigned word_width_;
  std::uint64_t memory_words_;
  std::map<std::uint64_t, std::uint64_t> words_;
};

// FNV-1a over the canonical rendering of the PC segments; identifies which
// counter layout an image was built for.
std::string spec_hash(const HybridSpec& spec);

// Places entry i at the PC's i-th fetch address and rewrites each jump's
// target field with the mapped address of its label. Bits of a jump template
// outside the target field are preserved. Errors: program longer than the PC
// cycle, addresses outside memory, template words wider than the word width.
MemoryImage map_program(const ProcessorDescription& d, const LinearProgram& p);

// Replays the PC from reset for `steps` fetches and returns the fetched words
// in fetch order. Fetching an address the image never wrote is an error
// naming the address and step. map_program followed by fetch_trace recovers
// the linear word sequence.
std::vector<std::uint64_t> fetch_trace(const ProcessorDescription& d,
                                       const MemoryImage& img,
                                       std::uint64_t steps);

enum class ImageFormat { Hex, Binary };

// Hex: one "@<address-hex>" record per contiguous run, then one zero-padded
// word per line, ascending. Binary: little-endian words, unwritten addresses
// zero-filled up to the memory size.
std::string emit_image(const MemoryImage& img, ImageFormat format);

}  // namespace fsrpc
