#include "fsrpc/mapper.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>

#include "fsrpc/error.hpp"
#include "fsrpc/fsr.hpp"

namespace fsrpc {

using gf2::u64;

namespace {

std::string hex_u64(u64 v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string hex_u64_padded(u64 v, unsigned digits) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%0*llx", static_cast<int>(digits),
                static_cast<unsigned long long>(v));
  return buf;
}

// --- description tokenizer -------------------------------------------------

struct Token {
  std::string_view text;
  int line;
  int col;  // 1-based column of the first character
};

// Splits on whitespace, strips '#' comments, keeps (line, col) per token.
std::vector<std::vector<Token>> tokenize_lines(std::string_view text) {
  std::vector<std::vector<Token>> lines;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    ++line_no;
    if (std::size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    std::vector<Token> toks;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      std::size_t start = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i > start)
        toks.push_back(Token{line.substr(start, i - start), line_no,
                             static_cast<int>(start) + 1});
    }
    if (!toks.empty()) lines.push_back(std::move(toks));
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
  return lines;
}

u64 parse_uint(std::string_view s, const Token& at, const char* what) {
  int base = 10;
  std::string_view digits = s;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    base = 16;
    digits = s.substr(2);
  } else if (s.size() > 2 && s[0] == '0' && (s[1] == 'b' || s[1] == 'B')) {
    base = 2;
    digits = s.substr(2);
  }
  u64 value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(),
                                   value, base);
  if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty())
    throw ParseError(std::string("invalid ") + what + " '" + std::string(s) + "'",
                     at.line, at.col);
  return value;
}

// "key=value" split; the whole token is rejected if '=' is missing.
std::pair<std::string_view, std::string_view> split_kv(const Token& t) {
  std::size_t eq = t.text.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw ParseError("expected key=value, got '" + std::string(t.text) + "'",
                     t.line, t.col);
  return {t.text.substr(0, eq), t.text.substr(eq + 1)};
}

// List forms: [4,1,0] for taps, [(6,0),(4,2)] for connections.
std::vector<unsigned> parse_tap_list(std::string_view v, const Token& at) {
  if (v.size() < 2 || v.front() != '[' || v.back() != ']')
    throw ParseError("taps must look like [a,b,...]", at.line, at.col);
  std::vector<unsigned> taps;
  std::string_view body = v.substr(1, v.size() - 2);
  while (!body.empty()) {
    std::size_t comma = body.find(',');
    std::string_view item = body.substr(0, comma);
    taps.push_back(static_cast<unsigned>(parse_uint(item, at, "tap index")));
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  return taps;
}

std::vector<FsrConnection> parse_conn_list(std::string_view v, const Token& at) {
  if (v.size() < 2 || v.front() != '[' || v.back() != ']')
    throw ParseError("conns must look like [(s,d),(s,d),...]", at.line, at.col);
  std::vector<FsrConnection> conns;
  std::string_view body = v.substr(1, v.size() - 2);
  while (!body.empty()) {
    if (body.front() == ',') body.remove_prefix(1);
    std::size_t close = body.find(')');
    if (body.empty() || body.front() != '(' || close == std::string_view::npos)
      throw ParseError("conns must look like [(s,d),(s,d),...]", at.line, at.col);
    std::string_view pair = body.substr(1, close - 1);
    std::size_t comma = pair.find(',');
    if (comma == std::string_view::npos)
      throw ParseError("connection needs two indices", at.line, at.col);
    conns.push_back(FsrConnection{
        static_cast<unsigned>(parse_uint(pair.substr(0, comma), at, "source index")),
        static_cast<unsigned>(parse_uint(pair.substr(comma + 1), at, "dest index"))});
    body.remove_prefix(close + 1);
  }
  return conns;
}

bool parse_bool(std::string_view v, const Token& at) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ParseError("expected true or false, got '" + std::string(v) + "'",
                   at.line, at.col);
}

// Raw per-segment fields gathered before spec construction.
struct SegmentDraft {
  std::string family;
  std::optional<unsigned> width;
  std::optional<u64> modulus;
  std::optional<std::vector<unsigned>> taps;
  std::optional<std::vector<FsrConnection>> conns;
  std::optional<u64> rule150;
  std::optional<u64> seed;
  std::optional<u64> carry;
  bool maximal = false;
  int line = 0;
};

HybridSegment build_segment(const SegmentDraft& d, std::size_t index) {
  auto tag = [&] { return "segment " + std::to_string(index); };
  auto need_width = [&]() -> unsigned {
    if (!d.width) throw ParseError(tag() + " needs width=", d.line);
    return *d.width;
  };
  auto reject = [&](bool present, const char* key) {
    if (present)
      throw ParseError(tag() + ": key '" + key + "' does not apply to " + d.family,
                       d.line);
  };
  HybridSegment seg;
  if (d.family == "radix2") {
    reject(d.modulus.has_value(), "modulus");
    reject(d.taps.has_value(), "taps");
    reject(d.conns.has_value(), "conns");
    reject(d.rule150.has_value(), "rule150");
    reject(d.maximal, "maximal");
    seg.spec = Radix2Spec{need_width()};
  } else if (d.family == "modn") {
    reject(d.width.has_value(), "width");
    reject(d.taps.has_value(), "taps");
    reject(d.conns.has_value(), "conns");
    reject(d.rule150.has_value(), "rule150");
    reject(d.maximal, "maximal");
    if (!d.modulus) throw ParseError(tag() + " needs modulus=", d.line);
    seg.spec = ModNSpec{*d.modulus};
  } else if (auto fam = family_from_name(d.family)) {
    reject(d.modulus.has_value(), "modulus");
    FsrSpec spec;
    spec.family = *fam;
    spec.width = need_width();
    if (d.taps) spec.taps = *d.taps;
    if (d.conns) spec.conns = *d.conns;
    if (d.rule150) spec.rule150_mask = *d.rule150;
    validate(spec);  // field applicability and topology checks
    if (d.maximal && !gf2::is_primitive(char_poly_of(spec)))
      throw Error("description: " + tag() + " declared maximal but " +
                  gf2::to_caret(char_poly_of(spec)) + " is not primitive");
    seg.spec = spec;
  } else {
    throw ParseError(tag() + ": unknown segment kind '" + d.family + "'", d.line);
  }
  seg.seed = d.seed;
  seg.carry = d.carry;
  return seg;
}

}  // namespace

ProcessorDescription::ProcessorDescription(std::string name, unsigned word_width,
                                           std::uint64_t memory_words,
                                           JumpField jump_field, HybridSpec pc)
    : name_(std::move(name)),
      word_width_(word_width),
      memory_words_(memory_words),
      jump_field_(jump_field),
      pc_(std::move(pc)) {
  if (name_.empty()) throw Error("description: name must not be empty");
  if (word_width_ < 1 || word_width_ > 64)
    throw Error("description: word width must be in [1, 64]");
  if (memory_words_ == 0) throw Error("description: memory size must be positive");
  if (jump_field_.width != pc_.width())
    throw Error("description: jump field width " + std::to_string(jump_field_.width) +
                " does not match PC width " + std::to_string(pc_.width()));
  if (jump_field_.offset + jump_field_.width > word_width_)
    throw Error("description: jump field exceeds the instruction word");
  for (std::size_t i = 0; i < pc_.segment_count(); ++i) {
    if (std::holds_alternative<FsrSpec>(pc_.spec().segments[i].spec) &&
        pc_.segment_seed(i) == 0)
      throw Error("description: segment " + std::to_string(i) +
                  " seeds an FSR at its zero fixed point");
  }
}

ProcessorDescription parse_description(std::string_view text) {
  auto lines = tokenize_lines(text);
  if (lines.empty() || lines[0].size() != 2 || lines[0][0].text != "procdesc" ||
      lines[0][1].text != "v1")
    throw ParseError("expected 'procdesc v1' header line",
                     lines.empty() ? 1 : lines[0][0].line);

  std::optional<std::string> name;
  std::optional<unsigned> word_width;
  std::optional<u64> memory_words;
  std::optional<JumpField> jump_field;
  std::vector<SegmentDraft> drafts;

  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto& toks = lines[li];
    std::size_t first = 0;
    SegmentDraft* seg = nullptr;
    if (toks[0].text == "[pc]") {
      drafts.push_back(SegmentDraft{});
      seg = &drafts.back();
      seg->line = toks[0].line;
      first = 1;
      if (toks.size() == 1)
        throw ParseError("[pc] line needs at least segment=", toks[0].line,
                         toks[0].col);
    }
    for (std::size_t ti = first; ti < toks.size(); ++ti) {
      const Token& t = toks[ti];
      auto [key, value] = split_kv(t);
      if (seg) {
        if (key == "segment") seg->family = std::string(value);
        else if (key == "width") seg->width = static_cast<unsigned>(parse_uint(value, t, "width"));
        else if (key == "modulus") seg->modulus = parse_uint(value, t, "modulus");
        else if (key == "taps") seg->taps = parse_tap_list(value, t);
        else if (key == "conns") seg->conns = parse_conn_list(value, t);
        else if (key == "rule150") seg->rule150 = parse_uint(value, t, "rule mask");
        else if (key == "seed") seg->seed = parse_uint(value, t, "seed");
        else if (key == "carry") seg->carry = parse_uint(value, t, "carry");
        else if (key == "maximal") seg->maximal = parse_bool(value, t);
        else
          throw ParseError("unknown segment key '" + std::string(key) + "'",
                           t.line, t.col);
      } else {
        if (key == "name") {
          name = std::string(value);
        } else if (key == "word_width") {
          word_width = static_cast<unsigned>(parse_uint(value, t, "word width"));
        } else if (key == "memory_words") {
          memory_words = parse_uint(value, t, "memory size");
        } else if (key == "jump_field") {
          std::size_t colon = value.find(':');
          if (colon == std::string_view::npos)
            throw ParseError("jump_field must look like offset:width", t.line, t.col);
          jump_field = JumpField{
              static_cast<unsigned>(parse_uint(value.substr(0, colon), t, "field offset")),
              static_cast<unsigned>(parse_uint(value.substr(colon + 1), t, "field width"))};
        } else {
          throw ParseError("unknown key '" + std::string(key) + "'", t.line, t.col);
        }
      }
    }
    if (seg && seg->family.empty())
      throw ParseError("[pc] line needs segment=", toks[0].line, toks[0].col);
  }

  if (!name) throw ParseError("missing name=");
  if (!word_width) throw ParseError("missing word_width=");
  if (!memory_words) throw ParseError("missing memory_words=");
  if (!jump_field) throw ParseError("missing jump_field=");
  if (drafts.empty()) throw ParseError("no [pc] segments declared");

  HybridSpec pc;
  for (std::size_t i = 0; i < drafts.size(); ++i)
    pc.segments.push_back(build_segment(drafts[i], i));
  return ProcessorDescription(*name, *word_width, *memory_words, *jump_field,
                              std::move(pc));
}

LinearProgram parse_program(std::string_view text) {
  LinearProgram prog;
  std::vector<std::pair<std::string, unsigned>> pending;  // labels, for checks
  for (const auto& toks : tokenize_lines(text)) {
    const Token& head = toks[0];
    if (head.text == "word") {
      if (toks.size() != 2)
        throw ParseError("word takes exactly one value", head.line, head.col);
      prog.entries.push_back(ProgramEntry{
          ProgramEntry::Kind::Word,
          parse_uint(toks[1].text, toks[1], "word"), {},
          static_cast<unsigned>(head.line)});
    } else if (head.text == "jump") {
      if (toks.size() != 3)
        throw ParseError("jump takes a template word and a label", head.line,
                         head.col);
      prog.entries.push_back(ProgramEntry{
          ProgramEntry::Kind::Jump,
          parse_uint(toks[1].text, toks[1], "jump template"),
          std::string(toks[2].text), static_cast<unsigned>(head.line)});
    } else if (head.text == "label") {
      if (toks.size() != 2)
        throw ParseError("label takes exactly one name", head.line, head.col);
      std::string lname(toks[1].text);
      auto [it, inserted] = prog.labels.emplace(lname, prog.entries.size());
      if (!inserted)
        throw ParseError("duplicate label '" + lname + "'", head.line,
                         toks[1].col);
      pending.emplace_back(std::move(lname), head.line);
    } else if (head.text == "jumprel") {
      throw ParseError(
          "jumprel is not supported: pc-relative addressing assumes numeric "
          "fetch order, which an FSR counter does not provide",
          head.line, head.col);
    } else {
      throw ParseError("unknown directive '" + std::string(head.text) + "'",
                       head.line, head.col);
    }
  }
  for (const auto& [lname, line] : pending)
    if (prog.labels.at(lname) == prog.entries.size())
      throw ParseError("label '" + lname + "' has no entry after it", line);
  for (const ProgramEntry& e : prog.entries)
    if (e.kind == ProgramEntry::Kind::Jump && !prog.labels.count(e.label))
      throw ParseError("jump to undefined label '" + e.label + "'", e.line);
  return prog;
}

MemoryImage::MemoryImage(std::string description_name, std::string pc_hash,
                         unsigned word_width, std::uint64_t memory_words)
    : description_name_(std::move(description_name)),
      pc_hash_(std::move(pc_hash)),
      word_width_(word_width),
      memory_words_(memory_words) {
  if (word_width_ < 1 || word_width_ > 64)
    throw Error("image: word width must be in [1, 64]");
}

void MemoryImage::write(std::uint64_t address, std::uint64_t word) {
  if (address >= memory_words_)
    throw Error("image: address 0x" + hex_u64(address) + " outside memory of " +
                std::to_string(memory_words_) + " words");
  if (word_width_ < 64 && (word >> word_width_) != 0)
    throw Error("image: word 0x" + hex_u64(word) + " wider than " +
                std::to_string(word_width_) + " bits");
  auto [it, inserted] = words_.emplace(address, word);
  if (!inserted)
    throw Error("image: address 0x" + hex_u64(address) + " written twice");
}

std::optional<std::uint64_t> MemoryImage::read(std::uint64_t address) const {
  auto it = words_.find(address);
  if (it == words_.end()) return std::nullopt;
  return it->second;
}

std::string spec_hash(const HybridSpec& spec) {
  u64 h = 0xcbf29ce484222325ull;  // FNV-1a 64
  auto mix = [&](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
  };
  for (const HybridSegment& seg : spec.segments) {
    mix(to_string(seg.spec));
    if (seg.seed) mix(" seed=" + std::to_string(*seg.seed));
    if (seg.carry) mix(" carry=" + std::to_string(*seg.carry));
    mix("|");
  }
  return hex_u64_padded(h, 16);
}

MemoryImage map_program(const ProcessorDescription& d, const LinearProgram& p) {
  const std::size_t n = p.entries.size();
  if (!d.pc().period_at_least(n))
    throw Error("map: program of " + std::to_string(n) +
                " entries exceeds the PC cycle");

  std::vector<u64> addr(n);
  u64 state = d.reset_state().bits();
  for (std::size_t i = 0; i < n; ++i) {
    addr[i] = state;
    state = d.pc().step_bits(state);
  }

  const JumpField f = d.jump_field();
  const u64 field_mask =
      (f.width == 64 ? ~u64{0} : (u64{1} << f.width) - 1) << f.offset;
  MemoryImage img(d.name(), spec_hash(d.pc().spec()), d.word_width(),
                  d.memory_words());
  for (std::size_t i = 0; i < n; ++i) {
    const ProgramEntry& e = p.entries[i];
    u64 word = e.word;
    if (e.kind == ProgramEntry::Kind::Jump) {
      auto it = p.labels.find(e.label);
      if (it == p.labels.end())
        throw Error("map: jump to undefined label '" + e.label + "'");
      if (it->second >= n)
        throw Error("map: label '" + e.label + "' has no entry");
      u64 target = addr[it->second];
      if (f.width < 64 && (target >> f.width) != 0)
        throw Error("map: target 0x" + hex_u64(target) +
                    " wider than the jump field");
      word = (word & ~field_mask) | (target << f.offset);
    }
    img.write(addr[i], word);
  }
  return img;
}

std::vector<std::uint64_t> fetch_trace(const ProcessorDescription& d,
                                       const MemoryImage& img,
                                       std::uint64_t steps) {
  std::vector<u64> out;
  out.reserve(steps);
  u64 state = d.reset_state().bits();
  for (u64 i = 0; i < steps; ++i) {
    std::optional<u64> word = img.read(state);
    if (!word)
      throw Error("fetch: address 0x" + hex_u64(state) +
                  " never written (step " + std::to_string(i) + ")");
    out.push_back(*word);
    state = d.pc().step_bits(state);
  }
  return out;
}

std::string emit_image(const MemoryImage& img, ImageFormat format) {
  const unsigned hex_digits = (img.word_width() + 3) / 4;
  if (format == ImageFormat::Hex) {
    std::string out;
    u64 expect = 0;
    bool in_run = false;
    for (const auto& [addr, word] : img.words()) {
      if (!in_run || addr != expect) {
        out += "@" + hex_u64(addr) + "\n";
        in_run = true;
      }
      out += hex_u64_padded(word, hex_digits) + "\n";
      expect = addr + 1;
    }
    return out;
  }
  const unsigned word_bytes = (img.word_width() + 7) / 8;
  std::string out(img.memory_words() * word_bytes, '\0');
  for (const auto& [addr, word] : img.words())
    for (unsigned b = 0; b < word_bytes; ++b)
      out[addr * word_bytes + b] = static_cast<char>((word >> (8 * b)) & 0xff);
  return out;
}

}  // namespace fsrpc
