#include "fsrpc/fsr.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "fsrpc/error.hpp"

namespace fsrpc {

using gf2::u64;

std::string_view family_name(FsrFamily f) {
  switch (f) {
    case FsrFamily::Fibonacci: return "fibonacci";
    case FsrFamily::Galois: return "galois";
    case FsrFamily::RingGenerator: return "ring";
    case FsrFamily::Mfsr: return "mfsr";
    case FsrFamily::CellularAutomaton: return "ca";
  }
  return "?";
}

std::optional<FsrFamily> family_from_name(std::string_view name) {
  if (name == "fibonacci") return FsrFamily::Fibonacci;
  if (name == "galois") return FsrFamily::Galois;
  if (name == "ring") return FsrFamily::RingGenerator;
  if (name == "mfsr") return FsrFamily::Mfsr;
  if (name == "ca") return FsrFamily::CellularAutomaton;
  return std::nullopt;
}

namespace {

u64 width_mask(unsigned w) { return w == 64 ? ~u64{0} : (u64{1} << w) - 1; }

u64 taps_mask(const FsrSpec& spec) {
  u64 m = 0;
  for (unsigned t : spec.taps) m |= u64{1} << t;
  return m;
}

}  // namespace

void validate(const FsrSpec& spec) {
  const std::string fam(family_name(spec.family));
  if (spec.width < 1 || spec.width > 64)
    throw Error(fam + ": width must be in [1, 64]");
  auto want_empty = [&](bool cond, const char* field) {
    if (!cond) throw Error(fam + ": field '" + field + "' does not apply");
  };
  switch (spec.family) {
    case FsrFamily::Fibonacci:
    case FsrFamily::Galois: {
      want_empty(spec.conns.empty(), "conns");
      want_empty(spec.rule150_mask == 0, "rules");
      u64 seen = 0;
      for (unsigned t : spec.taps) {
        if (t >= spec.width)
          throw Error(fam + ": tap " + std::to_string(t) + " out of range for width " +
                      std::to_string(spec.width));
        if ((seen >> t) & 1) throw Error(fam + ": duplicate tap " + std::to_string(t));
        seen |= u64{1} << t;
      }
      break;
    }
    case FsrFamily::RingGenerator:
    case FsrFamily::Mfsr: {
      want_empty(spec.taps.empty(), "taps");
      want_empty(spec.rule150_mask == 0, "rules");
      u64 src_seen = 0, dst_seen = 0;
      for (const auto& c : spec.conns) {
        if (c.source >= spec.width || c.dest >= spec.width)
          throw Error(fam + ": connection (" + std::to_string(c.source) + "," +
                      std::to_string(c.dest) + ") out of range for width " +
                      std::to_string(spec.width));
        if ((dst_seen >> c.dest) & 1)
          throw Error(fam + ": fan-in above 2 at register " + std::to_string(c.dest));
        if ((src_seen >> c.source) & 1)
          throw Error(fam + ": fan-out above 2 at register " + std::to_string(c.source));
        src_seen |= u64{1} << c.source;
        dst_seen |= u64{1} << c.dest;
      }
      break;
    }
    case FsrFamily::CellularAutomaton: {
      want_empty(spec.taps.empty(), "taps");
      want_empty(spec.conns.empty(), "conns");
      if (spec.width < 64 && (spec.rule150_mask >> spec.width))
        throw Error(fam + ": rule mask wider than the cell array");
      break;
    }
  }
}

std::uint64_t fsr_step(const FsrSpec& spec, std::uint64_t state) {
  const unsigned w = spec.width;
  const u64 mask = width_mask(w);
  state &= mask;
  switch (spec.family) {
    case FsrFamily::Fibonacci: {
      u64 fb = static_cast<u64>(std::popcount(state & taps_mask(spec)) & 1);
      return ((state >> 1) | (fb << (w - 1))) & mask;
    }
    case FsrFamily::Galois: {
      u64 next = state >> 1;
      if (state & 1) next ^= taps_mask(spec);
      return next & mask;
    }
    case FsrFamily::RingGenerator:
    case FsrFamily::Mfsr: {
      u64 next = (state >> 1) | ((state & 1) << (w - 1));  // b_i <- b_{(i+1) mod w}
      for (const auto& c : spec.conns) next ^= ((state >> c.source) & 1) << c.dest;
      return next & mask;
    }
    case FsrFamily::CellularAutomaton: {
      return ((state << 1) ^ (state >> 1) ^ (state & spec.rule150_mask)) & mask;
    }
  }
  return 0;
}

gf2::Matrix transition_matrix(const FsrSpec& spec) {
  const unsigned w = spec.width;
  gf2::Matrix m(w);
  switch (spec.family) {
    case FsrFamily::Fibonacci:
      for (unsigned i = 0; i + 1 < w; ++i) m.set_row(i, u64{1} << (i + 1));
      m.set_row(w - 1, taps_mask(spec));
      break;
    case FsrFamily::Galois: {
      u64 tm = taps_mask(spec);
      for (unsigned i = 0; i < w; ++i) {
        u64 row = (i + 1 < w) ? (u64{1} << (i + 1)) : 0;
        if ((tm >> i) & 1) row ^= 1;  // b_0 recirculates into this input
        m.set_row(i, row);
      }
      break;
    }
    case FsrFamily::RingGenerator:
    case FsrFamily::Mfsr:
      for (unsigned i = 0; i < w; ++i) m.set_row(i, u64{1} << ((i + 1) % w));
      for (const auto& c : spec.conns)
        m.set_row(c.dest, m.row(c.dest) ^ (u64{1} << c.source));
      break;
    case FsrFamily::CellularAutomaton:
      for (unsigned i = 0; i < w; ++i) {
        u64 row = 0;
        if (i > 0) row |= u64{1} << (i - 1);
        if (i + 1 < w) row |= u64{1} << (i + 1);
        if ((spec.rule150_mask >> i) & 1) row |= u64{1} << i;
        m.set_row(i, row);
      }
      break;
  }
  return m;
}

gf2::Poly char_poly_of(const FsrSpec& spec) { return gf2::char_poly(transition_matrix(spec)); }

namespace {

unsigned ceil_log2(unsigned v) { return v <= 1 ? 0 : std::bit_width(v - 1); }

}  // namespace

StructuralMetrics metrics(const FsrSpec& spec) {
  const unsigned w = spec.width;
  StructuralMetrics out;
  std::vector<unsigned> fan_in(w, 0), fan_out(w, 0);
  switch (spec.family) {
    case FsrFamily::Fibonacci: {
      for (unsigned i = 0; i + 1 < w; ++i) fan_in[i] = 1;  // shift neighbour
      fan_in[w - 1] = static_cast<unsigned>(spec.taps.size());
      for (unsigned r = 1; r < w; ++r) fan_out[r] = 1;
      for (unsigned t : spec.taps) fan_out[t] += 1;  // feeds the XOR tree
      out.xor_gate_count = spec.taps.empty() ? 0 : 1;  // one LUT-wide tree
      out.raw_xor2_count =
          spec.taps.size() > 1 ? static_cast<unsigned>(spec.taps.size()) - 1 : 0;
      break;
    }
    case FsrFamily::Galois: {
      u64 tm = taps_mask(spec);
      for (unsigned i = 0; i < w; ++i) {
        fan_in[i] = (i + 1 < w ? 1u : 0u) + (((tm >> i) & 1) ? 1u : 0u);
        fan_out[i] = (i >= 1) ? 1u : static_cast<unsigned>(spec.taps.size());
      }
      unsigned gates = 0;
      for (unsigned t : spec.taps)
        if (t + 1 < w) ++gates;  // the wrap into b_{w-1} is a plain wire
      out.xor_gate_count = gates;
      out.raw_xor2_count = gates;
      break;
    }
    case FsrFamily::RingGenerator:
    case FsrFamily::Mfsr: {
      for (unsigned i = 0; i < w; ++i) fan_in[i] = fan_out[i] = 1;  // the ring
      for (const auto& c : spec.conns) {
        fan_in[c.dest] += 1;
        fan_out[c.source] += 1;
      }
      out.xor_gate_count = static_cast<unsigned>(spec.conns.size());
      out.raw_xor2_count = out.xor_gate_count;
      break;
    }
    case FsrFamily::CellularAutomaton: {
      for (unsigned i = 0; i < w; ++i) {
        unsigned inputs = (i > 0 ? 1u : 0u) + (i + 1 < w ? 1u : 0u) +
                          (((spec.rule150_mask >> i) & 1) ? 1u : 0u);
        fan_in[i] = inputs;
        fan_out[i] = (i >= 1 ? 1u : 0u) + (i + 1 < w ? 1u : 0u) +
                     (((spec.rule150_mask >> i) & 1) ? 1u : 0u);
        if (inputs >= 2) {
          out.xor_gate_count += 1;
          out.raw_xor2_count += inputs - 1;
        }
      }
      break;
    }
  }
  out.max_fan_in = *std::max_element(fan_in.begin(), fan_in.end());
  out.max_fan_out = *std::max_element(fan_out.begin(), fan_out.end());
  unsigned depth = 0;
  for (unsigned v : fan_in) depth = std::max(depth, ceil_log2(v));
  out.max_gate_depth = std::max(1u, depth);  // register-to-register floor
  return out;
}

FsrSpec fibonacci_from_poly(gf2::Poly p) {
  int d = p.degree();
  if (d < 1 || d > 64) throw Error("fibonacci: polynomial degree must be in [1, 64]");
  FsrSpec spec;
  spec.family = FsrFamily::Fibonacci;
  spec.width = static_cast<unsigned>(d);
  for (unsigned t = 0; t < spec.width; ++t)
    if (p.coeff(t)) spec.taps.push_back(t);
  return spec;
}

FsrSpec galois_from_poly(gf2::Poly p) {
  int d = p.degree();
  if (d < 1 || d > 64) throw Error("galois: polynomial degree must be in [1, 64]");
  if (!p.coeff(0)) throw Error("galois: polynomial needs a nonzero constant term");
  FsrSpec spec;
  spec.family = FsrFamily::Galois;
  spec.width = static_cast<unsigned>(d);
  // Middle term x^e lands at register input W-1-e; the leading term is the
  // plain wrap into the top bit. This keeps char_poly_of an exact inverse.
  for (unsigned e = spec.width - 1; e >= 1; --e)
    if (p.coeff(e)) spec.taps.push_back(spec.width - 1 - e);
  spec.taps.push_back(spec.width - 1);
  return spec;
}

std::optional<FsrSpec> ring_from_poly(gf2::Poly p) {
  int d = p.degree();
  if (d < 2 || d > 64) throw Error("ring: polynomial degree must be in [2, 64]");
  if (!p.coeff(0)) return std::nullopt;  // the bare ring already contributes the 1
  const unsigned n = static_cast<unsigned>(d);
  std::vector<unsigned> spans;  // connection (s, s+span) contributes x^(n-1-span)
  for (unsigned e = 1; e < n; ++e)
    if (p.coeff(e)) spans.push_back(n - 1 - e);

  FsrSpec spec;
  spec.family = FsrFamily::RingGenerator;
  spec.width = n;
  if (spans.empty()) return spec;  // p = x^n + 1, the bare ring

  // Spans can interact and spoil the characteristic polynomial, so search
  // source placements depth-first (lexicographically) and keep the first one
  // that verifies. Bounded so a pathological polynomial fails cleanly.
  const std::size_t m = spans.size();
  std::vector<unsigned> src(m, 0);
  u64 used_src = 0, used_dst = 0;
  std::uint64_t verifications = 0, nodes = 0;
  const std::uint64_t kMaxVerifications = 20000, kMaxNodes = 2000000;

  // Fast verification: p(M) must annihilate the basis vector b_0. For
  // irreducible p that already forces char poly == p (the vector's minimal
  // polynomial divides p and has full degree); otherwise the full
  // characteristic polynomial settles the rare survivor.
  const bool p_irreducible = gf2::is_irreducible(p);
  auto realizes = [&](const FsrSpec& cand) {
    u64 acc = 0, s = 1;
    for (unsigned k = 0; k <= n; ++k) {
      if (p.coeff(k)) acc ^= s;
      s = fsr_step(cand, s);
    }
    if (acc != 0) return false;
    return p_irreducible || char_poly_of(cand) == p;
  };

  auto dest_of = [&](std::size_t j, unsigned s) { return (s + spans[j]) % n; };

  std::size_t j = 0;
  unsigned cand = 0;
  while (true) {
    if (++nodes > kMaxNodes) return std::nullopt;
    if (cand >= n) {  // backtrack
      if (j == 0) return std::nullopt;
      --j;
      cand = src[j];
      used_src &= ~(u64{1} << cand);
      used_dst &= ~(u64{1} << dest_of(j, cand));
      ++cand;
      continue;
    }
    unsigned dst = dest_of(j, cand);
    if (((used_src >> cand) & 1) || ((used_dst >> dst) & 1)) {
      ++cand;
      continue;
    }
    src[j] = cand;
    used_src |= u64{1} << cand;
    used_dst |= u64{1} << dst;
    if (j + 1 == m) {
      spec.conns.clear();
      for (std::size_t i = 0; i < m; ++i)
        spec.conns.push_back({src[i], dest_of(i, src[i])});
      std::sort(spec.conns.begin(), spec.conns.end());
      if (++verifications > kMaxVerifications) return std::nullopt;
      if (realizes(spec)) return spec;
      used_src &= ~(u64{1} << cand);
      used_dst &= ~(u64{1} << dst);
      ++cand;
    } else {
      ++j;
      cand = 0;
    }
  }
}

// ---- maximal-cycle search -------------------------------------------------

namespace {

// Lexicographic k-combinations out of [0, m). Returns false when exhausted.
bool next_combination(std::vector<unsigned>& idx, unsigned m) {
  const std::size_t k = idx.size();
  if (k == 0) return false;
  std::size_t i = k;
  while (i-- > 0) {
    if (idx[i] + (k - i) <= m) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

void init_combination(std::vector<unsigned>& idx, std::size_t k) {
  idx.resize(k);
  std::iota(idx.begin(), idx.end(), 0u);
}

// Full-cycle cross-check used for narrow widths: from state 1, the orbit must
// be a pure cycle through every nonzero state.
bool walk_is_maximal(const FsrSpec& spec) {
  const u64 period = width_mask(spec.width);  // 2^w - 1
  u64 s = 1;
  u64 count = 0;
  do {
    s = fsr_step(spec, s);
    if (++count > period) return false;
  } while (s != 1);
  return count == period;
}

class MaximalSearch {
public:
  MaximalSearch(unsigned width, std::size_t max_results, SearchBudget budget)
      : width_(width), max_results_(max_results), budget_(budget) {}

  // Bills one candidate against the budget; false once it is spent.
  bool charge() { return examined_++ < budget_.max_candidates; }

  // Primitivity test plus collection. Returns true while more results are
  // wanted.
  bool consider(const FsrSpec& spec) {
    if (!gf2::is_primitive(char_poly_of(spec))) return true;
    return accept(spec);
  }

  // Collects a spec already known to have a primitive characteristic
  // polynomial.
  bool accept(const FsrSpec& spec) {
    if (width_ <= 16 && !walk_is_maximal(spec))
      throw Error("internal: primitive spec failed the cycle cross-check");
    results_.push_back(spec);
    return results_.size() < max_results_;
  }

  std::vector<FsrSpec> take() { return std::move(results_); }

private:
  unsigned width_;
  std::size_t max_results_;
  SearchBudget budget_;
  std::uint64_t examined_ = 0;
  std::vector<FsrSpec> results_;
};

void search_tapped(FsrFamily family, unsigned w, MaximalSearch& search) {
  // Tap sets that could possibly be primitive always contain the anchor
  // position (0 for Fibonacci feedback, w-1 for Galois recirculation), so
  // enumerate subsets around it: smallest tap count first, then
  // lexicographic on the remaining positions.
  const bool fib = family == FsrFamily::Fibonacci;
  const unsigned anchor = fib ? 0 : w - 1;
  for (std::size_t k = 0; k < w; ++k) {
    std::vector<unsigned> idx;
    init_combination(idx, k);
    while (true) {
      FsrSpec spec;
      spec.family = family;
      spec.width = w;
      spec.taps.reserve(k + 1);
      if (fib) spec.taps.push_back(anchor);
      for (unsigned i : idx) spec.taps.push_back(fib ? i + 1 : i);
      if (!fib) spec.taps.push_back(anchor);
      if (!search.charge() || !search.consider(spec)) return;
      if (!next_combination(idx, w - 1)) break;
    }
  }
}

void search_ring(unsigned w, MaximalSearch& search) {
  // Enumerate characteristic polynomials smallest term count first, realize
  // the primitive ones on the ring.
  for (std::size_t k = 1; k < w; ++k) {
    std::vector<unsigned> idx;
    init_combination(idx, k - 1);
    while (true) {
      gf2::u128 bits = (gf2::u128(1) << w) | 1u;
      for (unsigned i : idx) bits |= gf2::u128(1) << (i + 1);
      gf2::Poly p(bits);
      if (!search.charge()) return;
      if (gf2::is_primitive(p)) {
        if (auto spec = ring_from_poly(p)) {
          if (!search.accept(*spec)) return;
        }
      }
      if (!next_combination(idx, w - 1)) break;
    }
  }
}

void search_mfsr(unsigned w, MaximalSearch& search) {
  // Connection lists ordered by count, then lexicographically by (source,
  // dest) pairs; sources and destinations stay pairwise distinct to respect
  // the fan limits.
  const unsigned universe = w * w;
  for (std::size_t c = 1; c <= w; ++c) {
    std::vector<unsigned> idx;
    init_combination(idx, c);
    while (true) {
      // Every enumerated combination is billed, filtered or not, so the
      // budget bounds total work even where the fan limits reject most of
      // the space.
      if (!search.charge()) return;
      u64 used_src = 0, used_dst = 0;
      bool ok = true;
      for (unsigned paircode : idx) {
        unsigned s = paircode / w, d = paircode % w;
        if (((used_src >> s) & 1) || ((used_dst >> d) & 1)) {
          ok = false;
          break;
        }
        used_src |= u64{1} << s;
        used_dst |= u64{1} << d;
      }
      if (ok) {
        FsrSpec spec;
        spec.family = FsrFamily::Mfsr;
        spec.width = w;
        for (unsigned paircode : idx)
          spec.conns.push_back({paircode / w, paircode % w});
        if (!search.consider(spec)) return;
      }
      if (!next_combination(idx, universe)) break;
    }
  }
}

void search_ca(unsigned w, MaximalSearch& search) {
  const u64 ceiling = width_mask(w);
  for (u64 rules = 0;; ++rules) {
    FsrSpec spec;
    spec.family = FsrFamily::CellularAutomaton;
    spec.width = w;
    spec.rule150_mask = rules;
    if (!search.charge() || !search.consider(spec)) return;
    if (rules == ceiling) return;
  }
}

}  // namespace

std::vector<FsrSpec> find_maximal(FsrFamily family, unsigned width,
                                  std::size_t max_results, SearchBudget budget) {
  if (width < 2 || width > 64)
    throw Error("find_maximal: width must be in [2, 64]");
  if (max_results == 0) return {};
  MaximalSearch search(width, max_results, budget);
  switch (family) {
    case FsrFamily::Fibonacci:
    case FsrFamily::Galois:
      search_tapped(family, width, search);
      break;
    case FsrFamily::RingGenerator:
      search_ring(width, search);
      break;
    case FsrFamily::Mfsr:
      search_mfsr(width, search);
      break;
    case FsrFamily::CellularAutomaton:
      search_ca(width, search);
      break;
  }
  return search.take();
}

std::string to_string(const FsrSpec& spec) {
  std::string out = "family=" + std::string(family_name(spec.family)) +
                    " width=" + std::to_string(spec.width);
  switch (spec.family) {
    case FsrFamily::Fibonacci:
    case FsrFamily::Galois: {
      std::vector<unsigned> taps = spec.taps;
      std::sort(taps.begin(), taps.end());
      out += " taps=[";
      for (std::size_t i = 0; i < taps.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(taps[i]);
      }
      out += ']';
      break;
    }
    case FsrFamily::RingGenerator:
    case FsrFamily::Mfsr: {
      std::vector<FsrConnection> conns = spec.conns;
      std::sort(conns.begin(), conns.end());
      out += " conns=[";
      for (std::size_t i = 0; i < conns.size(); ++i) {
        if (i) out += ',';
        out += '(' + std::to_string(conns[i].source) + ',' +
               std::to_string(conns[i].dest) + ')';
      }
      out += ']';
      break;
    }
    case FsrFamily::CellularAutomaton: {
      out += " rules=[";
      for (unsigned i = 0; i < spec.width; ++i) {
        if (i) out += ',';
        out += ((spec.rule150_mask >> i) & 1) ? "150" : "90";
      }
      out += ']';
      break;
    }
  }
  return out;
}

}  // namespace fsrpc
