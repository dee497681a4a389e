#include "fsrpc/cachesim.hpp"

#include <bit>
#include <cstdio>

#include "fsrpc/error.hpp"
#include "fsrpc/fsr.hpp"

namespace fsrpc {

using gf2::u64;

void validate(const CacheConfig& cfg) {
  if (cfg.line_size_words == 0 || !std::has_single_bit(cfg.line_size_words))
    throw Error("cache: line size must be a power of two");
  if (cfg.num_lines == 0 || !std::has_single_bit(cfg.num_lines))
    throw Error("cache: line count must be a power of two");
  if (cfg.associativity == 0)
    throw Error("cache: associativity must be positive");
  if (cfg.associativity > cfg.num_lines ||
      cfg.num_lines % cfg.associativity != 0)
    throw Error("cache: associativity must divide the line count");
}

CacheModel::CacheModel(CacheConfig cfg) : cfg_(cfg) {
  validate(cfg_);
  num_sets_ = cfg_.num_lines / cfg_.associativity;
  line_shift_ = static_cast<unsigned>(std::countr_zero(cfg_.line_size_words));
  ways_.assign(cfg_.num_lines, Way{});
}

void CacheModel::reset() {
  ways_.assign(cfg_.num_lines, Way{});
  tick_ = 0;
}

bool CacheModel::access(std::uint64_t address) {
  const u64 line = address >> line_shift_;
  const u64 set = line % num_sets_;
  const u64 tag = line / num_sets_;
  Way* base = &ways_[set * cfg_.associativity];
  ++tick_;
  for (unsigned w = 0; w < cfg_.associativity; ++w) {
    if (base[w].valid && base[w].tag == tag) {
      base[w].last_used = tick_;
      return true;
    }
  }
  // Miss: fill the first invalid way, else evict the least recently used.
  Way* victim = base;
  for (unsigned w = 0; w < cfg_.associativity; ++w) {
    if (!base[w].valid) {
      victim = &base[w];
      break;
    }
    if (base[w].last_used < victim->last_used) victim = &base[w];
  }
  *victim = Way{tag, tick_, true};
  return false;
}

namespace {

std::string default_kind(const Hybrid& pc) {
  if (pc.segment_count() > 1) return "hybrid";
  const CounterSpec& spec = pc.spec().segments[0].spec;
  if (std::holds_alternative<Radix2Spec>(spec)) return "radix2";
  if (std::holds_alternative<ModNSpec>(spec)) return "modn";
  return std::string(family_name(std::get<FsrSpec>(spec).family));
}

}  // namespace

SimReport simulate(const Hybrid& pc, CounterState reset, const CacheConfig& cfg,
                   std::uint64_t steps, std::string pc_kind) {
  validate(cfg);
  if ((u64{1} << pc.width()) < cfg.line_size_words && pc.width() < 64)
    throw Error("cache: counter addresses less than one line");
  CacheModel cache(cfg);
  SimReport r;
  r.pc_kind = pc_kind.empty() ? default_kind(pc) : std::move(pc_kind);
  u64 state = reset.bits();
  for (u64 i = 0; i < steps; ++i) {
    if (cache.access(state))
      ++r.hits;
    else
      ++r.misses;
    ++r.accesses;
    state = pc.step_bits(state);
  }
  return r;
}

SimReport simulate(const Hybrid& pc, const CacheConfig& cfg, std::uint64_t steps,
                   std::string pc_kind) {
  return simulate(pc, pc.reset(), cfg, steps, std::move(pc_kind));
}

SimReport simulate_trace(std::span<const std::uint64_t> addresses,
                         const CacheConfig& cfg, std::string pc_kind) {
  validate(cfg);
  CacheModel cache(cfg);
  SimReport r;
  r.pc_kind = pc_kind.empty() ? "trace" : std::move(pc_kind);
  for (u64 a : addresses) {
    if (cache.access(a))
      ++r.hits;
    else
      ++r.misses;
    ++r.accesses;
  }
  return r;
}

std::vector<SimReport> compare(const std::vector<ComparePc>& pcs,
                               const CacheConfig& cfg, std::uint64_t steps) {
  if (pcs.empty()) return {};
  const unsigned w = pcs[0].pc.width();
  for (const ComparePc& p : pcs)
    if (p.pc.width() != w)
      throw Error("compare: counters must share the address width");
  std::vector<SimReport> rows;
  rows.reserve(pcs.size());
  for (const ComparePc& p : pcs)
    rows.push_back(simulate(p.pc, cfg, steps, p.kind));
  return rows;
}

std::string to_csv(std::span<const SimReport> reports) {
  std::string out = "pc_kind,accesses,misses,miss_rate\n";
  char buf[32];
  for (const SimReport& r : reports) {
    std::snprintf(buf, sizeof buf, "%.6f", r.miss_rate());
    out += r.pc_kind + "," + std::to_string(r.accesses) + "," +
           std::to_string(r.misses) + "," + buf + "\n";
  }
  return out;
}

}  // namespace fsrpc
