#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fsrpc/hybrid.hpp"

namespace fsrpc {

// Instruction-cache geometry. Words per line and line count must be powers of
// two; associativity 1 is direct-mapped, num_lines is fully associative, and
// anything between is n-way with least-recently-used replacement.
struct CacheConfig {
  std::uint64_t line_size_words = 8;
  std::uint64_t num_lines = 16;
  unsigned associativity = 1;
};

void validate(const CacheConfig& cfg);

// Exact counts from one replay. accesses == hits + misses by construction.
struct SimReport {
  std::string pc_kind;
  std::uint64_t accesses = 0;
  std::uint64_t misses = 0;  // line fetches
  std::uint64_t hits = 0;

  double miss_rate() const {
    return accesses == 0 ? 0.0 : static_cast<double>(misses) / static_cast<double>(accesses);
  }
};

// Tag store with LRU tracked by access tick; no data is modelled, only
// presence. Deterministic for a given access sequence.
class CacheModel {
public:
  explicit CacheModel(CacheConfig cfg);

  const CacheConfig& config() const { return cfg_; }
  void reset();                        // back to cold (all ways invalid)
  bool access(std::uint64_t address);  // true on hit, false on line fetch

private:
  struct Way {
    std::uint64_t tag = 0;
    std::uint64_t last_used = 0;
    bool valid = false;
  };

  CacheConfig cfg_;
  std::vector<Way> ways_;  // num_sets x associativity, row-major
  std::uint64_t num_sets_;
  unsigned line_shift_;
  std::uint64_t tick_ = 0;
};

// Replays `steps` sequential fetch addresses of the counter through a cold
// cache. The counter must address at least one full line. An empty pc_kind
// picks a default label from the counter layout.
SimReport simulate(const Hybrid& pc, CounterState reset, const CacheConfig& cfg,
                   std::uint64_t steps, std::string pc_kind = {});
SimReport simulate(const Hybrid& pc, const CacheConfig& cfg, std::uint64_t steps,
                   std::string pc_kind = {});  // from pc.reset()

// Replays an externally supplied address stream (e.g. a branchy trace).
SimReport simulate_trace(std::span<const std::uint64_t> addresses,
                         const CacheConfig& cfg, std::string pc_kind = {});

struct ComparePc {
  std::string kind;
  Hybrid pc;
};

// One row per counter over the identical traversal length. All counters must
// share the address width.
std::vector<SimReport> compare(const std::vector<ComparePc>& pcs,
                               const CacheConfig& cfg, std::uint64_t steps);

// Header plus one row per report: pc_kind,accesses,misses,miss_rate.
std::string to_csv(std::span<const SimReport> reports);

}  // namespace fsrpc
