#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fsrpc {

enum class LatencyKind { Radix2, Fsr, Hybrid };

// Fitted combinational-latency coefficients. The defaults encode the
// published place-and-route fit for a Spartan-3 with ISE 9.2: a ripple
// increment costs 2.9 + 0.064*N ns (fit valid above 6 bits) while shift
// register feedback sits at a constant 1.8 ns. No hybrid fit was published;
// the offset above the FSR constant defaults to 0 and is overridable.
struct LatencyCoeffs {
  double intercept_ns = 2.9;
  double slope_ns_per_bit = 0.064;
  double fsr_constant_ns = 1.8;
  double hybrid_offset_ns = 0.0;
};

// Where the default coefficients were measured. Estimates are fits, not
// measurements, and every emitted number carries this label.
inline constexpr const char* kLatencyProvenance = "Spartan-3, ISE 9.2";

struct LatencyEstimate {
  double ns = 0.0;
  // False when the fit does not cover this point: radix-2 below 7 bits
  // (computed anyway) and every hybrid value (no published fit).
  bool in_fit_range = false;
  std::string provenance;
};

// Model evaluation for a width in [2, 64]; throws Error outside that range.
LatencyEstimate estimate(LatencyKind kind, unsigned width,
                         const LatencyCoeffs& c = {});

struct CrossoverRow {
  unsigned width = 0;
  double radix2_ns = 0.0;
  double fsr_ns = 0.0;
  double ratio = 0.0;  // radix2 / fsr, strictly increasing in width
};

std::vector<CrossoverRow> crossover_table(std::span<const unsigned> widths,
                                          const LatencyCoeffs& c = {});

// Columns N,radix2_ns,fsr_ns,ratio; values at 3 decimal places.
std::string crossover_csv(std::span<const CrossoverRow> rows);

// Long-form plot data, columns N,model,latency_ns, one radix2 and one fsr row
// per width.
std::string plot_csv(std::span<const unsigned> widths,
                     const LatencyCoeffs& c = {});

// key=value override file: intercept, slope, fsr_constant, hybrid_offset.
// Unknown keys are rejected with their line number.
LatencyCoeffs load_coeffs(std::string_view text);

}  // namespace fsrpc
