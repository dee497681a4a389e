#include "fsrpc/latency.hpp"

#include <charconv>
#include <cstdio>

#include "fsrpc/error.hpp"

namespace fsrpc {

LatencyEstimate estimate(LatencyKind kind, unsigned width,
                         const LatencyCoeffs& c) {
  if (width < 2 || width > 64)
    throw Error("latency: width " + std::to_string(width) +
                " outside the model range [2, 64]");
  LatencyEstimate e;
  e.provenance = kLatencyProvenance;
  switch (kind) {
    case LatencyKind::Radix2:
      e.ns = c.intercept_ns + c.slope_ns_per_bit * width;
      e.in_fit_range = width > 6;
      break;
    case LatencyKind::Fsr:
      e.ns = c.fsr_constant_ns;
      e.in_fit_range = true;
      break;
    case LatencyKind::Hybrid:
      e.ns = c.fsr_constant_ns + c.hybrid_offset_ns;
      e.in_fit_range = false;  // no published fit for the hybrid offset
      e.provenance += " (hybrid offset unpublished)";
      break;
  }
  return e;
}

std::vector<CrossoverRow> crossover_table(std::span<const unsigned> widths,
                                          const LatencyCoeffs& c) {
  std::vector<CrossoverRow> rows;
  rows.reserve(widths.size());
  for (unsigned w : widths) {
    CrossoverRow r;
    r.width = w;
    r.radix2_ns = estimate(LatencyKind::Radix2, w, c).ns;
    r.fsr_ns = estimate(LatencyKind::Fsr, w, c).ns;
    r.ratio = r.radix2_ns / r.fsr_ns;
    rows.push_back(r);
  }
  return rows;
}

namespace {

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

std::string crossover_csv(std::span<const CrossoverRow> rows) {
  std::string out = "N,radix2_ns,fsr_ns,ratio\n";
  for (const CrossoverRow& r : rows)
    out += std::to_string(r.width) + "," + fmt3(r.radix2_ns) + "," +
           fmt3(r.fsr_ns) + "," + fmt3(r.ratio) + "\n";
  return out;
}

std::string plot_csv(std::span<const unsigned> widths, const LatencyCoeffs& c) {
  std::string out = "N,model,latency_ns\n";
  for (unsigned w : widths) {
    out += std::to_string(w) + ",radix2," +
           fmt3(estimate(LatencyKind::Radix2, w, c).ns) + "\n";
    out += std::to_string(w) + ",fsr," +
           fmt3(estimate(LatencyKind::Fsr, w, c).ns) + "\n";
  }
  return out;
}

LatencyCoeffs load_coeffs(std::string_view text) {
  LatencyCoeffs c;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    ++line_no;
    if (std::size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t'))
      line.remove_prefix(1);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t' ||
                             line.back() == '\r'))
      line.remove_suffix(1);
    if (!line.empty()) {
      std::size_t eq = line.find('=');
      if (eq == std::string_view::npos || eq == 0)
        throw ParseError("expected key=value", line_no);
      std::string_view key = line.substr(0, eq);
      std::string_view value = line.substr(eq + 1);
      double v = 0.0;
      auto [ptr, ec] =
          std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ParseError("invalid number '" + std::string(value) + "'", line_no);
      if (key == "intercept") c.intercept_ns = v;
      else if (key == "slope") c.slope_ns_per_bit = v;
      else if (key == "fsr_constant") c.fsr_constant_ns = v;
      else if (key == "hybrid_offset") c.hybrid_offset_ns = v;
      else
        throw ParseError("unknown coefficient '" + std::string(key) + "'",
                         line_no);
    }
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
  return c;
}

}  // namespace fsrpc
