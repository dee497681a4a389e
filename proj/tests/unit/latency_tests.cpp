#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "fsrpc/error.hpp"
#include "fsrpc/latency.hpp"

using fsrpc::LatencyCoeffs;
using fsrpc::LatencyKind;

TEST_CASE("binary-counter latency follows the published linear fit") {
  // 2.9 ns + 0.064 ns/bit, pinned to 1e-9.
  const struct {
    unsigned width;
    double ns;
  } rows[] = {{7, 3.348}, {8, 3.412}, {16, 3.924}, {32, 4.948}, {64, 6.996}};
  for (const auto& row : rows) {
    const auto e = fsrpc::estimate(LatencyKind::Radix2, row.width);
    CHECK(std::abs(e.ns - row.ns) < 1e-9);
    CHECK(e.in_fit_range);
  }
  // The fit was measured from 7 bits up; smaller widths extrapolate.
  CHECK_FALSE(fsrpc::estimate(LatencyKind::Radix2, 6).in_fit_range);
  CHECK_FALSE(fsrpc::estimate(LatencyKind::Radix2, 2).in_fit_range);
}

TEST_CASE("feedback latency is width-independent") {
  for (unsigned w : {2u, 7u, 10u, 32u, 64u}) {
    const auto e = fsrpc::estimate(LatencyKind::Fsr, w);
    CHECK(e.ns == 1.8);
    CHECK(e.in_fit_range);
  }
}

TEST_CASE("hybrid latency is flagged as extrapolation") {
  const auto e = fsrpc::estimate(LatencyKind::Hybrid, 10);
  CHECK(e.ns == 1.8);  // zero offset by default
  CHECK_FALSE(e.in_fit_range);
  CHECK(e.provenance.find("unpublished") != std::string::npos);

  LatencyCoeffs c;
  c.hybrid_offset_ns = 0.25;
  CHECK(fsrpc::estimate(LatencyKind::Hybrid, 10, c).ns == doctest::Approx(2.05));
}

TEST_CASE("estimates carry their measurement context") {
  const auto e = fsrpc::estimate(LatencyKind::Radix2, 10);
  CHECK(e.provenance.find("Spartan-3") != std::string::npos);
  CHECK(e.provenance.find("ISE 9.2") != std::string::npos);
}

TEST_CASE("width bounds") {
  CHECK_THROWS_AS(fsrpc::estimate(LatencyKind::Radix2, 1), fsrpc::Error);
  CHECK_THROWS_AS(fsrpc::estimate(LatencyKind::Radix2, 65), fsrpc::Error);
  CHECK_THROWS_AS(fsrpc::estimate(LatencyKind::Fsr, 0), fsrpc::Error);
}

TEST_CASE("crossover table: ratio grows strictly with width") {
  std::vector<unsigned> widths;
  for (unsigned w = 2; w <= 64; ++w) widths.push_back(w);
  const auto rows = fsrpc::crossover_table(widths);
  REQUIRE(rows.size() == 63);
  for (std::size_t i = 1; i < rows.size(); ++i)
    CHECK(rows[i].ratio > rows[i - 1].ratio);

  // Spot-pin one interior row.
  const auto& r30 = rows[28];
  CHECK(r30.width == 30);
  CHECK(std::abs(r30.radix2_ns - 4.82) < 1e-9);
  CHECK(std::abs(r30.ratio - 4.82 / 1.8) < 1e-9);
}

TEST_CASE("csv renderings are stable") {
  const unsigned widths[] = {7, 8};
  const auto rows = fsrpc::crossover_table(widths);
  CHECK(fsrpc::crossover_csv(rows) ==
        "N,radix2_ns,fsr_ns,ratio\n"
        "7,3.348,1.800,1.860\n"
        "8,3.412,1.800,1.896\n");

  const unsigned one[] = {7};
  CHECK(fsrpc::plot_csv(one) ==
        "N,model,latency_ns\n"
        "7,radix2,3.348\n"
        "7,fsr,1.800\n");
}

TEST_CASE("coefficient files: overrides, comments, rejections") {
  const auto c = fsrpc::load_coeffs(
      "# measured elsewhere\nintercept=3.0\nslope=0.1\n\nfsr_constant=2.0\n"
      "hybrid_offset=0.5\n");
  CHECK(c.intercept_ns == 3.0);
  CHECK(c.slope_ns_per_bit == 0.1);
  CHECK(c.fsr_constant_ns == 2.0);
  CHECK(c.hybrid_offset_ns == 0.5);
  CHECK(fsrpc::estimate(LatencyKind::Radix2, 10, c).ns == doctest::Approx(4.0));

  // Partial files keep the remaining defaults.
  const auto partial = fsrpc::load_coeffs("slope=1.0\n");
  CHECK(partial.intercept_ns == 2.9);
  CHECK(partial.slope_ns_per_bit == 1.0);

  try {
    fsrpc::load_coeffs("intercept=3.0\nwavelength=500\n");
    FAIL("unknown coefficient must be rejected");
  } catch (const fsrpc::ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(fsrpc::load_coeffs("intercept=fast\n"), fsrpc::ParseError);
}
