// End-to-end runs of the installed command-line tool. Each case drives the
// real binary (path injected by the build) through a shell, captures both
// streams, and checks exit codes against the documented contract:
// 0 success, 1 domain error, 2 usage error.
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

class TempDir {
 public:
  explicit TempDir(const char* tag) {
    dir_ = fs::temp_directory_path() /
           ("fsrpc_cli_" + std::string(tag) + "_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~TempDir() { fs::remove_all(dir_); }
  const fs::path& path() const { return dir_; }

 private:
  fs::path dir_;
};

// `extra_env` is prepended verbatim, e.g. "FSRPC_COEFFS=/tmp/c".
RunResult run(const std::string& args, const TempDir& tmp,
              const std::string& extra_env = {}) {
  const fs::path out_f = tmp.path() / "stdout.txt";
  const fs::path err_f = tmp.path() / "stderr.txt";
  std::string cmd;
  if (!extra_env.empty()) cmd += extra_env + " ";
  cmd += std::string(FSRPC_CLI_PATH) + " " + args + " >" + out_f.string() +
         " 2>" + err_f.string();
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out_f);
  r.err = slurp(err_f);
  return r;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

const std::string kFixture = std::string(FSRPC_FIXTURE_DIR) + "/tta16.procdesc";

}  // namespace

TEST_CASE("cli: find lists maximal registers, canonical members first") {
  TempDir tmp("find");
  const auto r = run("find fibonacci 8 3", tmp);
  CHECK(r.exit_code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "family=fibonacci width=8 taps=[0,1,2,7]");

  CHECK(run("find galois 8", tmp).out ==
        "family=galois width=8 taps=[0,1,6,7]\n");
  CHECK(run("find ring 8", tmp).out ==
        "family=ring width=8 conns=[(0,6),(2,7),(3,3)]\n");
  CHECK(run("find mfsr 8", tmp).out ==
        "family=mfsr width=8 conns=[(0,0),(1,5)]\n");
  CHECK(run("find ca 8", tmp).exit_code == 0);
}

TEST_CASE("cli: usage errors exit 2, domain errors exit 1") {
  TempDir tmp("errors");
  CHECK(run("find bogus 8", tmp).exit_code == 2);
  CHECK(run("find fibonacci 1", tmp).exit_code == 2);  // width below range
  CHECK(run("find fibonacci", tmp).exit_code == 2);    // missing width
  CHECK(run("frobnicate", tmp).exit_code == 2);        // unknown subcommand
  CHECK(run("", tmp).exit_code == 2);                  // a subcommand is required
  CHECK(run("--help", tmp).exit_code == 0);

  const auto usage = run("find bogus 8", tmp);
  CHECK(usage.err.find("usage error") != std::string::npos);

  const auto missing = run("seq --desc /nonexistent.procdesc", tmp);
  CHECK(missing.exit_code == 2);  // flagged by file-existence validation
}

TEST_CASE("cli: seq prints bare-hex fetch addresses") {
  TempDir tmp("seq");
  CHECK(run("seq --family radix2 --width 4 --count 5", tmp).out ==
        "0\n1\n2\n3\n4\n");

  // Description-driven: the 10-bit hybrid starts at 0x8 and sweeps the line.
  const auto r = run("seq --desc " + kFixture + " --count 9", tmp);
  CHECK(r.exit_code == 0);
  CHECK(r.out == "8\n9\na\nb\nc\nd\ne\nf\n208\n");

  // Without explicit feedback the tool searches and reports its pick.
  const auto picked = run("seq --family mfsr --width 10 --count 1", tmp);
  CHECK(picked.exit_code == 0);
  CHECK(picked.out == "1\n");
  CHECK(picked.err.find("family=mfsr width=10 conns=[(0,2)]") !=
        std::string::npos);

  // Seeding a feedback register with zero parks it on the fixed point.
  const auto stuck =
      run("seq --family mfsr --width 10 --seed 0x0 --count 2", tmp);
  CHECK(stuck.out == "0\n0\n");
  CHECK(stuck.err.find("zero fixed point") != std::string::npos);
}

TEST_CASE("cli: asm maps programs into memory images") {
  TempDir tmp("asm");
  spit(tmp.path() / "p.prog", "word 0xAAAA\nword 0xBBBB\n");
  const std::string img = (tmp.path() / "img.hex").string();

  const auto r = run("asm --desc " + kFixture + " --program " +
                         (tmp.path() / "p.prog").string() + " --out " + img,
                     tmp);
  CHECK(r.exit_code == 0);
  CHECK(slurp(img) == "@8\naaaa\nbbbb\n");

  // Binary format: full memory, two bytes per 16-bit word, little-endian.
  const std::string bin = (tmp.path() / "img.bin").string();
  CHECK(run("asm --desc " + kFixture + " --program " +
                (tmp.path() / "p.prog").string() + " --format binary --out " +
                bin,
            tmp)
            .exit_code == 0);
  const std::string bytes = slurp(bin);
  REQUIRE(bytes.size() == 2048);
  CHECK(static_cast<unsigned char>(bytes[16]) == 0xaa);
  CHECK(static_cast<unsigned char>(bytes[17]) == 0xaa);
  CHECK(static_cast<unsigned char>(bytes[18]) == 0xbb);
  CHECK(static_cast<unsigned char>(bytes[19]) == 0xbb);
  CHECK(bytes[0] == 0);

  spit(tmp.path() / "bad.prog", "jump 0x0 nowhere\n");
  const auto bad = run("asm --desc " + kFixture + " --program " +
                           (tmp.path() / "bad.prog").string(),
                       tmp);
  CHECK(bad.exit_code == 1);
  CHECK(bad.err.find("error:") != std::string::npos);
}

TEST_CASE("cli: cachesim reports misses for counters and raw traces") {
  TempDir tmp("cache");
  const auto r = run("cachesim --desc " + kFixture + " --steps 1016", tmp);
  CHECK(r.exit_code == 0);
  CHECK(r.out ==
        "pc_kind,accesses,misses,miss_rate\n"
        "hybrid,1016,127,0.125000\n");

  const auto cmp =
      run("cachesim --desc " + kFixture + " --steps 1016 --compare", tmp);
  CHECK(cmp.exit_code == 0);
  CHECK(cmp.out.find("radix2,1016,127,0.125000") != std::string::npos);
  CHECK(cmp.out.find("hybrid,1016,127,0.125000") != std::string::npos);

  spit(tmp.path() / "t.trace", "0\n1\n8\n9\n0\n");
  const auto tr = run(
      "cachesim --trace " + (tmp.path() / "t.trace").string() + " --line-size 8",
      tmp);
  CHECK(tr.exit_code == 0);
  CHECK(tr.out.find(",5,2,") != std::string::npos);  // 5 accesses, 2 lines
}

TEST_CASE("cli: latency prints provenance then the model table") {
  TempDir tmp("latency");
  const auto r = run("latency --widths 7,8", tmp);
  CHECK(r.exit_code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] ==
        "# model fit: Spartan-3, ISE 9.2 (estimates, not measurements)");
  CHECK(lines[1] == "N,radix2_ns,fsr_ns,ratio");
  CHECK(lines[2] == "7,3.348,1.800,1.860");
  CHECK(lines[3] == "8,3.412,1.800,1.896");

  // Full default sweep covers 2..64.
  CHECK(lines_of(run("latency", tmp).out).size() == 2 + 63);

  CHECK(run("latency --widths 7 --plot", tmp).out.find("N,model,latency_ns") !=
        std::string::npos);

  // Coefficient overrides, by flag and by environment.
  spit(tmp.path() / "c.coeffs", "intercept=1.0\nslope=1.0\nfsr_constant=1.0\n");
  const std::string coeffs = (tmp.path() / "c.coeffs").string();
  CHECK(run("latency --widths 7 --coeffs " + coeffs, tmp)
            .out.find("7,8.000,1.000,8.000") != std::string::npos);
  CHECK(run("latency --widths 7", tmp, "FSRPC_COEFFS=" + coeffs)
            .out.find("7,8.000,1.000,8.000") != std::string::npos);
}

TEST_CASE("cli: emit-hdl writes a reproducible three-file bundle") {
  TempDir tmp("hdl");
  const std::string out1 = (tmp.path() / "v1").string();
  const std::string out2 = (tmp.path() / "v2").string();

  const auto r1 = run("emit-hdl --desc " + kFixture + " --out " + out1 +
                          " --cycles 64",
                      tmp);
  CHECK(r1.exit_code == 0);
  const auto printed = lines_of(r1.out);
  REQUIRE(printed.size() == 3);
  for (const auto& p : printed) CHECK(fs::exists(p));

  const std::string module = slurp(fs::path(out1) / "tta16_pc.v");
  CHECK(module.find("module tta16_pc (") != std::string::npos);
  CHECK(lines_of(slurp(fs::path(out1) / "tta16_trace.hex")).size() == 65);

  const auto r2 = run("emit-hdl --desc " + kFixture + " --out " + out2 +
                          " --cycles 64",
                      tmp);
  CHECK(r2.exit_code == 0);
  for (const char* f : {"tta16_pc.v", "tta16_tb.v", "tta16_trace.hex"})
    CHECK(slurp(fs::path(out1) / f) == slurp(fs::path(out2) / f));
}
