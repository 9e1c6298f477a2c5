#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mueg/cli/cli.hpp"
#include "mueg/constructor/inputs.hpp"
#include "mueg/errors.hpp"
#include "mueg/fields/field_io.hpp"

using namespace mueg;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("mueg_cli_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::string& command, const JobConfig& cfg) {
  std::ostringstream out, err;
  const int code = run_job(command, cfg, out, err);
  return {code, out.str(), err.str()};
}

void write_text(const std::filesystem::path& p, const std::string& s) { std::ofstream(p) << s; }

}  // namespace

TEST_CASE("FNV-1a reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
  CHECK(hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("config parsing") {
  const JobConfig c = JobConfig::from_string(
      "seed = 9\n; comment\n[ueg-scan]\nscales = 4, 8,16\nnu0 = 0,0,2\nexchange = yes\n[tile]\nl = 2\n", "job.ini");
  CHECK(c.get_uint("job.seed", 0) == 9);
  CHECK(c.get_list("ueg-scan.scales", {}) == std::vector<double>{4, 8, 16});
  CHECK(c.get_vec3("ueg-scan.nu0", Vec3::Zero()) == Vec3(0, 0, 2));
  CHECK(c.get_bool("ueg-scan.exchange", false));
  CHECK(c.get_double("ueg-scan.delta", 1.5) == 1.5);
  CHECK(c.get_double("tile.l", 0.0) == 2.0);

  SUBCASE("malformed values name their line") {
    const JobConfig bad = JobConfig::from_string("[tile]\n\nl = two\n", "bad.ini");
    try {
      bad.get_double("tile.l", 1.0);
      FAIL("no error");
    } catch (const ParseError& e) {
      CHECK(e.line == 3);
      CHECK(std::string(e.what()).find("bad.ini:3") == 0);
    }
  }
  SUBCASE("syntax errors carry the line") {
    try {
      JobConfig::from_string("[tile]\nl = 1\n[broken\n", "x.ini");
      FAIL("no error");
    } catch (const ParseError& e) {
      CHECK(e.line == 3);
    }
    CHECK_THROWS_AS(JobConfig::from_string("[a]\nk = 1\nk = 2\n"), ParseError);
  }
  SUBCASE("unread keys are rejected") {
    const JobConfig u = JobConfig::from_string("[tile]\nl = 1\ntypo = 3\n[verify]\nx = 1\n");
    u.get_double("tile.l", 1.0);
    CHECK_THROWS_AS(u.check_unused({"job", "tile"}), ParseError);
    u.get_double("tile.typo", 1.0);
    CHECK_NOTHROW(u.check_unused({"job", "tile"}));
  }
  SUBCASE("choices") {
    JobConfig k = JobConfig::from_string("[tile]\ntarget = sphere\n");
    CHECK_THROWS_AS(k.get_choice("tile.target", "tetra", {"tetra", "box"}), ParseError);
    CHECK(k.get_choice("tile.other", "box", {"tetra", "box"}) == "box");
  }
}

TEST_CASE("config hash") {
  JobConfig a = JobConfig::from_string("seed = 1\n[tile]\nl = 2\n[verify]\nstates = 3\n");
  JobConfig b = JobConfig::from_string("[tile]\nl =   2\n[verify]\nstates = 4\nseed = 1\n");
  b.set("job.seed", "1");
  b.set("job.out", "/tmp/elsewhere");
  b.set("job.workers", "4");
  CHECK(a.hash({"job", "tile"}) == b.hash({"job", "tile"}));
  CHECK(a.hash({"job", "verify"}) != b.hash({"job", "verify"}));
  b.set("tile.l", "3");
  CHECK(a.hash({"job", "tile"}) != b.hash({"job", "tile"}));
}

TEST_CASE("verify pointwise suite on the bundled orbital sets") {
  JobConfig c = JobConfig::from_string("seed = 4\n[verify]\nsuite = pointwise\nstates = 3\n");
  const Run r = run("verify", c);
  CHECK(r.code == exit_pass);
  CHECK(r.out.find("seed = 4") != std::string::npos);
  CHECK(r.out.find("config_hash = " + hex64(c.hash({"job", "verify"}))) != std::string::npos);
  CHECK(r.out.find("check_pointwise = true") != std::string::npos);
  CHECK(r.out.find("\npass = true") != std::string::npos);
  CHECK(run("verify", c).out == r.out);
}

TEST_CASE("ueg-scan exponent row") {
  JobConfig c = JobConfig::from_string("[ueg-scan]\nscales = 4,8,16,32\npoints = 24\n");
  const Run r = run("ueg-scan", c);
  CHECK(r.code == exit_pass);
  std::istringstream is(r.out);
  std::string line, last;
  int rows = 0;
  while (std::getline(is, line)) {
    if (line.rfind("exponent", 0) == 0) last = line;
    else ++rows;
  }
  CHECK(rows == 5);
  REQUIRE(!last.empty());
  const double p = std::stod(last.substr(last.find('\t') + 1));
  CHECK(std::abs(p - 2.0) <= 0.05);
  CHECK(r.err.find("under-resolved") != std::string::npos);
}

TEST_CASE("construct job") {
  const auto dir = scratch("construct");
  const GridSpec g = GridSpec::box(3, -3.0, 3.0, 16);
  const SmoothScalar rho = SmoothScalar::gaussian(2.0, 1.0);
  write_field((dir / "rho.field").string(), sample_scalar(g, [&](const Vec3& x) { return rho.value(x); }));
  write_field((dir / "w.field").string(), sample_vector(g, [](const Vec3& x) { return Vec3(-0.5 * x(1), 0.5 * x(0), 0); }));
  write_text(dir / "job.ini", "[construct]\nrho = rho.field\nw = w.field\ndump_kernel = true\n");
  JobConfig c = JobConfig::from_file((dir / "job.ini").string());
  c.set("job.out", (dir / "out").string());
  const Run r = run("construct", c);
  CHECK(r.code == exit_pass);
  CHECK(std::filesystem::exists(dir / "out" / "construct.report"));
  const FieldFile k = read_field_file((dir / "out" / "kernel.field").string());
  CHECK(k.is_complex);
  CHECK(k.grid == g);

  SUBCASE("malformed field file") {
    std::ifstream in(dir / "rho.field");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto pos = text.find('\n', text.find("counts"));
    text.insert(pos + 1, "not-a-number\n");
    write_text(dir / "bad.field", text);
    JobConfig b = JobConfig::from_string("[construct]\nrho = " + (dir / "bad.field").string() + "\n");
    const Run e = run("construct", b);
    CHECK(e.code == exit_usage);
    CHECK(e.err.find("bad.field:6:") != std::string::npos);
  }
  SUBCASE("missing input") {
    JobConfig m = JobConfig::from_string("[construct]\nrho = nowhere.field\n");
    const Run e = run("construct", m);
    CHECK(e.code == exit_usage);
    CHECK(e.err.find("no such file") != std::string::npos);
  }
}

TEST_CASE("tile job writes its mesh") {
  const auto dir = scratch("tile");
  JobConfig c = JobConfig::from_string("[tile]\noff = true\nmc_samples = 20000\n");
  c.set("job.out", dir.string());
  const Run r = run("tile", c);
  CHECK(r.code == exit_pass);
  std::ifstream off(dir / "tiling.off");
  std::string magic;
  off >> magic;
  CHECK(magic == "OFF");
  CHECK(std::filesystem::exists(dir / "tile.report"));
}

TEST_CASE("acceptance subset and usage errors") {
  JobConfig c = JobConfig::from_string("[acceptance]\nonly = 15\n");
  const Run r = run("acceptance", c);
  CHECK(r.code == exit_pass);
  CHECK(r.out.rfind("PASS  15", 0) == 0);
  CHECK(run("acceptance", JobConfig::from_string("[acceptance]\nonly = 16\n")).code == exit_usage);
  CHECK(run("bogus", JobConfig{}).code == exit_usage);
  CHECK(run("tile", JobConfig::from_string("[tile]\nunknown = 1\n")).code == exit_usage);
}
