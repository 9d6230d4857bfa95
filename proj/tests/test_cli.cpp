#include <filesystem>
#include <fstream>
#include <sstream>

#include "app.hpp"
#include "doctest.h"
#include "nodalab/config.hpp"
#include "nodalab/errors.hpp"

using namespace nodalab;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream o, e;
  const int c = app::run(args, o, e);
  return {c, o.str(), e.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nodalab_cli_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("config defaults and parsing") {
  Config c;
  CHECK(c.integer("seed") == 24301);
  CHECK(c.number("eigen.h") == doctest::Approx(1.0 / 32));
  CHECK(c.numbers("doubling.center") == std::vector<double>{0.5, 0.0});
  CHECK(c.flag("nodal.svg"));
  CHECK_FALSE(c.is_set("seed"));
  c.load_text("# comment\n  eigen.count = 4   # trailing\n\ndomain.kind=disk\n");
  CHECK(c.integer("eigen.count") == 4);
  CHECK(c.str("domain.kind") == "disk");
  CHECK(c.is_set("eigen.count"));
  CHECK(c.numbers("domain.cos").empty());
  c.set("nodal.fields", "square:1,0; ;disk:2,1");
  CHECK(c.items("nodal.fields").size() == 2);
  for (const char* bad : {"bogus = 1", "eigen.count", "seed = 3 = 4"}) {
    Config d;
    try {
      d.load_text(bad);
      if (std::string(bad) == "seed = 3 = 4") (void)d.integer("seed");
      FAIL("no error for " << bad);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Config);
    }
  }
  c.set("eigen.count", "2.5");
  CHECK_THROWS_AS(c.integer("eigen.count"), Error);
  c.set("eigen.h", "-1");
  CHECK_THROWS_AS(c.positive("eigen.h"), Error);
  c.set("eigen.h", "1/0");
  CHECK_THROWS_AS(c.number("eigen.h"), Error);
  c.set("nodal.svg", "maybe");
  CHECK_THROWS_AS(c.flag("nodal.svg"), Error);
}

TEST_CASE("cli exit codes") {
  const fs::path dir = scratch("codes");
  CHECK(run({"--help"}).code == 0);
  CHECK(run({}).code == 3);
  CHECK(run({"frobnicate"}).code == 3);
  const Run bad = run({"eigen", "--out", dir.string(), "--set", "eigen.nope=1"});
  CHECK(bad.code == 3);
  CHECK(bad.err.find("eigen.nope") != std::string::npos);
  CHECK(run({"eigen", "--out", dir.string(), "--set", "eigen.h"}).code == 3);
  CHECK(run({"eigen", "--out", dir.string(), "--config", (dir / "missing.cfg").string()}).code == 3);
  CHECK(run({"verify-bound", "--out", dir.string(), "--set", "verify.modes=;"}).code == 3);
  CHECK(run({"nodal", "--out", dir.string(), "--set", "nodal.fields=square:a"}).code == 3);
  CHECK(run({"nodal", "--out", dir.string(), "--threads", "0", "--set", "threads=0"}).code == 3);
  CHECK(run({"nodal", "--out", dir.string(), "--set", "nodal.resolution=16"}).code == 2);
  CHECK(run({"induction", "--out", dir.string(), "--set", "induction.C0=2"}).code == 2);
  CHECK(run({"uniqueness", "--out", dir.string(), "--set", "uniqueness.f=0.5"}).code == 2);
}

TEST_CASE("cli config file and outputs") {
  const fs::path dir = scratch("files");
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "induction.k = 4\ninduction.depth = 2\nout = " << (dir / "a").string() << "\n";
  }
  const Run r = run({"induction", "--config", (dir / "run.cfg").string()});
  REQUIRE(r.code == 0);
  const std::string summary = slurp(dir / "a" / "induction_summary.csv");
  CHECK(summary.find("worst_case,4,2,33,1,1,1,257,1,") != std::string::npos);
  CHECK(fs::exists(dir / "a" / "ledger.csv"));
  CHECK(fs::exists(dir / "a" / "tree.txt"));

  REQUIRE(run({"propagation", "--out", (dir / "b").string(), "--set", "propagation.family=linear"}).code == 0);
  const std::string fit = slurp(dir / "b" / "propagation_fit.csv");
  REQUIRE(fit.rfind("gamma,C,residual\n", 0) == 0);
  CHECK(std::stod(fit.substr(17)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cli output does not depend on threads") {
  const fs::path dir = scratch("threads");
  for (const char* t : {"1", "3"}) {
    const std::string o = (dir / t).string();
    REQUIRE(run({"induction", "--out", o, "--threads", t, "--set", "induction.rule=random", "--set",
                 "induction.depth=4"})
                .code == 0);
    REQUIRE(run({"nodal", "--out", o, "--threads", t, "--set", "nodal.fields=disk:2,1;square:3,1"}).code == 0);
  }
  for (const char* f : {"ledger.csv", "tree.txt", "nodal_summary.csv", "nodal_curves.csv"})
    CHECK(slurp(dir / "1" / f) == slurp(dir / "3" / f));
}
