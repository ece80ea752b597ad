#include <doctest.h>

#include <sys/wait.h>

#include <filesystem>
#include <json.hpp>

#include "qw/io.hpp"

using namespace qw;
namespace fs = std::filesystem;

namespace {
int run(const std::string& args) {
  std::string cmd = std::string(QW_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path fresh(const std::string& name) {
  auto d = fs::temp_directory_path() / ("qw_cli_" + name);
  fs::remove_all(d);
  return d;
}
}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("usage errors exit with 2") {
    CHECK(run("") == 2);
    CHECK(run("spectrum --no-such-flag") == 2);
    CHECK(run("spectrum --nmax -3") == 2);
    auto d = fresh("bad");
    CHECK(run("spectrum --s 2 --out " + d.string()) == 2);
    fs::remove_all(d);
  }

  TEST_CASE("spectrum output and manifest") {
    auto d = fresh("spec");
    REQUIRE(run("spectrum --nmax 3 --out " + d.string()) == 0);
    auto t = parse_csv(read_file((d / "spectrum.csv").string()));
    CHECK(t.rows.size() == 10);
    CHECK(t.rows[0][1] == "4");
    auto m = nlohmann::json::parse(read_file((d / "spectrum_manifest.json").string()));
    CHECK(m["command"] == "spectrum");
    CHECK(m["exit_code"] == 0);
    CHECK(m["outputs"][0] == "spectrum.csv");
    fs::remove_all(d);
  }

  TEST_CASE("config overrides flags") {
    auto d = fresh("cfg");
    fs::create_directories(d);
    write_file_atomic((d / "c.json").string(), R"({"s": "5/2", "spectrum": {"nmax": 1}})");
    REQUIRE(run("spectrum --s 3/2 --nmax 4 --config " + (d / "c.json").string() + " --out " + d.string()) == 0);
    auto m = nlohmann::json::parse(read_file((d / "spectrum_manifest.json").string()));
    CHECK(m["inputs"]["params"]["s"] == "5/2");
    CHECK(parse_csv(read_file((d / "spectrum.csv").string())).rows.size() == 3);
    fs::remove_all(d);
  }

  TEST_CASE("seeded runs are byte-identical") {
    auto a = fresh("det_a"), b = fresh("det_b");
    std::string args = "trajectory --N 1 --nmax 2 --basis full --w 100000000 --steps 64 --dt 0.01 --seed 5 --out ";
    REQUIRE(run(args + a.string()) <= 1);
    REQUIRE(run(args + b.string()) <= 1);
    CHECK(read_file((a / "trajectory.csv").string()) == read_file((b / "trajectory.csv").string()));
    CHECK(read_file((a / "msd.csv").string()) == read_file((b / "msd.csv").string()));
    fs::remove_all(a);
    fs::remove_all(b);
  }
}
