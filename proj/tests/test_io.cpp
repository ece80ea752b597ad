#include <doctest.h>

#include <filesystem>
#include <random>

#include "qw/errors.hpp"
#include "qw/io.hpp"

using namespace qw;

TEST_SUITE("io") {
  TEST_CASE("shortest doubles round trip") {
    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> e(-300, 300);
    for (int i = 0; i < 2000; ++i) {
      double x = std::pow(10.0, e(g)) * (g() % 2 ? 1 : -1);
      CHECK(parse_double(format_double(x)) == x);
    }
    CHECK(format_double(1.0 / 3) == "0.3333333333333333");
    CHECK(format_double(0.5) == "0.5");
    CHECK_THROWS(parse_double("1.5x"));
  }

  TEST_CASE("csv round trip") {
    CsvTable t{{"a", "b,c", "q\"uote"}, {{"1", "x\ny", ""}, {"-2.5", "plain", "\"\""}}};
    auto text = to_csv(t);
    CHECK(text.find('\r') == std::string::npos);
    auto back = parse_csv(text);
    CHECK(back.header == t.header);
    CHECK(back.rows == t.rows);
    CsvTable empty{{"only", "header"}, {}};
    CHECK(to_csv(empty) == "only,header\n");
    CHECK(parse_csv(to_csv(empty)).rows.empty());

    std::mt19937 g(1);
    const std::string alphabet = "ab,\"\n 1.";
    for (int trial = 0; trial < 200; ++trial) {
      CsvTable r;
      int cols = 1 + g() % 4;
      for (int c = 0; c < cols; ++c) r.header.push_back("h" + std::to_string(c));
      for (int row = 0; row < int(g() % 5); ++row) {
        std::vector<std::string> cells;
        for (int c = 0; c < cols; ++c) {
          std::string s;
          for (int k = 0; k < int(g() % 6); ++k) s += alphabet[g() % alphabet.size()];
          cells.push_back(s);
        }
        r.rows.push_back(cells);
      }
      auto b = parse_csv(to_csv(r));
      CHECK(b.rows == r.rows);
    }
  }

  TEST_CASE("atomic writes") {
    auto dir = std::filesystem::temp_directory_path() / "qw_io_test";
    std::filesystem::create_directories(dir);
    auto path = (dir / "x.txt").string();
    write_file_atomic(path, "one");
    write_file_atomic(path, "two");
    CHECK(read_file(path) == "two");
    CHECK_THROWS_AS(write_file_atomic((dir / "missing" / "x.txt").string(), "z"), IoError);
    CHECK_THROWS_AS(read_file((dir / "missing.txt").string()), IoError);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("manifest") {
    Manifest m;
    m.command = "spectrum";
    m.seed = 7;
    m.precision_bits = 256;
    m.outputs = {"spectrum.csv"};
    auto j = to_json(m);
    CHECK(j["command"] == "spectrum");
    CHECK(j["seed"] == 7);
    CHECK(j["exit_code"] == 0);
    CHECK(j["versions"].contains("qw"));
    CHECK(j["versions"].contains("libraries"));
    CHECK(j["outputs"].size() == 1);
  }
}
