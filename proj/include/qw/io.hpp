#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace qw {

// Shortest decimal that parses back to the same double.
std::string format_double(double x);
double parse_double(const std::string& text);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// RFC 4180 with LF line endings; header always written.
std::string to_csv(const CsvTable& table);
CsvTable parse_csv(const std::string& text);

// Temp file in the same directory, then rename. IoError names the path.
void write_file_atomic(const std::string& path, const std::string& contents);
void write_csv(const std::string& path, const CsvTable& table);
std::string read_file(const std::string& path);

struct Manifest {
  std::string command;
  nlohmann::json inputs;
  unsigned long long seed = 0;
  unsigned precision_bits = 0;
  double wall_time_s = 0;
  std::vector<std::string> outputs;
  int exit_code = 0;
};

nlohmann::json to_json(const Manifest& m);
std::string library_versions_string();

}  // namespace qw
