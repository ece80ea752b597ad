#include "qw/io.hpp"

#include <boost/version.hpp>
#include <gmp.h>
#include <mpfr.h>
#include <Eigen/Core>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "qw/errors.hpp"

namespace qw {

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  if (res.ec != std::errc()) throw IoError("could not format a double");
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  double x = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), x);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw ValidationError("not a number: '" + text + "'");
  return x;
}

namespace {
void put_field(std::string& out, const std::string& f) {
  bool quote = f.find_first_of(",\"\r\n") != std::string::npos;
  if (!quote) {
    out += f;
    return;
  }
  out += '"';
  for (char c : f) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

void put_row(std::string& out, const std::vector<std::string>& row) {
  for (size_t i = 0; i < row.size(); ++i) {
    if (i) out += ',';
    put_field(out, row[i]);
  }
  out += '\n';
}
}  // namespace

std::string to_csv(const CsvTable& table) {
  std::string out;
  put_row(out, table.header);
  for (const auto& r : table.rows) {
    if (r.size() != table.header.size()) throw ValidationError("CSV row width does not match header");
    put_row(out, r);
  }
  return out;
}

CsvTable parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false, any = false;
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    any = true;
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      row.push_back(std::move(field));
      field.clear();
      records.push_back(std::move(row));
      row.clear();
      any = false;
    } else {
      field += c;
    }
  }
  if (in_quotes) throw ValidationError("CSV: unterminated quoted field");
  if (any) {
    row.push_back(std::move(field));
    records.push_back(std::move(row));
  }
  if (records.empty()) throw ValidationError("CSV: missing header");
  CsvTable t;
  t.header = std::move(records.front());
  t.rows.assign(std::make_move_iterator(records.begin() + 1), std::make_move_iterator(records.end()));
  return t;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + tmp.string() + " for writing");
    os << contents;
    os.flush();
    if (!os) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename into " + path);
  }
}

void write_csv(const std::string& path, const CsvTable& table) { write_file_atomic(path, to_csv(table)); }

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string library_versions_string() {
  std::ostringstream os;
  os << "gmp " << gmp_version << "; mpfr " << mpfr_get_version() << "; boost " << BOOST_VERSION / 100000 << '.'
     << BOOST_VERSION / 100 % 1000 << '.' << BOOST_VERSION % 100 << "; eigen " << EIGEN_WORLD_VERSION << '.'
     << EIGEN_MAJOR_VERSION << '.' << EIGEN_MINOR_VERSION;
  return os.str();
}

nlohmann::json to_json(const Manifest& m) {
  return {{"command", m.command},
          {"inputs", m.inputs},
          {"seed", m.seed},
          {"precision_bits", m.precision_bits},
          {"versions", {{"qw", QW_VERSION}, {"libraries", library_versions_string()}, {"compiler", __VERSION__}}},
          {"wall_time_s", m.wall_time_s},
          {"outputs", m.outputs},
          {"exit_code", m.exit_code}};
}

}  // namespace qw
