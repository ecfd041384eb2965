#pragma once

#include "ipl/linalg.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace ipl {

inline constexpr const char* kToolVersion = "0.1.0";

// Comma-separated numbers; rationals may be written p/q.
std::vector<double> parse_doubles(const std::string& s);
std::vector<Rational> parse_rationals(const std::string& s);
std::vector<int> parse_ints(const std::string& s);

// "p/q" (or "p" for integers).
std::string rational_string(const Rational& r);
// {"value": "p/q", "value_float": x}; the float field is named key + "_float".
void put_rational(nlohmann::json& j, const std::string& key, const Rational& r);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void write_csv(const std::string& path, const CsvTable& t);
CsvTable read_csv(const std::string& path);

// A curve CSV is valid when it has a header with distinct non-empty names, at
// least one row, every row as wide as the header, and every field a finite
// number or a rational p/q. Returns the list of problems found.
std::vector<std::string> validate_csv(const std::string& path);

struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  nlohmann::json parameters = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::vector<std::string> outputs;
  double wall_time = 0;
};

nlohmann::json to_json(const RunManifest& m);
// Writes path + ".manifest.json" for each output path.
void write_manifests(const RunManifest& m);

}  // namespace ipl
