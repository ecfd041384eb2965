#include "ipl/textio.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ipl {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

Rational parse_rational(const std::string& raw) {
  const std::string s = trim(raw);
  if (s.empty()) throw std::invalid_argument("empty number");
  if (s.find('/') != std::string::npos) {
    Rational r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational '" + s + "'");
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    r.canonicalize();
    return r;
  }
  // Decimal: exact value of the decimal string.
  std::size_t pos = 0;
  (void)std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("bad number '" + s + "'");
  auto e = s.find_first_of("eE");
  std::string mant = s.substr(0, e);
  int exponent = e == std::string::npos ? 0 : std::stoi(s.substr(e + 1));
  auto dot = mant.find('.');
  if (dot != std::string::npos) {
    exponent -= static_cast<int>(mant.size() - dot - 1);
    mant.erase(dot, 1);
  }
  Rational r(mpz_class(mant, 10));
  mpz_class p10;
  mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(std::abs(exponent)));
  if (exponent >= 0)
    r *= p10;
  else
    r /= p10;
  r.canonicalize();
  return r;
}

bool is_number(const std::string& raw) {
  const std::string s = trim(raw);
  if (s.empty()) return false;
  try {
    if (s.find('/') != std::string::npos) {
      parse_rational(s);
      return true;
    }
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    return pos == s.size() && std::isfinite(v);
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split(s, ',')) {
    if (trim(item).find('/') != std::string::npos)
      out.push_back(parse_rational(item).get_d());
    else {
      std::size_t pos = 0;
      const std::string t = trim(item);
      double v = std::stod(t, &pos);
      if (pos != t.size()) throw std::invalid_argument("bad number '" + t + "'");
      out.push_back(v);
    }
  }
  return out;
}

std::vector<Rational> parse_rationals(const std::string& s) {
  std::vector<Rational> out;
  for (const auto& item : split(s, ',')) out.push_back(parse_rational(item));
  return out;
}

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  for (const auto& item : split(s, ',')) {
    const std::string t = trim(item);
    std::size_t pos = 0;
    int v = std::stoi(t, &pos);
    if (pos != t.size()) throw std::invalid_argument("bad integer '" + t + "'");
    out.push_back(v);
  }
  return out;
}

std::string rational_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

void put_rational(nlohmann::json& j, const std::string& key, const Rational& r) {
  j[key] = rational_string(r);
  j[key + "_float"] = r.get_d();
}

void write_csv(const std::string& path, const CsvTable& t) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  auto line = [&](const std::vector<std::string>& v) {
    for (std::size_t k = 0; k < v.size(); ++k) out << (k ? "," : "") << v[k];
    out << '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path);
  CsvTable t;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto fields = split(trim(line), ',');
    for (auto& f : fields) f = trim(f);
    if (first)
      t.header = fields;
    else
      t.rows.push_back(fields);
    first = false;
  }
  return t;
}

std::vector<std::string> validate_csv(const std::string& path) {
  std::vector<std::string> problems;
  CsvTable t;
  try {
    t = read_csv(path);
  } catch (const std::exception& e) {
    return {e.what()};
  }
  if (t.header.empty()) return {"missing header"};
  std::set<std::string> names;
  for (const auto& h : t.header) {
    if (h.empty()) problems.push_back("empty column name");
    if (is_number(h)) problems.push_back("header field '" + h + "' is numeric");
    if (!names.insert(h).second) problems.push_back("duplicate column '" + h + "'");
  }
  if (t.rows.empty()) problems.push_back("no data rows");
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (t.rows[r].size() != t.header.size()) {
      problems.push_back("row " + std::to_string(r + 1) + " has " + std::to_string(t.rows[r].size()) +
                         " fields, header has " + std::to_string(t.header.size()));
      continue;
    }
    for (const auto& f : t.rows[r])
      if (!is_number(f)) problems.push_back("row " + std::to_string(r + 1) + ": '" + f + "' is not a number");
  }
  return problems;
}

nlohmann::json to_json(const RunManifest& m) {
  return {{"command", m.command}, {"argv", m.argv},       {"parameters", m.parameters}, {"seed", m.seed},
          {"version", kToolVersion}, {"outputs", m.outputs}, {"wall_time_s", m.wall_time}};
}

void write_manifests(const RunManifest& m) {
  const auto j = to_json(m);
  for (const auto& p : m.outputs) {
    std::ofstream out(p + ".manifest.json");
    if (!out) throw std::runtime_error("cannot write manifest for " + p);
    out << j.dump(2) << '\n';
  }
}

}  // namespace ipl
