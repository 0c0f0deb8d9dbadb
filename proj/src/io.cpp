#include "abpole/io.hpp"

#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace abpole {

std::string format_sig12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {
std::string csv_quote(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}
}  // namespace

CsvWriter::CsvWriter(std::vector<std::string> header)
    : n_cols_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) text_ += ',';
    text_ += csv_quote(header[i]);
  }
  text_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != n_cols_)
    throw InvalidArgument("CsvWriter: column count mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) text_ += ',';
    text_ += format_sig12(values[i]);
  }
  text_ += '\n';
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
  if (cells.size() != n_cols_)
    throw InvalidArgument("CsvWriter: column count mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    text_ += csv_quote(cells[i]);
  }
  text_ += '\n';
}

void CsvWriter::write(const std::string& path) const {
  write_text(path, text_);
}

void write_plot(const std::string& path,
                const std::vector<std::pair<double, double>>& xy) {
  std::string text;
  for (const auto& [x, y] : xy)
    text += format_sig12(x) + " " + format_sig12(y) + "\n";
  write_text(path, text);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open for writing: " + path);
  os << text;
  if (!os) throw ConfigError("write failed: " + path);
}

double ConfigValue::num() const {
  if (auto* d = std::get_if<double>(&v)) return *d;
  throw ConfigError("config value is not a number");
}
bool ConfigValue::boolean() const {
  if (auto* b = std::get_if<bool>(&v)) return *b;
  throw ConfigError("config value is not a boolean");
}
const std::string& ConfigValue::str() const {
  if (auto* s = std::get_if<std::string>(&v)) return *s;
  throw ConfigError("config value is not a string");
}
const std::vector<double>& ConfigValue::array() const {
  if (auto* a = std::get_if<std::vector<double>>(&v)) return *a;
  throw ConfigError("config value is not an array");
}

namespace {

std::string strip(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

ConfigValue parse_value(const std::string& raw, int line_no) {
  const std::string s = strip(raw);
  if (s.empty()) throw ConfigError("empty value at line " +
                                   std::to_string(line_no));
  if (s == "true") return {true};
  if (s == "false") return {false};
  if (s.front() == '"') {
    if (s.size() < 2 || s.back() != '"')
      throw ConfigError("unterminated string at line " +
                        std::to_string(line_no));
    return {s.substr(1, s.size() - 2)};
  }
  if (s.front() == '[') {
    if (s.back() != ']')
      throw ConfigError("unterminated array at line " +
                        std::to_string(line_no));
    std::vector<double> arr;
    std::string body = s.substr(1, s.size() - 2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const std::string t = strip(item);
      if (t.empty()) continue;
      char* end = nullptr;
      const double d = std::strtod(t.c_str(), &end);
      if (end != t.c_str() + t.size())
        throw ConfigError("bad array element '" + t + "' at line " +
                          std::to_string(line_no));
      arr.push_back(d);
    }
    return {arr};
  }
  char* end = nullptr;
  const double d = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size())
    throw ConfigError("bad value '" + s + "' at line " +
                      std::to_string(line_no));
  return {d};
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config cfg;
  cfg.text_ = text;
  std::string section;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = strip(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("bad section header at line " +
                          std::to_string(line_no));
      section = strip(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError("empty section name at line " +
                          std::to_string(line_no));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key = value at line " +
                        std::to_string(line_no));
    const std::string key = strip(line.substr(0, eq));
    if (key.empty())
      throw ConfigError("empty key at line " + std::to_string(line_no));
    cfg.sections_[section][key] = parse_value(line.substr(eq + 1), line_no);
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open config: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse(ss.str());
}

bool Config::has(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) > 0;
}

double Config::num(const std::string& section, const std::string& key,
                   double fallback) const {
  return has(section, key) ? sections_.at(section).at(key).num() : fallback;
}

int Config::integer(const std::string& section, const std::string& key,
                    int fallback) const {
  if (!has(section, key)) return fallback;
  const double d = sections_.at(section).at(key).num();
  const int i = static_cast<int>(d);
  if (d != i) throw ConfigError(section + "." + key + " must be an integer");
  return i;
}

bool Config::boolean(const std::string& section, const std::string& key,
                     bool fallback) const {
  return has(section, key) ? sections_.at(section).at(key).boolean()
                           : fallback;
}

std::string Config::str(const std::string& section, const std::string& key,
                        const std::string& fallback) const {
  return has(section, key) ? sections_.at(section).at(key).str() : fallback;
}

std::vector<double> Config::array(const std::string& section,
                                  const std::string& key,
                                  const std::vector<double>& fallback) const {
  return has(section, key) ? sections_.at(section).at(key).array() : fallback;
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

void Manifest::write(const std::string& path) const {
  nlohmann::json j;
  j["command"] = command;
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  j["jobs"] = jobs;
  nlohmann::json t = nlohmann::json::object();
  for (const auto& [k, v] : timings_s) t[k] = v;
  j["timings_s"] = t;
  j["outputs"] = outputs;
  j["grids"] = grids;
  write_text(path, j.dump(2) + "\n");
}

}  // namespace abpole
