#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "abpole/errors.hpp"

namespace abpole {

/// CSV with a fixed column order, 12 significant digits, RFC-4180 quoting.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<double>& values);
  void raw_row(const std::vector<std::string>& cells);
  const std::string& text() const { return text_; }
  void write(const std::string& path) const;

 private:
  std::string text_;
  std::size_t n_cols_;
};

std::string format_sig12(double v);

/// Two-column plot data: "x y" lines.
void write_plot(const std::string& path,
                const std::vector<std::pair<double, double>>& xy);

void write_text(const std::string& path, const std::string& text);

/// TOML-style config: [section] blocks of key = value lines; values are
/// numbers, booleans, quoted strings, or arrays of numbers.
struct ConfigValue {
  std::variant<double, bool, std::string, std::vector<double>> v;
  double num() const;
  bool boolean() const;
  const std::string& str() const;
  const std::vector<double>& array() const;
};

class Config {
 public:
  static Config parse(const std::string& text);
  static Config load(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  double num(const std::string& section, const std::string& key,
             double fallback) const;
  int integer(const std::string& section, const std::string& key,
              int fallback) const;
  bool boolean(const std::string& section, const std::string& key,
               bool fallback) const;
  std::string str(const std::string& section, const std::string& key,
                  const std::string& fallback) const;
  std::vector<double> array(const std::string& section, const std::string& key,
                            const std::vector<double>& fallback) const;
  const std::string& text() const { return text_; }

 private:
  std::map<std::string, std::map<std::string, ConfigValue>> sections_;
  std::string text_;
};

std::uint64_t fnv1a64(const std::string& data);

/// Run manifest: config hash, seed, grid sizes, timings, output files.
struct Manifest {
  std::string command;
  std::string config_hash;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::vector<std::pair<std::string, double>> timings_s;
  std::vector<std::string> outputs;
  std::vector<std::string> grids;  // "purpose h=... n=..."
  void write(const std::string& path) const;
};

}  // namespace abpole
