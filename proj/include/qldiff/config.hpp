#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qldiff {

// Flat key = value configuration with [section] headers.  Grammar:
//
//   file     := { line }
//   line     := section | entry | blank | comment
//   section  := '[' name ']'
//   entry    := key '=' value        (whitespace around tokens ignored)
//   comment  := ('#' | ';') anything
//
// Keys are reported fully qualified as "section.key"; entries before any
// section header live in the "" section.  Values are plain strings; typed
// getters parse on demand.  Lists are comma-separated.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long get_long(const std::string& key) const;
  long get_long(const std::string& key, long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_double_list(const std::string& key) const;
  std::vector<long> get_long_list(const std::string& key) const;

  // all keys with the given prefix ("problem." etc), in file order
  std::vector<std::string> keys_with_prefix(const std::string& prefix) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::map<std::string, std::string> map_;
};

} // namespace qldiff
