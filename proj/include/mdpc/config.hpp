#pragma once

#include <optional>
#include <string>
#include <vector>

namespace mdpc {

// Flat ordered key-value text config. One "key value" pair per line, '#'
// starts a comment, the value is the rest of the line. parse(serialize(x))
// reproduces x entry for entry.
class KvConfig {
 public:
  static KvConfig parse(const std::string& text);
  static KvConfig load(const std::string& path);
  std::string serialize() const;
  void save(const std::string& path) const;

  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);
  void set_double(const std::string& key, double value);
  void set_long(const std::string& key, long value);

  std::string get(const std::string& key) const;  // throws when missing
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, std::optional<double> fallback = std::nullopt) const;
  long get_long(const std::string& key, std::optional<long> fallback = std::nullopt) const;
  int get_int(const std::string& key, std::optional<int> fallback = std::nullopt) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  bool operator==(const KvConfig& other) const { return entries_ == other.entries_; }

 private:
  const std::string* find(const std::string& key) const;
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace mdpc
