#include "mdpc/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mdpc/mdp_io.hpp"

namespace mdpc {

namespace {
[[noreturn]] void fail(const std::string& what) { throw std::runtime_error("config: " + what); }

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}
}  // namespace

KvConfig KvConfig::parse(const std::string& text) {
  KvConfig cfg;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::size_t split = t.find_first_of(" \t");
    if (split == std::string::npos) fail("line without value: '" + t + "'");
    cfg.set(t.substr(0, split), trim(t.substr(split + 1)));
  }
  return cfg;
}

KvConfig KvConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

std::string KvConfig::serialize() const {
  std::string out;
  for (const auto& [key, value] : entries_) out += key + " " + value + "\n";
  return out;
}

void KvConfig::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot write " + path);
  out << serialize();
  if (!out) fail("write failed for " + path);
}

const std::string* KvConfig::find(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return &v;
  return nullptr;
}

bool KvConfig::has(const std::string& key) const { return find(key) != nullptr; }

void KvConfig::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries_)
    if (k == key) {
      v = value;
      return;
    }
  entries_.emplace_back(key, value);
}

void KvConfig::set_double(const std::string& key, double value) { set(key, fmt_double(value)); }
void KvConfig::set_long(const std::string& key, long value) { set(key, std::to_string(value)); }

std::string KvConfig::get(const std::string& key) const {
  const std::string* v = find(key);
  if (!v) fail("missing key '" + key + "'");
  return *v;
}

std::string KvConfig::get_or(const std::string& key, const std::string& fallback) const {
  const std::string* v = find(key);
  return v ? *v : fallback;
}

double KvConfig::get_double(const std::string& key, std::optional<double> fallback) const {
  const std::string* v = find(key);
  if (!v) {
    if (fallback) return *fallback;
    fail("missing key '" + key + "'");
  }
  try {
    return std::stod(*v);
  } catch (const std::exception&) {
    fail("key '" + key + "' is not a number: '" + *v + "'");
  }
}

long KvConfig::get_long(const std::string& key, std::optional<long> fallback) const {
  const std::string* v = find(key);
  if (!v) {
    if (fallback) return *fallback;
    fail("missing key '" + key + "'");
  }
  try {
    return std::stol(*v);
  } catch (const std::exception&) {
    fail("key '" + key + "' is not an integer: '" + *v + "'");
  }
}

int KvConfig::get_int(const std::string& key, std::optional<int> fallback) const {
  return static_cast<int>(get_long(key, fallback ? std::optional<long>(*fallback) : std::nullopt));
}

}  // namespace mdpc
