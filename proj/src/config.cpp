#include "gibbsids/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace gibbsids {
namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool valid_key(const std::string& key) {
  if (key.empty()) return false;
  for (char c : key)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' &&
        c != '.')
      return false;
  return true;
}

double parse_double(const std::string& key, const std::string& raw) {
  try {
    std::size_t used = 0;
    const double v = std::stod(raw, &used);
    if (used != raw.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': '" + raw +
                      "' is not a number");
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::from_text(const std::string& text,
                                             const std::string& origin) {
  ExperimentConfig config;
  config.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto where = origin + ":" + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(where + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!valid_key(section))
        throw ConfigError(where + ": bad section name '" + section + "'");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(where + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!valid_key(key))
      throw ConfigError(where + ": bad key '" + key + "'");
    if (!section.empty()) key = section + "." + key;
    if (config.entries_.count(key))
      throw ConfigError(where + ": duplicate key '" + key + "'");
    if (value.empty())
      throw ConfigError(where + ": empty value for key '" + key + "'");
    config.entries_[key] = value;
  }
  if (!config.entries_.count("experiment"))
    throw ConfigError(origin + ": missing mandatory key 'experiment'");
  if (!config.entries_.count("seed"))
    throw ConfigError(origin + ": missing mandatory key 'seed'");
  return config;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_text(buf.str(), path);
}

bool ExperimentConfig::has(const std::string& key) const {
  return entries_.count(key) != 0;
}

std::string ExperimentConfig::get_string(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end())
    throw ConfigError("missing config key '" + key + "'");
  return it->second;
}

double ExperimentConfig::get_double(const std::string& key) const {
  return parse_double(key, get_string(key));
}

long ExperimentConfig::get_long(const std::string& key) const {
  const std::string raw = get_string(key);
  long v = 0;
  const auto [end, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
  if (ec != std::errc() || end != raw.data() + raw.size())
    throw ConfigError("config key '" + key + "': '" + raw +
                      "' is not an integer");
  return v;
}

std::uint64_t ExperimentConfig::get_u64(const std::string& key) const {
  const std::string raw = get_string(key);
  std::uint64_t v = 0;
  const auto [end, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
  if (ec != std::errc() || end != raw.data() + raw.size())
    throw ConfigError("config key '" + key + "': '" + raw +
                      "' is not a nonnegative integer");
  return v;
}

std::vector<double> ExperimentConfig::get_doubles(const std::string& key) const {
  std::istringstream in(get_string(key));
  std::vector<double> out;
  std::string token;
  while (in >> token) out.push_back(parse_double(key, token));
  if (out.empty())
    throw ConfigError("config key '" + key + "': empty list");
  return out;
}

std::string ExperimentConfig::get_string_or(const std::string& key,
                                            const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double ExperimentConfig::get_double_or(const std::string& key,
                                       double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long ExperimentConfig::get_long_or(const std::string& key,
                                   long fallback) const {
  return has(key) ? get_long(key) : fallback;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (!valid_key(key)) throw ConfigError("bad key '" + key + "'");
  entries_[key] = value;
}

std::uint64_t ExperimentConfig::hash() const {
  // FNV-1a, 64-bit; std::map iteration is already key-sorted
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
  };
  for (const auto& [key, value] : entries_) {
    mix(key);
    mix("=");
    mix(value);
    mix("\n");
  }
  return h;
}

std::string ExperimentConfig::hash_hex() const {
  static const char* digits = "0123456789abcdef";
  std::uint64_t h = hash();
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[h & 0xF];
    h >>= 4;
  }
  return out;
}

void ExperimentConfig::require_keys(
    const std::vector<std::string>& required,
    const std::vector<std::string>& optional) const {
  for (const auto& key : required)
    if (!has(key))
      throw ConfigError("experiment '" + get_string("experiment") +
                        "': missing required key '" + key + "'");
  for (const auto& [key, value] : entries_) {
    if (key == "experiment" || key == "seed") continue;
    if (std::find(required.begin(), required.end(), key) != required.end())
      continue;
    if (std::find(optional.begin(), optional.end(), key) != optional.end())
      continue;
    throw ConfigError("experiment '" + get_string("experiment") +
                      "': unknown key '" + key + "'");
  }
}

}  // namespace gibbsids
