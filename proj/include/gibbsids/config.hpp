// Plain-text experiment configuration: `key = value` lines with optional
// `[section]` grouping (keys flatten to section.key) and '#' comments. Every
// run is pinned by a mandatory seed and a content hash that ignores key
// order, comments, and whitespace.
#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace gibbsids {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class ExperimentConfig {
 public:
  static ExperimentConfig from_text(const std::string& text,
                                    const std::string& origin = "<text>");
  static ExperimentConfig from_file(const std::string& path);

  const std::map<std::string, std::string>& entries() const {
    return entries_;
  }
  const std::string& origin() const { return origin_; }

  bool has(const std::string& key) const;

  // typed accessors; a missing key or an unparsable value names the key
  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  long get_long(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key) const;

  std::string get_string_or(const std::string& key,
                            const std::string& fallback) const;
  double get_double_or(const std::string& key, double fallback) const;
  long get_long_or(const std::string& key, long fallback) const;

  std::string experiment() const { return get_string("experiment"); }
  std::uint64_t seed() const { return get_u64("seed"); }

  // overrides an entry (used by the --seed flag); affects the hash
  void set(const std::string& key, const std::string& value);

  // FNV-1a over the sorted, normalized key=value list
  std::uint64_t hash() const;
  std::string hash_hex() const;  // 16 lowercase hex digits

  // every key must appear in `required` or `optional` (plus `experiment`),
  // and every required key must be present; violations name the key
  void require_keys(const std::vector<std::string>& required,
                    const std::vector<std::string>& optional) const;

 private:
  std::map<std::string, std::string> entries_;
  std::string origin_;
};

}  // namespace gibbsids
