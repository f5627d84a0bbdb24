#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace hdnba {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat key = value parameter set. Lines starting with '#' are comments.
class Config {
 public:
  Config() = default;

  static Config load(const std::string& path);
  static Config parse(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& key) const;
  double get(const std::string& key) const;
  double get(const std::string& key, double fallback) const;
  int get_int(const std::string& key) const;
  std::string get_str(const std::string& key) const;
  void set(const std::string& key, double value);
  void set(const std::string& key, const std::string& value);

  const std::map<std::string, std::string>& entries() const { return entries_; }

  // 64-bit FNV-1a over the sorted key=value lines, hex encoded.
  std::string fingerprint() const;
  std::string origin() const { return origin_; }

 private:
  std::map<std::string, std::string> entries_;
  std::string origin_;
};

// Data directory: $HDNBA_DATA_DIR, else the build-time default.
std::string data_dir();
// Parameter file: $HDNBA_CONFIG, else <data_dir>/params.cfg.
std::string default_config_path();
Config load_default_config();

}  // namespace hdnba
