#include "hdnba/config.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace hdnba {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

Config Config::parse(const std::string& text, const std::string& origin) {
  Config c;
  c.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    auto key = trim(line.substr(0, eq));
    auto val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key or value");
    c.entries_[key] = val;
  }
  return c;
}

bool Config::has(const std::string& key) const { return entries_.count(key) != 0; }

double Config::get(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("missing config key: " + key);
  try {
    size_t pos = 0;
    double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + " is not a number: " + it->second);
  }
}

double Config::get(const std::string& key, double fallback) const {
  return has(key) ? get(key) : fallback;
}

int Config::get_int(const std::string& key) const { return static_cast<int>(get(key)); }

std::string Config::get_str(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("missing config key: " + key);
  return it->second;
}

void Config::set(const std::string& key, double value) {
  std::ostringstream os;
  os << std::setprecision(17) << value;
  entries_[key] = os.str();
}

void Config::set(const std::string& key, const std::string& value) { entries_[key] = value; }

std::string Config::fingerprint() const {
  uint64_t h = 1469598103934665603ull;
  for (const auto& [k, v] : entries_) {
    for (char ch : k + "=" + v + "\n") {
      h ^= static_cast<unsigned char>(ch);
      h *= 1099511628211ull;
    }
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string data_dir() {
  if (const char* env = std::getenv("HDNBA_DATA_DIR"); env && *env) return env;
  return HDNBA_DEFAULT_DATA_DIR;
}

std::string default_config_path() {
  if (const char* env = std::getenv("HDNBA_CONFIG"); env && *env) return env;
  return data_dir() + "/params.cfg";
}

Config load_default_config() { return Config::load(default_config_path()); }

}  // namespace hdnba
