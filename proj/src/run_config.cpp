#include "lrom/run_config.hpp"

#include "lrom/numfmt.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace lrom {

namespace {

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

} // namespace

ConfigFile ConfigFile::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open config file: " + path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_text(text.str());
}

ConfigFile ConfigFile::parse_text(const std::string& text) {
  ConfigFile config;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string body = trim(line);
    if (body.empty() || body[0] == '#' || body[0] == ';') continue;
    if (body.front() == '[') {
      if (body.back() != ']' || body.size() < 3) {
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": malformed section header");
      }
      section = trim(body.substr(1, body.size() - 2));
      config.sections_[section];
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key = value");
    }
    const std::string key = trim(body.substr(0, eq));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": empty key");
    }
    if (section.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": key outside any [section]");
    }
    config.sections_[section][key] = trim(body.substr(eq + 1));
  }
  return config;
}

void ConfigFile::set(const std::string& section, const std::string& key,
                     const std::string& value) {
  sections_[section][key] = value;
}

void ConfigFile::apply_override(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("override must look like section.key=value: '" + spec +
                      "'");
  }
  const std::string target = trim(spec.substr(0, eq));
  const auto dot = target.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == target.size()) {
    throw ConfigError("override must name section.key: '" + spec + "'");
  }
  set(target.substr(0, dot), target.substr(dot + 1),
      trim(spec.substr(eq + 1)));
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  auto sec = sections_.find(section);
  return sec != sections_.end() && sec->second.count(key) > 0;
}

std::string ConfigFile::get_string(const std::string& section,
                                   const std::string& key,
                                   const std::string& fallback) const {
  auto sec = sections_.find(section);
  if (sec == sections_.end()) return fallback;
  auto it = sec->second.find(key);
  return it == sec->second.end() ? fallback : it->second;
}

std::string ConfigFile::require_string(const std::string& section,
                                       const std::string& key) const {
  if (!has(section, key)) {
    throw ConfigError("missing required config key [" + section + "] " + key);
  }
  return get_string(section, key, {});
}

double ConfigFile::get_double(const std::string& section,
                              const std::string& key, double fallback) const {
  if (!has(section, key)) return fallback;
  try {
    return numfmt::parse_double(get_string(section, key, {}));
  } catch (const FormatError& e) {
    throw ConfigError("[" + section + "] " + key + ": " + e.what());
  }
}

long long ConfigFile::get_integer(const std::string& section,
                                  const std::string& key,
                                  long long fallback) const {
  if (!has(section, key)) return fallback;
  try {
    return numfmt::parse_integer(get_string(section, key, {}));
  } catch (const FormatError& e) {
    throw ConfigError("[" + section + "] " + key + ": " + e.what());
  }
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key,
                          bool fallback) const {
  if (!has(section, key)) return fallback;
  const std::string v = get_string(section, key, {});
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("[" + section + "] " + key + ": expected a boolean, got '" +
                    v + "'");
}

std::vector<double> ConfigFile::get_double_list(const std::string& section,
                                                const std::string& key) const {
  std::vector<double> out;
  if (!has(section, key)) return out;
  std::istringstream in(get_string(section, key, {}));
  std::string cell;
  while (std::getline(in, cell, ',')) {
    const std::string body = trim(cell);
    if (body.empty()) continue;
    try {
      out.push_back(numfmt::parse_double(body));
    } catch (const FormatError& e) {
      throw ConfigError("[" + section + "] " + key + ": " + e.what());
    }
  }
  return out;
}

void ConfigFile::check_known_keys(
    const std::string& section, const std::vector<std::string>& allowed) const {
  auto sec = sections_.find(section);
  if (sec == sections_.end()) return;
  for (const auto& [key, value] : sec->second) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("unknown key '" + key + "' in section [" + section +
                        "]");
    }
  }
}

std::string ConfigFile::canonical() const {
  std::ostringstream out;
  for (const auto& [section, kv] : sections_) {
    for (const auto& [key, value] : kv) {
      out << section << '.' << key << '=' << value << '\n';
    }
  }
  return out.str();
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::string config_hash(const ConfigFile& config, const std::string& command,
                        std::uint64_t seed) {
  const std::uint64_t digest = fnv1a64(command + "\x1f" +
                                       std::to_string(seed) + "\x1f" +
                                       config.canonical());
  std::ostringstream out;
  out << std::hex;
  for (int shift = 60; shift >= 0; shift -= 4) {
    out << ((digest >> shift) & 0xf);
  }
  return out.str();
}

} // namespace lrom
