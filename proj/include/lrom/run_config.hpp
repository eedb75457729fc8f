#pragma once

#include "lrom/errors.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace lrom {

/// Configuration file: `[section]` headers over `key = value` lines,
/// `#`/`;` comments. One file captures an experiment; command-line
/// `--set section.key=value` overrides individual entries.
class ConfigFile {
public:
  ConfigFile() = default;

  static ConfigFile parse_file(const std::filesystem::path& path);
  static ConfigFile parse_text(const std::string& text);

  void set(const std::string& section, const std::string& key,
           const std::string& value);
  // "section.key=value" as given on the command line.
  void apply_override(const std::string& spec);

  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  std::string require_string(const std::string& section,
                             const std::string& key) const;
  double get_double(const std::string& section, const std::string& key,
                    double fallback) const;
  long long get_integer(const std::string& section, const std::string& key,
                        long long fallback) const;
  bool get_bool(const std::string& section, const std::string& key,
                bool fallback) const;
  std::vector<double> get_double_list(const std::string& section,
                                      const std::string& key) const;

  /// Rejects keys outside `allowed` in `section` (typo protection).
  void check_known_keys(const std::string& section,
                        const std::vector<std::string>& allowed) const;

  /// Deterministic sorted dump, the input of the run-directory hash.
  std::string canonical() const;

private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

std::uint64_t fnv1a64(const std::string& text);

/// Hex digest of the effective configuration of one command invocation;
/// names the run directory.
std::string config_hash(const ConfigFile& config, const std::string& command,
                        std::uint64_t seed);

} // namespace lrom
