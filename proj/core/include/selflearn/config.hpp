#pragma once

// Flat `key = value` experiment configuration files and the provenance
// sidecar written next to every output. Lines starting with '#' are
// comments; lists are comma separated; seed lists also accept `a..b`.

#include "selflearn/protocols.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace selflearn {

class KeyValues {
 public:
  static KeyValues parse(std::string_view text, std::string_view source = "<config>");
  static KeyValues load(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& value) { entries_[key] = value; }
  std::optional<std::string> get(const std::string& key) const;
  bool contains(const std::string& key) const { return entries_.count(key) > 0; }
  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }

  /// Throws ConfigError naming the first key not in `allowed`.
  void reject_unknown(const std::vector<std::string_view>& allowed, std::string_view context) const;

 private:
  std::map<std::string, std::string> entries_;
};

/// Keys accepted by each subcommand's configuration.
const std::vector<std::string_view>& curve_config_keys();
const std::vector<std::string_view>& seed_sweep_config_keys();
const std::vector<std::string_view>& minima_config_keys();

/// Missing keys keep the struct defaults. Unknown keys and malformed values
/// raise ConfigError naming the key.
CurveConfig curve_config_from(const KeyValues& kv);
SeedSweepConfig seed_sweep_config_from(const KeyValues& kv);
MinimaExperimentConfig minima_config_from(const KeyValues& kv);

/// The complete effective configuration, every key present.
KeyValues to_key_values(const CurveConfig& cfg);
KeyValues to_key_values(const SeedSweepConfig& cfg);
KeyValues to_key_values(const MinimaExperimentConfig& cfg);

/// `1,5,9` and `1..50` (inclusive) forms, mixable.
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

std::string_view library_version() noexcept;

/// Deterministic JSON: tool, version, subcommand, seed, effective config,
/// output file names, plus any extra string fields.
std::string provenance_json(std::string_view subcommand, const KeyValues& effective,
                            std::uint64_t seed, const std::vector<std::string>& outputs,
                            const std::map<std::string, std::string>& extra = {});

}  // namespace selflearn
