#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "eigenlab/sweep.hpp"

namespace eigenlab {

enum class ConfigFormat { ini, json };

/// Parses a sweep configuration. The INI form has a [policy] section and one
/// [sweep.NAME] section per sweep; the JSON form uses the same keys under
/// "policy" and "sweeps". Random sweeps without `seeds` get `default_seed`.
/// Throws UsageError with the offending line or key; the result is validated.
SweepConfig parse_config(std::string_view text, ConfigFormat format, std::uint64_t default_seed = 1);

/// Reads a file; ".json" files and text starting with '{' parse as JSON.
SweepConfig load_config(const std::string& path, std::uint64_t default_seed = 1);

/// Canonical JSON of the interpreted config: sorted keys, defaults filled in,
/// numbers in shortest round-trip form. Equal configs give equal bytes.
std::string canonical_config(const SweepConfig& config);

/// SHA-256 of canonical_config, lower-case hex.
std::string config_hash(const SweepConfig& config);

std::string sha256_hex(std::string_view bytes);

}  // namespace eigenlab
