#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "eigenlab/scaling.hpp"
#include "eigenlab/sweep.hpp"

namespace eigenlab {

/// Library version string.
const char* version();

/// CSV column order.
const std::vector<std::string>& csv_columns();

/// RFC 4180 CSV with a header row; numbers in shortest round-trip form.
std::string csv_text(const SweepTable& table);

/// Inverse of csv_text. Throws UsageError on a wrong header or malformed row.
SweepTable parse_csv(std::string_view text);

/// fits.json payload: {"checks": [...], "fits": [...]}, sorted keys, no
/// timestamps, so equal inputs give equal bytes.
std::string fits_json(const std::vector<ScalingFit>& fits, const std::vector<InequalityCheck>& checks);

struct RunManifest {
  std::string tool_version;
  std::string config_hash;
  std::string timestamp;
  std::string command;
  std::vector<std::string> outputs;
};

std::string manifest_json(const RunManifest& m);

/// UTC ISO-8601 time; SOURCE_DATE_EPOCH wins over the clock when set.
std::string manifest_timestamp();

/// Writes through a temporary file in the same directory and renames it into
/// place. Throws Error on I/O failure.
void write_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

}  // namespace eigenlab
