#ifndef MORALLEX_MANIFEST_HPP
#define MORALLEX_MANIFEST_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace morallex {

inline constexpr const char* kToolVersion = "morallex 0.1.0";

// Audit record written beside every CLI output. Input/output digests make
// deterministic stages re-checkable: identical inputs, flags and seeds must
// reproduce identical output digests.
struct RunManifest {
  std::string tool_version = kToolVersion;
  std::string command_line;
  std::string config_digest;     // digest of the flag/parameter rendering
  std::vector<std::uint64_t> seeds;
  std::vector<std::pair<std::string, std::string>> inputs;   // path, sha256
  std::vector<std::pair<std::string, std::string>> outputs;  // path, sha256
  std::string started_at;   // ISO 8601 UTC
  std::string finished_at;

  void add_input(const std::string& path);
  void add_output(const std::string& path);
};

std::string iso8601_utc_now();

void write_manifest(const RunManifest& manifest, const std::string& path);

// "<output>.manifest.json" next to the primary output file.
std::string manifest_path_for(const std::string& output_path);

}  // namespace morallex

#endif
