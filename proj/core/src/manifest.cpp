#include "morallex/manifest.hpp"

#include <ctime>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "morallex/util/digest.hpp"

namespace morallex {

using nlohmann::json;

void RunManifest::add_input(const std::string& path) {
  inputs.emplace_back(path, sha256_file_hex(path));
}

void RunManifest::add_output(const std::string& path) {
  outputs.emplace_back(path, sha256_file_hex(path));
}

std::string iso8601_utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
  json obj;
  obj["tool_version"] = manifest.tool_version;
  obj["command_line"] = manifest.command_line;
  obj["config_digest"] = manifest.config_digest;
  obj["seeds"] = manifest.seeds;
  json inputs = json::array();
  for (const auto& [p, digest] : manifest.inputs) {
    inputs.push_back({{"path", p}, {"sha256", digest}});
  }
  obj["inputs"] = inputs;
  json outputs = json::array();
  for (const auto& [p, digest] : manifest.outputs) {
    outputs.push_back({{"path", p}, {"sha256", digest}});
  }
  obj["outputs"] = outputs;
  obj["started_at"] = manifest.started_at;
  obj["finished_at"] = manifest.finished_at;

  std::ofstream out(path);
  if (!out) throw std::runtime_error("manifest: cannot write file: " + path);
  out << obj.dump(2) << "\n";
}

std::string manifest_path_for(const std::string& output_path) {
  return output_path + ".manifest.json";
}

}  // namespace morallex
