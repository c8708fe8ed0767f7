#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace wifiprox::cli {

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

/// What produced an output file: the command, its effective configuration
/// and digests of every input. Output paths are excluded from the config so
/// the same run in another directory hashes the same.
class Provenance {
 public:
  Provenance(std::string command, nlohmann::ordered_json config);

  void add_input(const std::string& role, const std::filesystem::path& path);

  std::string config_hash() const;

  /// "# key: value" lines for stdout.
  void print_header(std::ostream& out) const;

  /// Writes `<output>.meta.json` next to the output, including the output's
  /// own digest. Contains no timestamps or absolute paths.
  void write_sidecar(const std::filesystem::path& output) const;

 private:
  struct Input {
    std::string role;
    std::string name;
    std::string sha256;
  };

  std::string command_;
  nlohmann::ordered_json config_;
  std::vector<Input> inputs_;
};

}  // namespace wifiprox::cli
