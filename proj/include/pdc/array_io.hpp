#pragma once

// Array artifacts: raw little-endian `.bin` payloads with a `.json` sidecar
// (dtype, shape, row-major layout, axes, units, free-form metadata), and
// SHA-256 manifests over an output directory.

#include <complex>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace pdc {

using json = nlohmann::json;
namespace fs = std::filesystem;

struct ArrayInfo {
  std::string dtype;  // "f64" or "c128"
  std::vector<std::size_t> shape;
  json meta = json::object();
};

/// Writes `<base>.bin` and `<base>.json`. `meta` is merged into the sidecar.
void write_array(const fs::path& base, const std::vector<double>& data,
                 std::vector<std::size_t> shape, const json& meta = json::object());
void write_array(const fs::path& base, const std::complex<double>* data, std::size_t n,
                 std::vector<std::size_t> shape, const json& meta = json::object());

ArrayInfo read_array_info(const fs::path& base);
std::vector<double> read_real_array(const fs::path& base, ArrayInfo* info = nullptr);
std::vector<std::complex<double>> read_complex_array(const fs::path& base,
                                                     ArrayInfo* info = nullptr);

void write_json(const fs::path& path, const json& j);
json read_json(const fs::path& path);
void write_text(const fs::path& path, const std::string& text);

/// Hex SHA-256 of a file's contents.
std::string sha256_file(const fs::path& path);

/// Digests of every regular file under `dir` (relative paths, sorted),
/// excluding `manifest.json` itself.
json digest_tree(const fs::path& dir);

/// Writes `dir/manifest.json` = `info` + {"version", "files": digest_tree(dir)}.
void write_manifest(const fs::path& dir, json info);

std::string version_string();

}  // namespace pdc
