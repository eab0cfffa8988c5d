#include "pdc/array_io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <bit>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "pdc/errors.hpp"

#ifndef PDC_VERSION
#define PDC_VERSION "unknown"
#endif

namespace pdc {

static_assert(std::endian::native == std::endian::little, "array files are little-endian");

namespace {

fs::path with_ext(const fs::path& base, const char* ext) {
  fs::path p = base;
  p += ext;
  return p;
}

void write_raw(const fs::path& path, const void* data, std::size_t bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(bytes));
  if (!out) throw std::runtime_error("short write to " + path.string());
}

void write_sidecar(const fs::path& base, const char* dtype, const std::vector<std::size_t>& shape,
                   const json& meta) {
  json j = meta.is_object() ? meta : json::object();
  j["dtype"] = dtype;
  j["shape"] = shape;
  j["layout"] = "row-major, little-endian";
  write_json(with_ext(base, ".json"), j);
}

std::size_t product(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t s : shape) n *= s;
  return n;
}

template <class T>
std::vector<T> read_payload(const fs::path& base, const char* dtype, ArrayInfo* info_out) {
  ArrayInfo info = read_array_info(base);
  if (info.dtype != dtype)
    throw std::runtime_error(base.string() + ": expected dtype " + dtype + ", found " + info.dtype);
  std::vector<T> data(product(info.shape));
  const fs::path bin = with_ext(base, ".bin");
  std::ifstream in(bin, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + bin.string());
  in.read(reinterpret_cast<char*>(data.data()),
          static_cast<std::streamsize>(data.size() * sizeof(T)));
  if (in.gcount() != static_cast<std::streamsize>(data.size() * sizeof(T)))
    throw std::runtime_error(bin.string() + ": size does not match its sidecar shape");
  if (info_out) *info_out = std::move(info);
  return data;
}

}  // namespace

void write_array(const fs::path& base, const std::vector<double>& data,
                 std::vector<std::size_t> shape, const json& meta) {
  if (product(shape) != data.size()) throw std::invalid_argument("shape does not match data");
  write_raw(with_ext(base, ".bin"), data.data(), data.size() * sizeof(double));
  write_sidecar(base, "f64", shape, meta);
}

void write_array(const fs::path& base, const std::complex<double>* data, std::size_t n,
                 std::vector<std::size_t> shape, const json& meta) {
  if (product(shape) != n) throw std::invalid_argument("shape does not match data");
  write_raw(with_ext(base, ".bin"), data, n * sizeof(std::complex<double>));
  write_sidecar(base, "c128", shape, meta);
}

ArrayInfo read_array_info(const fs::path& base) {
  json j = read_json(with_ext(base, ".json"));
  ArrayInfo info;
  info.dtype = j.at("dtype").get<std::string>();
  info.shape = j.at("shape").get<std::vector<std::size_t>>();
  info.meta = std::move(j);
  return info;
}

std::vector<double> read_real_array(const fs::path& base, ArrayInfo* info) {
  return read_payload<double>(base, "f64", info);
}

std::vector<std::complex<double>> read_complex_array(const fs::path& base, ArrayInfo* info) {
  return read_payload<std::complex<double>>(base, "c128", info);
}

void write_json(const fs::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  write_raw(path, text.data(), text.size());
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

json digest_tree(const fs::path& dir) {
  std::vector<std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const std::string rel = fs::relative(e.path(), dir).generic_string();
    if (rel == "manifest.json") continue;
    files.push_back(rel);
  }
  std::sort(files.begin(), files.end());
  json out = json::object();
  for (const auto& f : files) out[f] = sha256_file(dir / f);
  return out;
}

void write_manifest(const fs::path& dir, json info) {
  info["version"] = version_string();
  info["files"] = digest_tree(dir);
  write_json(dir / "manifest.json", info);
}

std::string version_string() { return PDC_VERSION; }

}  // namespace pdc
