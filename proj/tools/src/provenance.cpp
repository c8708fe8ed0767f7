#include "provenance.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <memory>
#include <ostream>

#include <openssl/evp.h>

#include "wifiprox/errors.hpp"

namespace wifiprox::cli {

namespace {

using DigestCtx = std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)>;

DigestCtx new_sha256() {
  DigestCtx ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw error("SHA-256 unavailable");
  return ctx;
}

std::string finish(EVP_MD_CTX* ctx) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_DigestFinal_ex(ctx, md.data(), &len) != 1) throw error("SHA-256 failed");
  std::string hex;
  hex.reserve(2 * len);
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  auto ctx = new_sha256();
  EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size());
  return finish(ctx.get());
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + path.string() + "'");
  auto ctx = new_sha256();
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  if (in.bad()) throw io_error("read failed for '" + path.string() + "'");
  return finish(ctx.get());
}

Provenance::Provenance(std::string command, nlohmann::ordered_json config)
    : command_(std::move(command)), config_(std::move(config)) {}

void Provenance::add_input(const std::string& role, const std::filesystem::path& path) {
  inputs_.push_back({role, path.filename().string(), sha256_file(path)});
}

std::string Provenance::config_hash() const {
  nlohmann::ordered_json doc;
  doc["command"] = command_;
  doc["config"] = config_;
  return sha256_hex(doc.dump());
}

void Provenance::print_header(std::ostream& out) const {
  out << "# command: " << command_ << '\n';
  if (config_.contains("seed")) out << "# seed: " << config_["seed"].dump() << '\n';
  out << "# config sha256: " << config_hash() << '\n';
  for (const auto& in : inputs_) out << "# input " << in.role << " (" << in.name << ") sha256: " << in.sha256 << '\n';
}

void Provenance::write_sidecar(const std::filesystem::path& output) const {
  nlohmann::ordered_json doc;
  doc["command"] = command_;
  doc["config"] = config_;
  doc["config_sha256"] = config_hash();
  auto inputs = nlohmann::ordered_json::array();
  for (const auto& in : inputs_) inputs.push_back({{"role", in.role}, {"name", in.name}, {"sha256", in.sha256}});
  doc["inputs"] = std::move(inputs);
  doc["output"] = {{"name", output.filename().string()}, {"sha256", sha256_file(output)}};

  auto meta = output;
  meta += ".meta.json";
  std::ofstream out(meta, std::ios::binary);
  if (!out) throw io_error("cannot write '" + meta.string() + "'");
  out << doc.dump(2) << '\n';
  if (!out) throw io_error("write failed for '" + meta.string() + "'");
}

}  // namespace wifiprox::cli
