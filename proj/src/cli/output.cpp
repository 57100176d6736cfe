#include "output.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "spdc/error.hpp"

namespace spdc::cli {

namespace fs = std::filesystem;

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw NumericError("SHA-256 digest failed");
  }
  std::string hex;
  for (unsigned int j = 0; j < len; ++j) hex += fmt::format("{:02x}", digest[j]);
  return hex;
}

nlohmann::json manifest(const Artifacts& files) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& [name, bytes] : files) {
    list.push_back({{"name", name}, {"sha256", sha256_hex(bytes)}, {"bytes", bytes.size()}});
  }
  return {{"files", list}};
}

void write_artifacts(const fs::path& dir, const Artifacts& files) {
  std::error_code ec;
  const bool created = !fs::exists(dir, ec);
  if (created && !fs::create_directories(dir, ec)) {
    throw ConfigError(fmt::format("cannot create output directory '{}': {}", dir.string(), ec.message()));
  }
  if (!fs::is_directory(dir)) throw ConfigError(fmt::format("'{}' is not a directory", dir.string()));
  Artifacts all = files;
  all["manifest.json"] = dump(manifest(files));
  try {
    for (const auto& [name, bytes] : all) {
      std::ofstream f(dir / name, std::ios::binary);
      f << bytes;
      if (!f) throw ConfigError(fmt::format("cannot write '{}'", (dir / name).string()));
    }
  } catch (...) {
    if (created) fs::remove_all(dir, ec);
    else
      for (const auto& [name, _] : all) fs::remove(dir / name, ec);
    throw;
  }
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) {
    std::error_code ec;
    fs::remove(path, ec);
    throw ConfigError(fmt::format("cannot write '{}'", path));
  }
}

std::string dump(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

namespace {

std::string cell(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void flatten(const nlohmann::json& v, const std::string& prefix, std::ostringstream& os) {
  if (v.is_object()) {
    for (const auto& [k, item] : v.items()) flatten(item, prefix.empty() ? k : prefix + "." + k, os);
  } else if (v.is_array()) {
    for (std::size_t j = 0; j < v.size(); ++j) flatten(v[j], fmt::format("{}.{}", prefix, j), os);
  } else {
    os << prefix << ',' << cell(v) << '\n';
  }
}

}  // namespace

std::string to_csv(const nlohmann::json& doc) {
  std::ostringstream os;
  if (doc.is_object() && doc.contains("rows") && doc["rows"].is_array() && !doc["rows"].empty()) {
    const auto& rows = doc["rows"];
    std::vector<std::string> cols;
    for (const auto& [k, _] : rows[0].items()) cols.push_back(k);
    for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << cols[c];
    os << '\n';
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << cell(row.at(cols[c]));
      os << '\n';
    }
    return os.str();
  }
  os << "key,value\n";
  flatten(doc, "", os);
  return os.str();
}

std::string render(const nlohmann::json& doc, Format format) {
  return format == Format::json ? dump(doc) : to_csv(doc);
}

}  // namespace spdc::cli
