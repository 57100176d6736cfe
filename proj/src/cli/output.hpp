#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

namespace spdc::cli {

enum class Format { json, csv };

/// Ordered in-memory artifact set; written in one step so a failed command leaves nothing behind.
using Artifacts = std::map<std::string, std::string>;

std::string sha256_hex(const std::string& bytes);

/// {"files": [{"name", "sha256", "bytes"}]} sorted by name.
nlohmann::json manifest(const Artifacts& files);

/// Writes every artifact plus manifest.json into dir. A directory created here is removed
/// again if any write fails.
void write_artifacts(const std::filesystem::path& dir, const Artifacts& files);

/// Writes text to a file, or to out when path is empty.
void write_text(const std::string& path, const std::string& text, std::ostream& out);

std::string dump(const nlohmann::json& doc);

/// CSV rendering: {"rows": [...]} becomes a table, anything else flattened key,value lines.
std::string to_csv(const nlohmann::json& doc);

std::string render(const nlohmann::json& doc, Format format);

}  // namespace spdc::cli
