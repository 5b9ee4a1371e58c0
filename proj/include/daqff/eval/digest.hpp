#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

namespace daqff::eval {

/// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view bytes);
std::string file_sha256(const std::filesystem::path& path);
/// Digest of the compact dump with keys sorted, so key order in the source file does not matter.
std::string json_digest(const nlohmann::json& value);

} // namespace daqff::eval
