#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace tacit {

std::string sha256_hex(std::span<const std::uint8_t> bytes);
std::string sha256_hex(std::string_view text);

// All of these throw IoError.
std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);
void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text(const std::filesystem::path& path, std::string_view text);

// Throws IoError when unreadable, ValidationError when not JSON.
nlohmann::json read_json(const std::filesystem::path& path);
// Two-space indent, trailing newline; object keys are sorted by nlohmann::json.
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace tacit
