#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace engage {

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

/// Split one CSV line on commas. Fields in this toolkit's formats never
/// contain commas or quotes, so no quoting layer is needed.
std::vector<std::string> split_csv_line(const std::string& line);

/// FNV-1a 64-bit digest of a byte string.
std::uint64_t fnv1a64(const std::string& data);
std::string fnv1a_hex(const std::string& data);

std::string file_digest(const std::filesystem::path& path);

std::string format_double(double v); // shortest round-trippable decimal

} // namespace engage
