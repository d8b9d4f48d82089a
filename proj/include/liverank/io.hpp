#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>

namespace liverank {

/// Whole file contents. Throws IoError when the file cannot be read.
std::string read_file(const std::filesystem::path& path);

/// Writes through a sibling temporary file and renames it into place, so a
/// reader never observes a partially written result.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
void write_file_atomic(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& writer);

/// Formats like printf("%.*g", digits, value), locale independent.
std::string format_general(double value, int digits);

/// Shortest text that parses back to the same double.
std::string format_roundtrip(double value);

}  // namespace liverank
