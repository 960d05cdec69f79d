#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

namespace apisum::io {

/// Reads the whole file; throws FILE_NOT_FOUND if it does not exist.
std::string read_file(const std::filesystem::path& path);

/// Calls `on_line(line, line_number)` for each line (1-based, trailing '\r' removed).
void for_each_line(const std::filesystem::path& path,
                   const std::function<void(std::string_view, std::size_t)>& on_line);

/// Writes through a sibling temp file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace apisum::io
