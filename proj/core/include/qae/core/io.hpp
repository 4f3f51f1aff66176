#pragma once

#include <filesystem>
#include <string>

namespace qae {

/// Writes `bytes` to `<path>.tmp` and renames it over `path`, so readers never
/// observe a partial file. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);

/// Whole file as bytes. Throws IoError.
std::string read_file(const std::filesystem::path& path);

}  // namespace qae
