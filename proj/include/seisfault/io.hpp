#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace seisfault {

// Whole-file helpers; failures throw IoError.
std::vector<unsigned char> read_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const unsigned char> bytes);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace seisfault
