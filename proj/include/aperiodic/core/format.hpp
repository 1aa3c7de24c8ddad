#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace aperiodic {

/// Locale-independent decimal with 17 significant digits.
std::string format_double(double value);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace aperiodic
