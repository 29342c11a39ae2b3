#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace goefluct {

// 17 significant digits (lossless round-trip), '.' decimal, no locale.
// Used for every numeric CSV cell.
std::string format_double(double v);

// Shortest representation that still parses back to the same double; used
// for labels and console tables.
std::string format_double_short(double v);

// FNV-1a 64-bit content digest, used by run manifests.
std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace goefluct
