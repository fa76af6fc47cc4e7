#pragma once

#include <string>
#include <string_view>

namespace geoforge {

// Hex-encoded SHA-256 digest of the bytes.
std::string sha256_hex(std::string_view bytes);

// Digest of a file's contents. Throws DataError when the file cannot be read.
std::string sha256_file(const std::string& path);

}  // namespace geoforge
