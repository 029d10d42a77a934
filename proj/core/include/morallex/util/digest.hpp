#ifndef MORALLEX_UTIL_DIGEST_HPP
#define MORALLEX_UTIL_DIGEST_HPP

#include <string>
#include <string_view>

namespace morallex {

// SHA-256 as lowercase hex.
std::string sha256_hex(std::string_view data);
std::string sha256_file_hex(const std::string& path);

// Leading 12 hex chars; enough to tell artifacts apart in metadata and
// schema ids without dragging the full digest everywhere.
std::string short_digest(std::string_view data);

}  // namespace morallex

#endif
