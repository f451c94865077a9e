#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace qlab {

/// SHA-1 hex digest of a byte string.
std::string sha1_hex(std::string_view data);

/// Git-style blob hash: sha1("blob <size>\0" + content).
std::string git_blob_sha1(std::string_view content);

}  // namespace qlab
