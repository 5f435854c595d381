// Minimal SHA-256 (FIPS 180-4), used to fingerprint canonical config text so
// every output file can carry the hash of the configuration that produced it.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace lamsa {

std::string sha256_hex(std::string_view data);

}  // namespace lamsa
