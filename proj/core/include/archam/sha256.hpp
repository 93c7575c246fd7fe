#pragma once

#include <string>
#include <string_view>

namespace archam {

// FIPS 180-4 SHA-256 digest as a lowercase hex string. Self-contained so the
// output manifests carry content digests without an external crypto
// dependency.
std::string sha256_hex(std::string_view bytes);

}  // namespace archam
