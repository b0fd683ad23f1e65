#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace seap {

using Bytes = std::vector<std::uint8_t>;
using Hash32 = std::array<std::uint8_t, 32>;

Bytes from_string(const std::string& s);
std::string to_hex(std::span<const std::uint8_t> data);
Bytes concat(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

// SHA-256 of `data` (libsodium-backed).
Hash32 sha256(std::span<const std::uint8_t> data);

// True if `needle` occurs as a contiguous substring of `haystack`.
bool contains_bytes(std::span<const std::uint8_t> haystack, std::span<const std::uint8_t> needle);

} // namespace seap
