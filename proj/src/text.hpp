#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace osst::text {

// True if `pos` does not point into the middle of a UTF-8 sequence.
bool is_utf8_boundary(std::string_view s, std::size_t pos);

// Byte offsets of each code point start, in order.
std::vector<std::size_t> codepoint_offsets(std::string_view s);

// Decoded code points paired with their byte offsets. Invalid bytes are
// treated as single-byte code points (latin-1 fallback).
struct Codepoint {
    char32_t value;
    std::size_t offset;
    std::size_t nbytes;
};
std::vector<Codepoint> decode_utf8(std::string_view s);

std::vector<std::string_view> whitespace_tokens(std::string_view s);

std::string to_lower_ascii(std::string_view s);

std::string trim(std::string_view s);

// SHA-256 as lowercase hex.
std::string sha256_hex(std::string_view data);

}  // namespace osst::text
