#pragma once

#include <string>
#include <string_view>

namespace stopir::utf8 {

/// Strict UTF-8 decoding. Rejects overlong forms, surrogates and code points
/// above U+10FFFF. Throws ParseError with the byte offset of the first bad
/// sequence.
[[nodiscard]] auto decode(std::string_view bytes) -> std::u32string;

/// Returns the byte offset of the first invalid sequence, or npos.
[[nodiscard]] auto find_invalid(std::string_view bytes) noexcept -> std::size_t;

[[nodiscard]] auto encode(std::u32string_view text) -> std::string;
void append(std::string& out, char32_t cp);

/// Windows-1256 to UTF-8. Every byte maps to some code point, so this never
/// fails.
[[nodiscard]] auto from_cp1256(std::string_view bytes) -> std::string;

}  // namespace stopir::utf8
