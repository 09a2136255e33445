#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace stopir {

/// A normalized, non-empty UTF-8 term. Tokens never contain whitespace,
/// punctuation, stripped diacritics or tatweel.
using Token = std::string;

struct NormalizeOptions {
    /// Remove fathatan..sukun (U+064B-U+0652) and tatweel (U+0640).
    bool strip_diacritics = true;

    friend auto operator==(NormalizeOptions, NormalizeOptions) -> bool = default;
};

/// Light Arabic normalization:
///   - optional removal of diacritics and tatweel,
///   - alef-madda / alef-hamza-above / alef-hamza-below -> bare alef,
///   - word-final alef-maqsura -> yeh,
///   - word-final teh-marbuta -> heh.
/// Idempotent and never lengthens the text.
[[nodiscard]] auto normalize(std::u32string_view text, NormalizeOptions options = {})
    -> std::u32string;

/// UTF-8 convenience overload. Throws ParseError on invalid UTF-8.
[[nodiscard]] auto normalize_utf8(std::string_view text, NormalizeOptions options = {})
    -> std::string;

/// Splits text into maximal runs of Arabic letters or of Latin
/// alphanumerics. Everything else separates. Expects normalized input.
[[nodiscard]] auto tokenize(std::u32string_view text) -> std::vector<Token>;
[[nodiscard]] auto tokenize_utf8(std::string_view text) -> std::vector<Token>;

/// normalize + tokenize, the pipeline shared by documents, queries and
/// stoplist entries.
[[nodiscard]] auto analyze(std::string_view utf8_text, NormalizeOptions options = {})
    -> std::vector<Token>;

namespace chars {

[[nodiscard]] auto is_arabic_letter(char32_t c) noexcept -> bool;
/// Combining marks and tatweel that stay inside an Arabic word.
[[nodiscard]] auto is_arabic_mark(char32_t c) noexcept -> bool;
[[nodiscard]] auto is_strippable_mark(char32_t c) noexcept -> bool;
[[nodiscard]] auto is_latin_alnum(char32_t c) noexcept -> bool;

}  // namespace chars

}  // namespace stopir
