#include "stopir/textpipe.hpp"

#include <algorithm>

#include "stopir/utf8.hpp"

namespace stopir {

namespace chars {

auto is_arabic_letter(char32_t c) noexcept -> bool {
    return (c >= 0x0621 && c <= 0x063A) || (c >= 0x0641 && c <= 0x064A)
        || (c >= 0x066E && c <= 0x066F) || (c >= 0x0671 && c <= 0x06D3) || c == 0x06D5
        || (c >= 0x06EE && c <= 0x06EF) || (c >= 0x06FA && c <= 0x06FC) || c == 0x06FF;
}

auto is_strippable_mark(char32_t c) noexcept -> bool {
    return (c >= 0x064B && c <= 0x0652) || c == 0x0640;
}

auto is_arabic_mark(char32_t c) noexcept -> bool {
    return is_strippable_mark(c) || (c >= 0x0653 && c <= 0x065F) || c == 0x0670;
}

auto is_latin_alnum(char32_t c) noexcept -> bool {
    if ((c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') || (c >= U'0' && c <= U'9')) {
        return true;
    }
    // Arabic-Indic and extended Arabic-Indic digits.
    if ((c >= 0x0660 && c <= 0x0669) || (c >= 0x06F0 && c <= 0x06F9)) {
        return true;
    }
    // Latin-1 Supplement through Latin Extended-B letters, minus × and ÷.
    return c >= 0x00C0 && c <= 0x024F && c != 0x00D7 && c != 0x00F7;
}

}  // namespace chars

namespace {

constexpr char32_t kAlef = 0x0627;
constexpr char32_t kAlefMadda = 0x0622;
constexpr char32_t kAlefHamzaAbove = 0x0623;
constexpr char32_t kAlefHamzaBelow = 0x0625;
constexpr char32_t kAlefMaqsura = 0x0649;
constexpr char32_t kYeh = 0x064A;
constexpr char32_t kTehMarbuta = 0x0629;
constexpr char32_t kHeh = 0x0647;

// True when no Arabic letter follows position `i`, skipping over marks.
auto is_word_final(std::u32string const& s, std::size_t i) -> bool {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
        if (chars::is_arabic_letter(s[j])) {
            return false;
        }
        if (!chars::is_arabic_mark(s[j])) {
            return true;
        }
    }
    return true;
}

enum class CharClass { separator, arabic, latin };

auto classify(char32_t c) -> CharClass {
    if (chars::is_arabic_letter(c) || chars::is_arabic_mark(c)) {
        return CharClass::arabic;
    }
    if (chars::is_latin_alnum(c)) {
        return CharClass::latin;
    }
    return CharClass::separator;
}

}  // namespace

auto normalize(std::u32string_view text, NormalizeOptions options) -> std::u32string {
    std::u32string out;
    out.reserve(text.size());
    for (char32_t c : text) {
        if (options.strip_diacritics && chars::is_strippable_mark(c)) {
            continue;
        }
        if (c == kAlefMadda || c == kAlefHamzaAbove || c == kAlefHamzaBelow) {
            c = kAlef;
        }
        out.push_back(c);
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i] == kAlefMaqsura && is_word_final(out, i)) {
            out[i] = kYeh;
        } else if (out[i] == kTehMarbuta && is_word_final(out, i)) {
            out[i] = kHeh;
        }
    }
    return out;
}

auto normalize_utf8(std::string_view text, NormalizeOptions options) -> std::string {
    return utf8::encode(normalize(utf8::decode(text), options));
}

auto tokenize(std::u32string_view text) -> std::vector<Token> {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        CharClass const cls = classify(text[i]);
        if (cls == CharClass::separator) {
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        while (j < text.size() && classify(text[j]) == cls) {
            ++j;
        }
        auto const run = text.substr(i, j - i);
        // A run of bare marks carries no letter and is not a word.
        if (cls == CharClass::latin
            || std::any_of(run.begin(), run.end(), chars::is_arabic_letter)) {
            tokens.push_back(utf8::encode(run));
        }
        i = j;
    }
    return tokens;
}

auto tokenize_utf8(std::string_view text) -> std::vector<Token> {
    return tokenize(utf8::decode(text));
}

auto analyze(std::string_view utf8_text, NormalizeOptions options) -> std::vector<Token> {
    return tokenize(normalize(utf8::decode(utf8_text), options));
}

}  // namespace stopir
