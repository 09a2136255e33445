#include "stopir/utf8.hpp"

#include <array>
#include <cstdint>

#include "stopir/error.hpp"

namespace stopir::utf8 {

namespace {

// Decodes one sequence starting at `pos`. Returns the code point and advances
// `pos`; returns false on an invalid sequence without advancing.
auto decode_one(std::string_view s, std::size_t& pos, char32_t& cp) noexcept -> bool {
    auto byte = [&](std::size_t i) { return static_cast<std::uint8_t>(s[i]); };
    std::uint8_t const lead = byte(pos);
    std::size_t len = 0;
    char32_t min = 0;
    if (lead < 0x80) {
        cp = lead;
        ++pos;
        return true;
    }
    if ((lead & 0xE0) == 0xC0) {
        len = 2;
        cp = lead & 0x1F;
        min = 0x80;
    } else if ((lead & 0xF0) == 0xE0) {
        len = 3;
        cp = lead & 0x0F;
        min = 0x800;
    } else if ((lead & 0xF8) == 0xF0) {
        len = 4;
        cp = lead & 0x07;
        min = 0x10000;
    } else {
        return false;
    }
    if (pos + len > s.size()) {
        return false;
    }
    for (std::size_t i = 1; i < len; ++i) {
        std::uint8_t const b = byte(pos + i);
        if ((b & 0xC0) != 0x80) {
            return false;
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        return false;
    }
    pos += len;
    return true;
}

constexpr std::array<char16_t, 128> kCp1256High = {
    0x20AC, 0x067E, 0x201A, 0x0192, 0x201E, 0x2026, 0x2020, 0x2021,
    0x02C6, 0x2030, 0x0679, 0x2039, 0x0152, 0x0686, 0x0698, 0x0688,
    0x06AF, 0x2018, 0x2019, 0x201C, 0x201D, 0x2022, 0x2013, 0x2014,
    0x06A9, 0x2122, 0x0691, 0x203A, 0x0153, 0x200C, 0x200D, 0x06BA,
    0x00A0, 0x060C, 0x00A2, 0x00A3, 0x00A4, 0x00A5, 0x00A6, 0x00A7,
    0x00A8, 0x00A9, 0x06BE, 0x00AB, 0x00AC, 0x00AD, 0x00AE, 0x00AF,
    0x00B0, 0x00B1, 0x00B2, 0x00B3, 0x00B4, 0x00B5, 0x00B6, 0x00B7,
    0x00B8, 0x00B9, 0x061B, 0x00BB, 0x00BC, 0x00BD, 0x00BE, 0x061F,
    0x06C1, 0x0621, 0x0622, 0x0623, 0x0624, 0x0625, 0x0626, 0x0627,
    0x0628, 0x0629, 0x062A, 0x062B, 0x062C, 0x062D, 0x062E, 0x062F,
    0x0630, 0x0631, 0x0632, 0x0633, 0x0634, 0x0635, 0x0636, 0x00D7,
    0x0637, 0x0638, 0x0639, 0x063A, 0x0640, 0x0641, 0x0642, 0x0643,
    0x00E0, 0x0644, 0x00E2, 0x0645, 0x0646, 0x0647, 0x0648, 0x00E7,
    0x00E8, 0x00E9, 0x00EA, 0x00EB, 0x0649, 0x064A, 0x00EE, 0x00EF,
    0x064B, 0x064C, 0x064D, 0x064E, 0x00F4, 0x064F, 0x0650, 0x00F7,
    0x0651, 0x00F9, 0x0652, 0x00FB, 0x00FC, 0x200E, 0x200F, 0x06D2,
};

}  // namespace

auto find_invalid(std::string_view bytes) noexcept -> std::size_t {
    std::size_t pos = 0;
    char32_t cp = 0;
    while (pos < bytes.size()) {
        if (!decode_one(bytes, pos, cp)) {
            return pos;
        }
    }
    return std::string_view::npos;
}

auto decode(std::string_view bytes) -> std::u32string {
    std::u32string out;
    out.reserve(bytes.size());
    std::size_t pos = 0;
    char32_t cp = 0;
    while (pos < bytes.size()) {
        if (!decode_one(bytes, pos, cp)) {
            throw ParseError("invalid UTF-8 sequence", ParseError::Unit::byte, pos);
        }
        out.push_back(cp);
    }
    return out;
}

void append(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

auto encode(std::u32string_view text) -> std::string {
    std::string out;
    out.reserve(text.size() * 2);
    for (char32_t cp : text) {
        append(out, cp);
    }
    return out;
}

auto from_cp1256(std::string_view bytes) -> std::string {
    std::string out;
    out.reserve(bytes.size() * 2);
    for (char c : bytes) {
        auto const b = static_cast<std::uint8_t>(c);
        append(out, b < 0x80 ? char32_t{b} : char32_t{kCp1256High[b - 0x80]});
    }
    return out;
}

}  // namespace stopir::utf8
