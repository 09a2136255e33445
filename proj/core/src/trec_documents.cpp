#include <array>
#include <cstdio>
#include <fstream>
#include <memory>

#include <zlib.h>

#include "stopir/error.hpp"
#include "stopir/index.hpp"
#include "stopir/utf8.hpp"

namespace stopir {

namespace {

auto trim(std::string_view s) -> std::string_view {
    auto const first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    auto const last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

// Finds the next opening <DOC> tag (with or without attributes) at or after
// `from`, skipping <DOCNO> and friends.
auto find_doc_open(std::string_view s, std::size_t from) -> std::size_t {
    while (true) {
        auto const pos = s.find("<DOC", from);
        if (pos == std::string_view::npos) {
            return pos;
        }
        auto const next = pos + 4;
        if (next < s.size() && (s[next] == '>' || s[next] == ' ' || s[next] == '\t')) {
            return pos;
        }
        from = next;
    }
}

}  // namespace

auto parse_trec_documents(std::string_view stream) -> std::vector<SourceDocument> {
    std::vector<SourceDocument> docs;
    std::size_t pos = 0;
    while (true) {
        auto const open = find_doc_open(stream, pos);
        if (open == std::string_view::npos) {
            break;
        }
        auto const body_begin = stream.find('>', open);
        if (body_begin == std::string_view::npos) {
            throw ParseError("unterminated <DOC> tag", ParseError::Unit::byte, open);
        }
        auto const close = stream.find("</DOC>", body_begin);
        if (close == std::string_view::npos) {
            throw ParseError("unterminated <DOC> block", ParseError::Unit::byte, open);
        }
        std::string_view const body = stream.substr(body_begin + 1, close - body_begin - 1);

        auto const docno_open = body.find("<DOCNO>");
        if (docno_open == std::string_view::npos) {
            throw ParseError("<DOC> without <DOCNO>", ParseError::Unit::byte, open);
        }
        auto const docno_close = body.find("</DOCNO>", docno_open);
        if (docno_close == std::string_view::npos) {
            throw ParseError("unterminated <DOCNO>", ParseError::Unit::byte,
                             body_begin + 1 + docno_open);
        }
        if (body.find("<DOCNO>", docno_close) != std::string_view::npos) {
            throw ParseError("<DOC> with more than one <DOCNO>", ParseError::Unit::byte, open);
        }
        SourceDocument doc;
        doc.docno = std::string(trim(body.substr(docno_open + 7, docno_close - docno_open - 7)));
        if (doc.docno.empty()) {
            throw ParseError("empty <DOCNO>", ParseError::Unit::byte, body_begin + 1 + docno_open);
        }

        std::size_t cursor = 0;
        bool first_region = true;
        while (true) {
            auto const text_open = body.find("<TEXT>", cursor);
            if (text_open == std::string_view::npos) {
                break;
            }
            auto const text_close = body.find("</TEXT>", text_open);
            if (text_close == std::string_view::npos) {
                throw ParseError("unterminated <TEXT>", ParseError::Unit::byte,
                                 body_begin + 1 + text_open);
            }
            if (!first_region) {
                doc.text.push_back('\n');
            }
            doc.text.append(body.substr(text_open + 6, text_close - text_open - 6));
            first_region = false;
            cursor = text_close + 7;
        }
        docs.push_back(std::move(doc));
        pos = close + 6;
    }
    return docs;
}

auto read_text_file(std::filesystem::path const& path, Encoding encoding) -> std::string {
    if (!std::filesystem::is_regular_file(path)) {
        throw DataError("cannot read " + path.string() + ": not a regular file");
    }
    std::unique_ptr<gzFile_s, decltype(&gzclose)> file(gzopen(path.string().c_str(), "rb"), &gzclose);
    if (!file) {
        throw DataError("cannot open " + path.string());
    }
    std::string bytes;
    std::array<char, 1 << 16> buffer{};
    while (true) {
        int const n = gzread(file.get(), buffer.data(), static_cast<unsigned>(buffer.size()));
        if (n < 0) {
            int errnum = 0;
            throw DataError("cannot read " + path.string() + ": " + gzerror(file.get(), &errnum));
        }
        if (n == 0) {
            break;
        }
        bytes.append(buffer.data(), static_cast<std::size_t>(n));
    }
    if (encoding == Encoding::cp1256) {
        return utf8::from_cp1256(bytes);
    }
    if (auto const bad = utf8::find_invalid(bytes); bad != std::string::npos) {
        throw ParseError(path.string() + ": invalid UTF-8", ParseError::Unit::byte, bad);
    }
    return bytes;
}

}  // namespace stopir
