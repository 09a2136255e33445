#include "stopir/stoplists.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "stopir/error.hpp"
#include "stopir/utf8.hpp"

namespace stopir {

auto to_string(Provenance p) -> std::string_view {
    switch (p) {
    case Provenance::general: return "general";
    case Provenance::corpus_based: return "corpus-based";
    case Provenance::combined: return "combined";
    case Provenance::custom: return "custom";
    }
    return "custom";
}

Stoplist::Stoplist(std::string name,
                   Provenance provenance,
                   std::span<std::string const> words,
                   NormalizeOptions options)
    : m_name(std::move(name)), m_provenance(provenance) {
    for (auto const& word : words) {
        for (auto& token : analyze(word, options)) {
            m_words.insert(std::move(token));
        }
    }
}

auto load_stoplist(std::istream& in, std::string name, Provenance provenance, NormalizeOptions options)
    -> Stoplist {
    std::vector<std::string> words;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) {
            line.erase(0, 3);
        }
        if (utf8::find_invalid(line) != std::string_view::npos) {
            throw ParseError("invalid UTF-8 in stoplist '" + name + "'", ParseError::Unit::line, line_no);
        }
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        words.push_back(std::move(line));
    }
    return Stoplist(std::move(name), provenance, words, options);
}

auto load_stoplist_file(std::filesystem::path const& path,
                        std::string name,
                        Provenance provenance,
                        NormalizeOptions options) -> Stoplist {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open stoplist file " + path.string());
    }
    return load_stoplist(in, std::move(name), provenance, options);
}

void write_stoplist(std::ostream& out, Stoplist const& list) {
    out << "# name: " << list.name() << '\n';
    out << "# provenance: " << to_string(list.provenance()) << '\n';
    for (auto const& word : list.words()) {
        out << word << '\n';
    }
}

auto build_corpus_stoplist(TermFrequencyTable const& freqs,
                           std::uint64_t cutoff,
                           std::set<Token> const& exclusions,
                           std::string name) -> Stoplist {
    Stoplist result;
    result.m_name = std::move(name);
    result.m_provenance = Provenance::corpus_based;
    for (auto const& [term, freq] : freqs) {
        if (freq > cutoff && !exclusions.contains(term)) {
            result.m_words.insert(term);
        }
    }
    return result;
}

auto combine(Stoplist const& a, Stoplist const& b, std::string name) -> Stoplist {
    Stoplist result;
    result.m_name = std::move(name);
    result.m_provenance = Provenance::combined;
    result.m_words = a.words();
    result.m_words.insert(b.words().begin(), b.words().end());
    return result;
}

auto filter_tokens(std::span<Token const> tokens, Stoplist const& list) -> std::vector<Token> {
    std::vector<Token> kept;
    kept.reserve(tokens.size());
    std::copy_if(tokens.begin(), tokens.end(), std::back_inserter(kept), [&](Token const& t) {
        return !list.contains(t);
    });
    return kept;
}

auto overlap(Stoplist const& a, Stoplist const& b) -> std::size_t {
    std::size_t count = 0;
    for (auto const& word : a.words()) {
        count += b.contains(word) ? 1 : 0;
    }
    return count;
}

auto parse_stoplist_code(std::string_view code) -> std::optional<StoplistCode> {
    if (code == "GS") {
        return StoplistCode::GS;
    }
    if (code == "CBS") {
        return StoplistCode::CBS;
    }
    if (code == "CS") {
        return StoplistCode::CS;
    }
    return std::nullopt;
}

auto to_string(StoplistCode code) -> std::string_view {
    switch (code) {
    case StoplistCode::GS: return "GS";
    case StoplistCode::CBS: return "CBS";
    case StoplistCode::CS: return "CS";
    }
    return "";
}

namespace detail {
extern std::string_view const kGeneralStoplist;
extern std::string_view const kCorpusStoplist;
}  // namespace detail

auto bundled_stoplist_text(StoplistCode code) -> std::string_view {
    switch (code) {
    case StoplistCode::GS: return detail::kGeneralStoplist;
    case StoplistCode::CBS: return detail::kCorpusStoplist;
    case StoplistCode::CS: return {};
    }
    return {};
}

namespace {

auto parse_bundled(StoplistCode code, Provenance provenance, NormalizeOptions options) -> Stoplist {
    std::string text(bundled_stoplist_text(code));
    std::vector<std::string> words;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string::npos) {
            end = text.size();
        }
        std::string line = text.substr(pos, end - pos);
        if (!line.empty() && line.front() != '#') {
            words.push_back(std::move(line));
        }
        pos = end + 1;
    }
    return Stoplist(std::string(to_string(code)), provenance, words, options);
}

}  // namespace

auto bundled_stoplist(StoplistCode code, NormalizeOptions options) -> Stoplist {
    switch (code) {
    case StoplistCode::GS: return parse_bundled(code, Provenance::general, options);
    case StoplistCode::CBS: return parse_bundled(code, Provenance::corpus_based, options);
    case StoplistCode::CS:
        return combine(bundled_stoplist(StoplistCode::GS, options),
                       bundled_stoplist(StoplistCode::CBS, options),
                       "CS");
    }
    throw InvalidArgument("unknown stoplist code");
}

}  // namespace stopir
