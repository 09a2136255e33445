#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stopir/textpipe.hpp"

namespace stopir {

enum class Provenance { general, corpus_based, combined, custom };

[[nodiscard]] auto to_string(Provenance p) -> std::string_view;

/// An immutable set of normalized stopwords.
class Stoplist {
  public:
    using WordSet = std::set<Token, std::less<>>;

    Stoplist() = default;

    /// Every entry is passed through `analyze`, so the stored words are
    /// normalized tokens regardless of how the input was spelled.
    Stoplist(std::string name,
             Provenance provenance,
             std::span<std::string const> words,
             NormalizeOptions options = {});

    [[nodiscard]] auto name() const noexcept -> std::string const& { return m_name; }
    [[nodiscard]] auto provenance() const noexcept -> Provenance { return m_provenance; }
    [[nodiscard]] auto words() const noexcept -> WordSet const& { return m_words; }
    [[nodiscard]] auto size() const noexcept -> std::size_t { return m_words.size(); }
    [[nodiscard]] auto empty() const noexcept -> bool { return m_words.empty(); }
    [[nodiscard]] auto contains(std::string_view token) const -> bool {
        return m_words.find(token) != m_words.end();
    }

  private:
    friend auto combine(Stoplist const&, Stoplist const&, std::string) -> Stoplist;
    friend auto build_corpus_stoplist(std::map<Token, std::uint64_t> const&,
                                      std::uint64_t,
                                      std::set<Token> const&,
                                      std::string) -> Stoplist;

    std::string m_name;
    Provenance m_provenance = Provenance::custom;
    WordSet m_words;
};

/// term -> collection frequency
using TermFrequencyTable = std::map<Token, std::uint64_t>;

/// Reads one word per line. Blank lines and lines starting with '#' are
/// skipped. Throws ParseError naming the line on invalid UTF-8.
[[nodiscard]] auto load_stoplist(std::istream& in,
                                 std::string name,
                                 Provenance provenance,
                                 NormalizeOptions options = {}) -> Stoplist;

[[nodiscard]] auto load_stoplist_file(std::filesystem::path const& path,
                                      std::string name,
                                      Provenance provenance,
                                      NormalizeOptions options = {}) -> Stoplist;

/// Words sorted, one per line, preceded by a two-line comment header.
void write_stoplist(std::ostream& out, Stoplist const& list);

/// { t : freqs[t] > cutoff } minus exclusions.
[[nodiscard]] auto build_corpus_stoplist(TermFrequencyTable const& freqs,
                                         std::uint64_t cutoff,
                                         std::set<Token> const& exclusions = {},
                                         std::string name = "CBS") -> Stoplist;

/// Set union; provenance is `combined`.
[[nodiscard]] auto combine(Stoplist const& a, Stoplist const& b, std::string name = "CS")
    -> Stoplist;

/// Removes every member of `list`, preserving order.
[[nodiscard]] auto filter_tokens(std::span<Token const> tokens, Stoplist const& list)
    -> std::vector<Token>;

[[nodiscard]] auto overlap(Stoplist const& a, Stoplist const& b) -> std::size_t;

/// The three lists shipped with the library.
enum class StoplistCode { GS, CBS, CS };

[[nodiscard]] auto parse_stoplist_code(std::string_view code) -> std::optional<StoplistCode>;
[[nodiscard]] auto to_string(StoplistCode code) -> std::string_view;

/// Raw text of a bundled list file. CS has no file of its own and yields an
/// empty view.
[[nodiscard]] auto bundled_stoplist_text(StoplistCode code) -> std::string_view;
[[nodiscard]] auto bundled_stoplist(StoplistCode code, NormalizeOptions options = {}) -> Stoplist;

}  // namespace stopir
