#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stopir/stoplists.hpp"
#include "stopir/textpipe.hpp"

namespace stopir {

/// One `<DOC>` block: the trimmed DOCNO and the concatenated TEXT regions.
struct SourceDocument {
    std::string docno;
    std::string text;

    friend auto operator==(SourceDocument const&, SourceDocument const&) -> bool = default;
};

/// Parses a TIPSTER/TREC SGML stream. Content outside `<DOC>` blocks is
/// ignored. Multiple `<TEXT>` regions are joined with a newline.
[[nodiscard]] auto parse_trec_documents(std::string_view stream) -> std::vector<SourceDocument>;

enum class Encoding { utf8, cp1256 };

/// Reads a corpus or topics file, transparently gunzipping, and returns UTF-8.
/// UTF-8 input is validated; errors name the file and byte offset.
[[nodiscard]] auto read_text_file(std::filesystem::path const& path,
                                  Encoding encoding = Encoding::utf8) -> std::string;

using DocId = std::uint32_t;
using TermId = std::uint32_t;

struct Posting {
    DocId doc;
    std::uint32_t tf;

    friend auto operator==(Posting, Posting) -> bool = default;
};

struct BuildOptions {
    NormalizeOptions normalize;
    /// 0 means std::thread::hardware_concurrency().
    unsigned threads = 1;
};

/// Immutable inverted index with the collection statistics needed by the
/// TF*IDF, BM25 and Dirichlet-smoothed language-model scorers.
///
/// Terms are numbered in byte-lexicographic order; postings are sorted by
/// document ordinal. When built with a stoplist, document lengths and all
/// collection statistics exclude the removed tokens.
class Index {
  public:
    static constexpr std::uint32_t kFormatVersion = 1;

    Index() = default;

    [[nodiscard]] auto doc_count() const noexcept -> std::size_t { return m_docnos.size(); }
    [[nodiscard]] auto docno(DocId doc) const -> std::string const& { return m_docnos.at(doc); }
    [[nodiscard]] auto doc_length(DocId doc) const -> std::uint32_t { return m_doc_lengths.at(doc); }
    [[nodiscard]] auto doc_lengths() const noexcept -> std::span<std::uint32_t const> {
        return m_doc_lengths;
    }
    [[nodiscard]] auto total_tokens() const noexcept -> std::uint64_t { return m_total_tokens; }
    /// 0 for an empty collection.
    [[nodiscard]] auto avg_doc_length() const noexcept -> double;

    [[nodiscard]] auto term_count() const noexcept -> std::size_t { return m_terms.size(); }
    [[nodiscard]] auto term(TermId id) const -> std::string const& { return m_terms.at(id); }
    [[nodiscard]] auto find_term(std::string_view term) const -> std::optional<TermId>;
    [[nodiscard]] auto postings(TermId id) const -> std::span<Posting const> {
        return m_postings.at(id);
    }
    [[nodiscard]] auto df(TermId id) const -> std::size_t { return m_postings.at(id).size(); }
    [[nodiscard]] auto ctf(TermId id) const -> std::uint64_t { return m_ctf.at(id); }
    /// 0 for unknown terms.
    [[nodiscard]] auto ctf(std::string_view term) const -> std::uint64_t;
    [[nodiscard]] auto df(std::string_view term) const -> std::size_t;

    [[nodiscard]] auto stoplist() const noexcept -> std::optional<Stoplist> const& { return m_stoplist; }
    [[nodiscard]] auto normalize_options() const noexcept -> NormalizeOptions { return m_normalize; }
    /// Tokens dropped by the stoplist during the build.
    [[nodiscard]] auto removed_tokens() const noexcept -> std::uint64_t { return m_removed_tokens; }

    [[nodiscard]] auto term_frequencies() const -> TermFrequencyTable;

    /// The document/query pipeline this index was built with.
    [[nodiscard]] auto analyze(std::string_view utf8_text) const -> std::vector<Token>;

    /// Throws DataError if any structural invariant is violated.
    void validate() const;

    void write(std::ostream& out) const;
    [[nodiscard]] static auto read(std::istream& in) -> Index;
    void save(std::filesystem::path const& path) const;
    [[nodiscard]] static auto load(std::filesystem::path const& path) -> Index;

  private:
    friend auto build_index(std::span<SourceDocument const>,
                            std::optional<Stoplist> const&,
                            BuildOptions) -> Index;

    void rebuild_lookup();

    std::vector<std::string> m_docnos;
    std::vector<std::uint32_t> m_doc_lengths;
    std::uint64_t m_total_tokens = 0;
    std::vector<std::string> m_terms;
    std::vector<std::vector<Posting>> m_postings;
    std::vector<std::uint64_t> m_ctf;
    struct TermHash {
        using is_transparent = void;
        auto operator()(std::string_view s) const noexcept -> std::size_t {
            return std::hash<std::string_view>{}(s);
        }
    };
    std::unordered_map<std::string, TermId, TermHash, std::equal_to<>> m_lookup;
    std::optional<Stoplist> m_stoplist;
    NormalizeOptions m_normalize;
    std::uint64_t m_removed_tokens = 0;
};

/// Normalizes, tokenizes and (optionally) stoplist-filters every document,
/// then counts postings. The result does not depend on `options.threads`.
/// Throws DataError on a duplicate docno.
[[nodiscard]] auto build_index(std::span<SourceDocument const> docs,
                               std::optional<Stoplist> const& stoplist = std::nullopt,
                               BuildOptions options = {}) -> Index;

}  // namespace stopir
