#include "stopir/index.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <thread>
#include <unordered_set>

#include "stopir/error.hpp"

namespace stopir {

namespace {

// Per-document output of the analysis phase.
struct AnalyzedDoc {
    std::vector<std::pair<Token, std::uint32_t>> term_counts;  // sorted by term
    std::uint32_t length = 0;
    std::uint64_t removed = 0;
};

auto analyze_doc(SourceDocument const& doc,
                 Stoplist const* stoplist,
                 NormalizeOptions options) -> AnalyzedDoc {
    AnalyzedDoc out;
    auto tokens = stopir::analyze(doc.text, options);
    if (stoplist != nullptr) {
        auto const before = tokens.size();
        tokens = filter_tokens(tokens, *stoplist);
        out.removed = before - tokens.size();
    }
    out.length = static_cast<std::uint32_t>(tokens.size());
    std::sort(tokens.begin(), tokens.end());
    for (auto& token : tokens) {
        if (!out.term_counts.empty() && out.term_counts.back().first == token) {
            ++out.term_counts.back().second;
        } else {
            out.term_counts.emplace_back(std::move(token), 1);
        }
    }
    return out;
}

auto resolve_threads(unsigned requested) -> unsigned {
    if (requested == 0) {
        requested = std::max(1U, std::thread::hardware_concurrency());
    }
    return requested;
}

// Little-endian binary helpers for the index file.
constexpr std::array<char, 8> kMagic = {'S', 'T', 'O', 'P', 'I', 'R', 'I', 'X'};
constexpr std::array<char, 8> kTrailer = {'X', 'I', 'R', 'I', 'P', 'O', 'T', 'S'};

template <typename T>
void put(std::ostream& out, T value) {
    static_assert(std::is_integral_v<T>);
    std::array<char, sizeof(T)> bytes{};
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        bytes[i] = static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFF);
    }
    out.write(bytes.data(), bytes.size());
}

void put_string(std::ostream& out, std::string_view s) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

class Reader {
  public:
    explicit Reader(std::istream& in) : m_in(in) {}

    template <typename T>
    auto get() -> T {
        std::array<unsigned char, sizeof(T)> bytes{};
        read(reinterpret_cast<char*>(bytes.data()), bytes.size());
        std::uint64_t value = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) {
            value |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
        }
        return static_cast<T>(value);
    }

    auto get_string() -> std::string {
        auto const len = get<std::uint32_t>();
        // Grow in chunks so a corrupt length cannot force a huge allocation.
        std::string s;
        std::size_t done = 0;
        while (done < len) {
            auto const n = std::min<std::size_t>(len - done, 1 << 16);
            s.resize(done + n);
            read(s.data() + done, n);
            done += n;
        }
        return s;
    }

    void read(char* dst, std::size_t n) {
        m_in.read(dst, static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(m_in.gcount()) != n) {
            throw ParseError("truncated index file", ParseError::Unit::byte, m_offset);
        }
        m_offset += n;
    }

    [[nodiscard]] auto offset() const noexcept -> std::size_t { return m_offset; }
    [[nodiscard]] auto at_end() -> bool { return m_in.peek() == std::char_traits<char>::eof(); }

  private:
    std::istream& m_in;
    std::size_t m_offset = 0;
};

}  // namespace

auto Index::avg_doc_length() const noexcept -> double {
    if (m_docnos.empty()) {
        return 0.0;
    }
    return static_cast<double>(m_total_tokens) / static_cast<double>(m_docnos.size());
}

auto Index::find_term(std::string_view term) const -> std::optional<TermId> {
    auto it = m_lookup.find(term);
    if (it == m_lookup.end()) {
        return std::nullopt;
    }
    return it->second;
}

auto Index::ctf(std::string_view term) const -> std::uint64_t {
    auto id = find_term(term);
    return id ? m_ctf[*id] : 0;
}

auto Index::df(std::string_view term) const -> std::size_t {
    auto id = find_term(term);
    return id ? m_postings[*id].size() : 0;
}

auto Index::term_frequencies() const -> TermFrequencyTable {
    TermFrequencyTable table;
    for (TermId id = 0; id < m_terms.size(); ++id) {
        table.emplace_hint(table.end(), m_terms[id], m_ctf[id]);
    }
    return table;
}

auto Index::analyze(std::string_view utf8_text) const -> std::vector<Token> {
    auto tokens = stopir::analyze(utf8_text, m_normalize);
    if (m_stoplist) {
        tokens = filter_tokens(tokens, *m_stoplist);
    }
    return tokens;
}

void Index::rebuild_lookup() {
    m_lookup.clear();
    m_lookup.reserve(m_terms.size());
    for (TermId id = 0; id < m_terms.size(); ++id) {
        m_lookup.emplace(m_terms[id], id);
    }
}

void Index::validate() const {
    auto fail = [](std::string const& what) { throw DataError("index invariant violated: " + what); };
    std::size_t const n = m_docnos.size();
    if (m_doc_lengths.size() != n) {
        fail("doc table size mismatch");
    }
    if (m_postings.size() != m_terms.size() || m_ctf.size() != m_terms.size()) {
        fail("term table size mismatch");
    }
    std::uint64_t length_sum = 0;
    for (auto dl : m_doc_lengths) {
        length_sum += dl;
    }
    if (length_sum != m_total_tokens) {
        fail("sum of document lengths != total_tokens");
    }
    std::uint64_t ctf_sum = 0;
    std::vector<std::uint64_t> per_doc(n, 0);
    for (TermId id = 0; id < m_terms.size(); ++id) {
        if (id > 0 && !(m_terms[id - 1] < m_terms[id])) {
            fail("terms not strictly sorted");
        }
        auto const& list = m_postings[id];
        if (list.empty() || list.size() > n) {
            fail("df out of range for term " + m_terms[id]);
        }
        std::uint64_t tf_sum = 0;
        for (std::size_t i = 0; i < list.size(); ++i) {
            if (list[i].tf == 0 || list[i].doc >= n || (i > 0 && list[i - 1].doc >= list[i].doc)) {
                fail("bad posting list for term " + m_terms[id]);
            }
            tf_sum += list[i].tf;
            per_doc[list[i].doc] += list[i].tf;
        }
        if (tf_sum != m_ctf[id] || list.size() > m_ctf[id]) {
            fail("ctf mismatch for term " + m_terms[id]);
        }
        ctf_sum += m_ctf[id];
    }
    if (ctf_sum != m_total_tokens) {
        fail("sum of ctf != total_tokens");
    }
    for (std::size_t d = 0; d < n; ++d) {
        if (per_doc[d] != m_doc_lengths[d]) {
            fail("document length mismatch for " + m_docnos[d]);
        }
    }
}

void Index::write(std::ostream& out) const {
    out.write(kMagic.data(), kMagic.size());
    put<std::uint32_t>(out, kFormatVersion);
    put<std::uint32_t>(out, m_normalize.strip_diacritics ? 1U : 0U);

    put<std::uint8_t>(out, m_stoplist ? 1 : 0);
    if (m_stoplist) {
        put_string(out, m_stoplist->name());
        put<std::uint8_t>(out, static_cast<std::uint8_t>(m_stoplist->provenance()));
        put<std::uint64_t>(out, m_stoplist->size());
        for (auto const& word : m_stoplist->words()) {
            put_string(out, word);
        }
    }
    put<std::uint64_t>(out, m_removed_tokens);

    put<std::uint64_t>(out, m_docnos.size());
    for (std::size_t d = 0; d < m_docnos.size(); ++d) {
        put_string(out, m_docnos[d]);
        put<std::uint32_t>(out, m_doc_lengths[d]);
    }

    put<std::uint64_t>(out, m_terms.size());
    for (TermId id = 0; id < m_terms.size(); ++id) {
        put_string(out, m_terms[id]);
        put<std::uint64_t>(out, m_ctf[id]);
        put<std::uint64_t>(out, m_postings[id].size());
        for (auto const& p : m_postings[id]) {
            put<std::uint32_t>(out, p.doc);
            put<std::uint32_t>(out, p.tf);
        }
    }
    put<std::uint64_t>(out, m_total_tokens);
    out.write(kTrailer.data(), kTrailer.size());
}

auto Index::read(std::istream& in) -> Index {
    Reader r(in);
    std::array<char, 8> magic{};
    r.read(magic.data(), magic.size());
    if (magic != kMagic) {
        throw ParseError("not a stopir index file", ParseError::Unit::byte, 0);
    }
    auto const version = r.get<std::uint32_t>();
    if (version != kFormatVersion) {
        throw ParseError("unsupported index format version " + std::to_string(version),
                         ParseError::Unit::byte, 8);
    }
    Index index;
    index.m_normalize.strip_diacritics = (r.get<std::uint32_t>() & 1U) != 0;

    if (r.get<std::uint8_t>() != 0) {
        auto name = r.get_string();
        auto const provenance = r.get<std::uint8_t>();
        if (provenance > static_cast<std::uint8_t>(Provenance::custom)) {
            throw ParseError("bad stoplist provenance", ParseError::Unit::byte, r.offset());
        }
        auto const count = r.get<std::uint64_t>();
        std::vector<std::string> words;
        for (std::uint64_t i = 0; i < count; ++i) {
            words.push_back(r.get_string());
        }
        index.m_stoplist.emplace(std::move(name), static_cast<Provenance>(provenance), words,
                                 index.m_normalize);
    }
    index.m_removed_tokens = r.get<std::uint64_t>();

    auto const n = r.get<std::uint64_t>();
    for (std::uint64_t d = 0; d < n; ++d) {
        index.m_docnos.push_back(r.get_string());
        index.m_doc_lengths.push_back(r.get<std::uint32_t>());
        index.m_total_tokens += index.m_doc_lengths.back();
    }

    auto const vocab = r.get<std::uint64_t>();
    auto const hint = static_cast<std::size_t>(std::min<std::uint64_t>(vocab, 1 << 20));
    index.m_terms.reserve(hint);
    index.m_postings.reserve(hint);
    index.m_ctf.reserve(hint);
    for (std::uint64_t t = 0; t < vocab; ++t) {
        index.m_terms.push_back(r.get_string());
        index.m_ctf.push_back(r.get<std::uint64_t>());
        auto const df = r.get<std::uint64_t>();
        if (df > n) {
            throw ParseError("document frequency exceeds document count", ParseError::Unit::byte,
                             r.offset());
        }
        std::vector<Posting> list;
        list.reserve(df);
        for (std::uint64_t i = 0; i < df; ++i) {
            auto const doc = r.get<std::uint32_t>();
            auto const tf = r.get<std::uint32_t>();
            list.push_back({doc, tf});
        }
        index.m_postings.push_back(std::move(list));
    }
    if (r.get<std::uint64_t>() != index.m_total_tokens) {
        throw ParseError("total token count mismatch", ParseError::Unit::byte, r.offset());
    }
    std::array<char, 8> trailer{};
    r.read(trailer.data(), trailer.size());
    if (trailer != kTrailer) {
        throw ParseError("bad index trailer", ParseError::Unit::byte, r.offset());
    }
    if (!r.at_end()) {
        throw ParseError("trailing bytes after index trailer", ParseError::Unit::byte, r.offset());
    }
    try {
        index.validate();
    } catch (DataError const& e) {
        throw ParseError(std::string("corrupt index file: ") + e.what());
    }
    index.rebuild_lookup();
    return index;
}

void Index::save(std::filesystem::path const& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    write(out);
    out.flush();
    if (!out) {
        throw DataError("error writing " + path.string());
    }
}

auto Index::load(std::filesystem::path const& path) -> Index {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open index " + path.string());
    }
    return read(in);
}

auto build_index(std::span<SourceDocument const> docs,
                 std::optional<Stoplist> const& stoplist,
                 BuildOptions options) -> Index {
    {
        std::unordered_set<std::string_view> seen;
        seen.reserve(docs.size());
        for (auto const& doc : docs) {
            if (!seen.insert(doc.docno).second) {
                throw DataError("duplicate docno: " + doc.docno);
            }
        }
    }

    Stoplist const* list = stoplist ? &*stoplist : nullptr;
    std::vector<AnalyzedDoc> analyzed(docs.size());
    unsigned const threads =
        std::min<unsigned>(resolve_threads(options.threads),
                           static_cast<unsigned>(std::max<std::size_t>(1, docs.size())));
    if (threads <= 1) {
        for (std::size_t i = 0; i < docs.size(); ++i) {
            analyzed[i] = analyze_doc(docs[i], list, options.normalize);
        }
    } else {
        // Static contiguous partition; each slot is written by exactly one worker.
        std::vector<std::jthread> workers;
        std::size_t const chunk = (docs.size() + threads - 1) / threads;
        std::vector<std::exception_ptr> errors(threads);
        for (unsigned w = 0; w < threads; ++w) {
            workers.emplace_back([&, w] {
                try {
                    std::size_t const begin = w * chunk;
                    std::size_t const end = std::min(docs.size(), begin + chunk);
                    for (std::size_t i = begin; i < end; ++i) {
                        analyzed[i] = analyze_doc(docs[i], list, options.normalize);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        workers.clear();
        for (auto const& e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }

    // Deterministic merge in document order.
    std::unordered_map<std::string, std::uint32_t> provisional;
    std::vector<std::string> terms;
    std::vector<std::vector<Posting>> postings;
    Index index;
    index.m_normalize = options.normalize;
    index.m_stoplist = stoplist;
    index.m_docnos.reserve(docs.size());
    index.m_doc_lengths.reserve(docs.size());
    for (std::size_t d = 0; d < docs.size(); ++d) {
        auto& doc = analyzed[d];
        index.m_docnos.push_back(docs[d].docno);
        index.m_doc_lengths.push_back(doc.length);
        index.m_total_tokens += doc.length;
        index.m_removed_tokens += doc.removed;
        for (auto& [term, tf] : doc.term_counts) {
            auto [it, inserted] =
                provisional.try_emplace(term, static_cast<std::uint32_t>(terms.size()));
            if (inserted) {
                terms.push_back(std::move(term));
                postings.emplace_back();
            }
            postings[it->second].push_back({static_cast<DocId>(d), tf});
        }
        doc = AnalyzedDoc{};
    }

    std::vector<std::uint32_t> order(terms.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t a, std::uint32_t b) { return terms[a] < terms[b]; });
    index.m_terms.reserve(terms.size());
    index.m_postings.reserve(terms.size());
    index.m_ctf.reserve(terms.size());
    for (auto id : order) {
        std::uint64_t ctf = 0;
        for (auto const& p : postings[id]) {
            ctf += p.tf;
        }
        index.m_terms.push_back(std::move(terms[id]));
        index.m_postings.push_back(std::move(postings[id]));
        index.m_ctf.push_back(ctf);
    }
    index.rebuild_lookup();
    return index;
}

}  // namespace stopir
