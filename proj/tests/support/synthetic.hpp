#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "stopir/index.hpp"

namespace stopir::fixtures {

using Rng = std::mt19937_64;

struct CorpusShape {
    std::size_t docs = 50;
    std::size_t vocabulary = 20;
    std::size_t max_length = 30;  // lengths are uniform in [0, max_length]
    double zipf = 1.0;
};

// Words are "w0", "w1", ... drawn from a Zipf-like distribution; docnos are
// zero-padded so lexical order equals ordinal order.
[[nodiscard]] auto random_corpus(Rng& rng, CorpusShape const& shape) -> std::vector<SourceDocument>;

// 1..max_terms draws from the corpus vocabulary plus, sometimes, a word the
// corpus never uses.
[[nodiscard]] auto random_query(Rng& rng, std::size_t vocabulary, std::size_t max_terms)
    -> std::map<std::string, std::uint32_t>;

[[nodiscard]] auto to_trec_sgml(std::vector<SourceDocument> const& docs) -> std::string;

// Arabic letters, alef variants, final forms, diacritics, tatweel, Latin,
// digits, punctuation, whitespace and arbitrary BMP code points.
[[nodiscard]] auto random_unicode(Rng& rng, std::size_t max_length) -> std::u32string;

struct SyntheticTopic {
    std::string qid;
    std::string title;
    std::string description;
};

// Newswire-shaped test collection: a Zipfian background vocabulary whose
// most frequent words are real Arabic stopwords, plus one small word cluster
// per topic. Documents "about" a topic draw part of their text from its
// cluster and are judged relevant to it.
struct SyntheticCollection {
    std::vector<SourceDocument> docs;
    std::vector<SyntheticTopic> topics;
    std::map<std::string, std::vector<std::string>> relevant;  // qid -> docnos
};

struct CollectionShape {
    std::size_t docs = 5000;
    std::size_t topics = 20;
    std::size_t vocabulary = 3000;
    std::size_t min_length = 40;
    std::size_t max_length = 250;
    double on_topic_rate = 0.01;
};

[[nodiscard]] auto synthetic_collection(Rng& rng, CollectionShape const& shape) -> SyntheticCollection;

[[nodiscard]] auto to_topics_file(std::vector<SyntheticTopic> const& topics) -> std::string;
[[nodiscard]] auto to_qrels_file(SyntheticCollection const& collection) -> std::string;

}  // namespace stopir::fixtures
