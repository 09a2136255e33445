#include <algorithm>
#include <sstream>

#include <gtest/gtest.h>

#include "stopir/error.hpp"
#include "stopir/stoplists.hpp"
#include "synthetic.hpp"

using namespace stopir;

namespace {

auto list_of(std::vector<std::string> const& words, std::string name = "L") -> Stoplist {
    return Stoplist(std::move(name), Provenance::custom, words);
}

auto load(std::string const& text) -> Stoplist {
    std::istringstream in(text);
    return load_stoplist(in, "test", Provenance::custom);
}

}  // namespace

TEST(LoadStoplist, EmptyFile) {
    EXPECT_EQ(load("").size(), 0u);
}

TEST(LoadStoplist, DuplicatesCollapse) {
    EXPECT_EQ(load("في\nفي\n").size(), 1u);
}

TEST(LoadStoplist, SkipsBlankAndCommentLinesAndBom) {
    auto const list = load("\xEF\xBB\xBF# header\n\nمن\n   \n# another\nإلى\r\n");
    EXPECT_EQ(list.size(), 2u);
    EXPECT_TRUE(list.contains("من"));
    // Entries are normalized: hamza-alef folded, final maqsura to yeh.
    EXPECT_TRUE(list.contains("الي"));
    EXPECT_FALSE(list.contains("إلى"));
}

TEST(LoadStoplist, InvalidUtf8NamesLine) {
    try {
        (void)load("من\nفي\n\xC3\x28\n");
        FAIL() << "expected ParseError";
    } catch (ParseError const& e) {
        EXPECT_EQ(e.unit(), ParseError::Unit::line);
        EXPECT_EQ(e.location(), 3u);
    }
}

TEST(LoadStoplist, WriteRoundTrip) {
    auto const list = list_of({"في", "من", "على"}, "GS");
    std::ostringstream out;
    write_stoplist(out, list);
    auto const again = load(out.str());
    EXPECT_EQ(again.words(), list.words());
}

TEST(BuildCorpusStoplist, ThresholdIsStrict) {
    TermFrequencyTable const freqs{{"a", 10}, {"b", 3}, {"c", 5}};
    auto const list = build_corpus_stoplist(freqs, 5);
    EXPECT_EQ(list.words(), (Stoplist::WordSet{"a"}));
    EXPECT_EQ(list.provenance(), Provenance::corpus_based);
    EXPECT_EQ(list.name(), "CBS");
}

TEST(BuildCorpusStoplist, ExclusionsRemoved) {
    TermFrequencyTable const freqs{{"a", 10}, {"b", 30}, {"c", 50}};
    auto const list = build_corpus_stoplist(freqs, 5, {"b"});
    EXPECT_EQ(list.words(), (Stoplist::WordSet{"a", "c"}));
}

TEST(BuildCorpusStoplist, MonotoneInCutoff) {
    fixtures::Rng rng(3);
    TermFrequencyTable freqs;
    for (int i = 0; i < 200; ++i) {
        freqs["t" + std::to_string(i)] = rng() % 1000;
    }
    std::size_t previous = freqs.size() + 1;
    for (std::uint64_t cutoff = 0; cutoff <= 1000; cutoff += 25) {
        auto const list = build_corpus_stoplist(freqs, cutoff);
        EXPECT_LE(list.size(), previous);
        previous = list.size();
        if (cutoff > 0) {
            auto const lower = build_corpus_stoplist(freqs, cutoff - 25);
            EXPECT_TRUE(std::includes(lower.words().begin(), lower.words().end(),
                                      list.words().begin(), list.words().end()));
        }
    }
}

TEST(Combine, Examples) {
    EXPECT_EQ(combine(list_of({"x"}), list_of({})).words(), (Stoplist::WordSet{"x"}));
    auto const c = combine(list_of({"a", "b"}), list_of({"b", "c"}));
    EXPECT_EQ(c.words(), (Stoplist::WordSet{"a", "b", "c"}));
    EXPECT_EQ(c.provenance(), Provenance::combined);
    EXPECT_EQ(c.name(), "CS");
}

TEST(Combine, InclusionExclusionCommutativeIdempotent) {
    fixtures::Rng rng(9);
    for (int round = 0; round < 200; ++round) {
        std::vector<std::string> a;
        std::vector<std::string> b;
        for (int i = 0; i < 30; ++i) {
            if (rng() % 2) a.push_back("w" + std::to_string(rng() % 40));
            if (rng() % 2) b.push_back("w" + std::to_string(rng() % 40));
        }
        auto const la = list_of(a);
        auto const lb = list_of(b);
        auto const ab = combine(la, lb);
        ASSERT_EQ(ab.size(), la.size() + lb.size() - overlap(la, lb));
        ASSERT_EQ(ab.words(), combine(lb, la).words());
        ASSERT_EQ(combine(ab, ab).words(), ab.words());
        ASSERT_EQ(combine(la, la).words(), la.words());
    }
}

TEST(FilterTokens, Examples) {
    auto const gs = list_of({"في"});
    EXPECT_EQ(filter_tokens(std::vector<Token>{"في", "القاهرة"}, gs), (std::vector<Token>{"القاهرة"}));
    EXPECT_TRUE(filter_tokens(std::vector<Token>{"في", "في"}, gs).empty());
    std::vector<Token> const any{"a", "b", "a"};
    EXPECT_EQ(filter_tokens(any, list_of({})), any);
}

TEST(FilterTokens, IdempotentOrderPreservingShrinking) {
    fixtures::Rng rng(4);
    auto const list = list_of({"w1", "w3", "w5"});
    for (int round = 0; round < 500; ++round) {
        std::vector<Token> tokens;
        auto const n = rng() % 20;
        for (std::size_t i = 0; i < n; ++i) {
            tokens.push_back("w" + std::to_string(rng() % 8));
        }
        auto const once = filter_tokens(tokens, list);
        ASSERT_EQ(filter_tokens(once, list), once);
        ASSERT_LE(once.size(), tokens.size());
        bool const has_stopword =
            std::any_of(tokens.begin(), tokens.end(), [&](auto const& t) { return list.contains(t); });
        ASSERT_EQ(once.size() == tokens.size(), !has_stopword);
        // Subsequence check.
        std::size_t j = 0;
        for (auto const& t : tokens) {
            if (j < once.size() && once[j] == t) {
                ++j;
            }
        }
        ASSERT_EQ(j, once.size());
    }
}

TEST(Bundled, CodesAndProvenance) {
    EXPECT_EQ(parse_stoplist_code("GS"), StoplistCode::GS);
    EXPECT_EQ(parse_stoplist_code("CBS"), StoplistCode::CBS);
    EXPECT_EQ(parse_stoplist_code("CS"), StoplistCode::CS);
    EXPECT_FALSE(parse_stoplist_code("gs").has_value());
    EXPECT_EQ(bundled_stoplist(StoplistCode::GS).provenance(), Provenance::general);
    EXPECT_EQ(bundled_stoplist(StoplistCode::CBS).provenance(), Provenance::corpus_based);
    EXPECT_EQ(bundled_stoplist(StoplistCode::CS).provenance(), Provenance::combined);
    EXPECT_EQ(bundled_stoplist(StoplistCode::CS).name(), "CS");
}

TEST(Bundled, CuratedCounts) {
    auto const gs = bundled_stoplist(StoplistCode::GS);
    auto const cbs = bundled_stoplist(StoplistCode::CBS);
    auto const cs = bundled_stoplist(StoplistCode::CS);
    // Curation targets are 1377 / 235 / 83 / 1529; OCR loss leaves these.
    EXPECT_EQ(gs.size(), 942u);
    EXPECT_EQ(cbs.size(), 230u);
    EXPECT_EQ(overlap(gs, cbs), 82u);
    EXPECT_EQ(cs.size(), 1090u);
    EXPECT_EQ(cs.size(), gs.size() + cbs.size() - overlap(gs, cbs));
}

TEST(Bundled, WordsAreNormalizedTokens) {
    for (auto code : {StoplistCode::GS, StoplistCode::CBS, StoplistCode::CS}) {
        auto const list = bundled_stoplist(code);
        for (auto const& w : list.words()) {
            ASSERT_FALSE(w.empty());
            ASSERT_EQ(analyze(w), std::vector<Token>{w}) << w;
        }
    }
}

TEST(Bundled, CommonFunctionWordsPresent) {
    auto const gs = bundled_stoplist(StoplistCode::GS);
    for (auto const* w : {"في", "من", "علي", "الي", "عن", "هذا", "التي"}) {
        EXPECT_TRUE(gs.contains(w)) << w;
    }
}
