#include <gtest/gtest.h>

#include "stopir/error.hpp"
#include "stopir/textpipe.hpp"
#include "stopir/utf8.hpp"
#include "synthetic.hpp"

using namespace stopir;

namespace {


}  // namespace

TEST(Normalize, HamzaAlefBecomesBareAlef) {
    EXPECT_EQ(normalize_utf8("أخبار"), "اخبار");
    EXPECT_EQ(normalize_utf8("إسلام"), "اسلام");
    EXPECT_EQ(normalize_utf8("آخر"), "اخر");
}

TEST(Normalize, EmptyAndUnaffectedText) {
    EXPECT_EQ(normalize_utf8(""), "");
    EXPECT_EQ(normalize_utf8("abc 123"), "abc 123");
}

TEST(Normalize, WordFinalAlefMaqsuraAndTehMarbuta) {
    EXPECT_EQ(normalize_utf8("على"), "علي");
    EXPECT_EQ(normalize_utf8("مدرسة"), "مدرسه");
    // Not word-final: untouched.
    EXPECT_EQ(normalize_utf8("ىب"), "ىب");
    EXPECT_EQ(normalize_utf8("ةب"), "ةب");
    // Final even when a mark or a separator follows.
    EXPECT_EQ(normalize_utf8("مدرسةً"), "مدرسه");
    EXPECT_EQ(normalize_utf8("على، مدرسة."), "علي، مدرسه.");
}

TEST(Normalize, StripsDiacriticsAndTatweel) {
    EXPECT_EQ(normalize_utf8("كَتَبَ"), "كتب");
    EXPECT_EQ(normalize_utf8("عـــربي"), "عربي");
    std::u32string all;
    for (char32_t c = 0x064B; c <= 0x0652; ++c) {
        all.push_back(c);
    }
    all.push_back(0x0640);
    EXPECT_EQ(normalize(all), U"");
}

TEST(Normalize, DiacriticStrippingCanBeDisabled) {
    NormalizeOptions const keep{.strip_diacritics = false};
    EXPECT_EQ(normalize_utf8("كَتَبَ", keep), "كَتَبَ");
    // Folding still applies, and finality looks through marks.
    EXPECT_EQ(normalize_utf8("أَعلىَ", keep), "اَعليَ");
}

TEST(Normalize, RejectsInvalidUtf8WithOffset) {
    try {
        (void)normalize_utf8("ab\xff");
        FAIL() << "expected ParseError";
    } catch (ParseError const& e) {
        EXPECT_EQ(e.unit(), ParseError::Unit::byte);
        EXPECT_EQ(e.location(), 2u);
    }
}

TEST(Tokenize, WorkedExamples) {
    EXPECT_EQ(tokenize_utf8("قال الوزير"), (std::vector<Token>{"قال", "الوزير"}));
    EXPECT_EQ(tokenize_utf8("TREC-2001"), (std::vector<Token>{"TREC", "2001"}));
    EXPECT_TRUE(tokenize_utf8("   ").empty());
    EXPECT_TRUE(tokenize_utf8("").empty());
}

TEST(Tokenize, ScriptBoundariesSplit) {
    EXPECT_EQ(tokenize_utf8("abcقال12"), (std::vector<Token>{"abc", "قال", "12"}));
    EXPECT_EQ(tokenize_utf8("a1b2"), (std::vector<Token>{"a1b2"}));
}

TEST(Tokenize, ArabicPunctuationSeparates) {
    EXPECT_EQ(tokenize_utf8("قال،الوزير؟نعم"), (std::vector<Token>{"قال", "الوزير", "نعم"}));
}

TEST(Tokenize, MarksStayInsideWordsButAreNotWordsAlone) {
    NormalizeOptions const keep{.strip_diacritics = false};
    EXPECT_EQ(analyze("كَتَبَ", keep), (std::vector<Token>{"كَتَبَ"}));
    EXPECT_TRUE(tokenize(U"َِ ٰ").empty());
}

TEST(Tokenize, OutputHasNoEmptyOrSeparatorTokens) {
    fixtures::Rng rng(11);
    for (int i = 0; i < 2000; ++i) {
        auto const text = fixtures::random_unicode(rng, 40);
        for (auto const& tok : tokenize(normalize(text))) {
            ASSERT_FALSE(tok.empty());
            auto const cps = utf8::decode(tok);
            for (char32_t c : cps) {
                bool const word_char = chars::is_arabic_letter(c) || chars::is_arabic_mark(c)
                                    || chars::is_latin_alnum(c);
                ASSERT_TRUE(word_char) << "U+" << std::hex << static_cast<unsigned>(c);
                ASSERT_FALSE(chars::is_strippable_mark(c));
            }
        }
    }
}

TEST(Normalize, IdempotentAndNeverLonger) {
    fixtures::Rng rng(5);
    for (auto opts : {NormalizeOptions{true}, NormalizeOptions{false}}) {
        for (int i = 0; i < 3000; ++i) {
            auto const text = fixtures::random_unicode(rng, 60);
            auto const once = normalize(text, opts);
            ASSERT_EQ(normalize(once, opts), once);
            ASSERT_LE(once.size(), text.size());
        }
    }
}

TEST(Tokenize, TokenCountStableUnderReserialization) {
    fixtures::Rng rng(8);
    for (int i = 0; i < 2000; ++i) {
        auto const tokens = analyze(utf8::encode(fixtures::random_unicode(rng, 60)));
        std::string joined;
        for (auto const& t : tokens) {
            joined += t;
            joined += ' ';
        }
        ASSERT_EQ(analyze(joined), tokens);
    }
}

TEST(Utf8, Cp1256Decoding) {
    // 0xC7 alef, 0xE1 lam, 0xE3 meem in windows-1256.
    EXPECT_EQ(utf8::from_cp1256("\xC7\xE1\xE3 ok"), "الم ok");
}
