#include <sstream>

#include <gtest/gtest.h>

#include "stopir/cli/commands.hpp"
#include "stopir/cli/formats.hpp"
#include "stopir/error.hpp"
#include "synthetic.hpp"
#include "temp_dir.hpp"

using namespace stopir;
using stopir::fixtures::read_file;
using stopir::fixtures::TempDir;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

auto invoke(std::vector<std::string> args) -> Outcome {
    args.insert(args.begin(), "stopir");
    std::vector<char const*> argv;
    for (auto const& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    int const code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

constexpr char const* kToyCorpus =
    "<DOC>\n<DOCNO>D1</DOCNO>\n<TEXT>\na b\n</TEXT>\n</DOC>\n"
    "<DOC>\n<DOCNO>D2</DOCNO>\n<TEXT>\nb c\n</TEXT>\n</DOC>\n"
    "<DOC>\n<DOCNO>D3</DOCNO>\n<TEXT>\nc c\n</TEXT>\n</DOC>\n";

constexpr char const* kToyTopic = "<top>\n<num> Number: 1\n<title> a\n<desc> Description:\n</top>\n";

auto report_with_aps(std::string const& tag, std::vector<double> const& aps) -> std::string {
    EvalReport report;
    report.tag = tag;
    for (std::size_t i = 0; i < aps.size(); ++i) {
        QueryEval e;
        e.qid = std::to_string(i + 1);
        e.num_relevant = 1;
        e.average_precision = aps[i];
        report.per_query.push_back(e);
    }
    std::ostringstream tsv;
    write_report_tsv(tsv, report);
    std::istringstream in(tsv.str());
    std::ostringstream again;
    write_report_tsv(again, read_report_tsv(in));
    return again.str();
}

}  // namespace

TEST(Topics, ParseTitleAndDescription) {
    auto const topics = cli::parse_topics(
        "<top>\n<num> Number: 7\n<title> قال الوزير\n<desc> Description:\nأخبار القاهرة\n<narr> ignored\n</top>\n"
        "<top><num>8</num><title>x</title><desc>y</desc></top>");
    ASSERT_EQ(topics.size(), 2u);
    EXPECT_EQ(topics[0].qid, "7");
    EXPECT_EQ(topics[0].title, "قال الوزير");
    EXPECT_EQ(topics[0].description, "أخبار القاهرة");
    EXPECT_EQ(topics[0].query_text(), "قال الوزير أخبار القاهرة");
    EXPECT_EQ(topics[1].qid, "8");
    EXPECT_EQ(topics[1].query_text(), "x y");
}

TEST(Topics, Errors) {
    EXPECT_THROW((void)cli::parse_topics("<top><title>x</title></top>"), ParseError);
    EXPECT_THROW((void)cli::parse_topics("<top><num>1</num></top><top><num>1</num></top>"), ParseError);
    EXPECT_TRUE(cli::parse_topics("").empty());
}

TEST(RunFormat, RoundTripAndErrors) {
    RankedRun const run{"3", "BM25_GS", {{"D9", 2.5, 1}, {"D1", -0.125, 2}}};
    std::ostringstream out;
    cli::write_run(out, run);
    EXPECT_EQ(out.str(), "3 Q0 D9 1 2.500000 BM25_GS\n3 Q0 D1 2 -0.125000 BM25_GS\n");
    std::istringstream in(out.str());
    auto const back = cli::read_runs(in);
    ASSERT_EQ(back.size(), 1u);
    EXPECT_EQ(back[0], run);

    auto bad_line = [](std::string const& text, std::size_t line) {
        std::istringstream s(text);
        try {
            (void)cli::read_runs(s);
            ADD_FAILURE() << text;
        } catch (ParseError const& e) {
            EXPECT_EQ(e.location(), line);
            EXPECT_EQ(e.unit(), ParseError::Unit::line);
        }
    };
    bad_line("1 Q0 D1 1 1.0 t\n1 Q0 D2 2 t\n", 2);
    bad_line("1 Q0 D1 x 1.0 t\n", 1);
    bad_line("1 Q0 D1 1 abc t\n", 1);
    bad_line("1 Q0 D1 1 1.0 t\n\n1 Q0 D1 2 0.5 t\n", 3);
}

TEST(Cli, IndexSummaryToy) {
    TempDir dir;
    auto const corpus = dir.write("toy.sgml", kToyCorpus);
    auto const r = invoke({"index", corpus.string(), "-o", dir.file("toy.idx").string()});
    EXPECT_EQ(r.code, cli::kExitOk) << r.err;
    EXPECT_NE(r.out.find("documents          3"), std::string::npos);
    EXPECT_NE(r.out.find("tokens             6"), std::string::npos);
    EXPECT_NE(r.out.find("stopwords removed  0"), std::string::npos);
}

TEST(Cli, IndexWithCustomStoplist) {
    TempDir dir;
    auto const corpus = dir.write("toy.sgml", kToyCorpus);
    auto const list = dir.write("bonly.txt", "# custom\nb\n");
    auto const r = invoke({"index", corpus.string(), "--stoplist", list.string(), "-o",
                           dir.file("toy.idx").string()});
    EXPECT_EQ(r.code, cli::kExitOk) << r.err;
    EXPECT_NE(r.out.find("tokens             4"), std::string::npos);
    EXPECT_NE(r.out.find("stopwords removed  2"), std::string::npos);
    EXPECT_NE(r.out.find("stoplist           bonly"), std::string::npos);
}

TEST(Cli, MissingCorpusIsAnError) {
    TempDir dir;
    auto const r = invoke({"index", dir.file("absent.sgml").string(), "-o", dir.file("x.idx").string()});
    EXPECT_NE(r.code, 0);
    EXPECT_FALSE(r.err.empty());
}

TEST(Cli, MalformedCorpusIsDataError) {
    TempDir dir;
    auto const corpus = dir.write("bad.sgml", "<DOC><TEXT>x</TEXT></DOC>");
    auto const r = invoke({"index", corpus.string(), "-o", dir.file("x.idx").string()});
    EXPECT_EQ(r.code, cli::kExitData);
    EXPECT_NE(r.err.find("bad.sgml"), std::string::npos);
    EXPECT_NE(r.err.find("byte"), std::string::npos);
}

TEST(Cli, SearchToyBm25) {
    TempDir dir;
    auto const corpus = dir.write("toy.sgml", kToyCorpus);
    auto const topics = dir.write("topics.txt", kToyTopic);
    ASSERT_EQ(invoke({"index", corpus.string(), "-o", dir.file("toy.idx").string()}).code, 0);
    auto const r = invoke({"search", "--index", dir.file("toy.idx").string(), "--topics", topics.string(),
                           "--model", "BM25"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "1 Q0 D1 1 0.510826 BM25\n");
}

TEST(Cli, SearchTagWithCombinedList) {
    TempDir dir;
    auto const corpus = dir.write("toy.sgml", kToyCorpus);
    auto const topics = dir.write("topics.txt", kToyTopic);
    ASSERT_EQ(invoke({"index", corpus.string(), "--stoplist", "CS", "-o", dir.file("cs.idx").string()}).code, 0);
    auto const r = invoke({"search", "--index", dir.file("cs.idx").string(), "--topics", topics.string(),
                           "--model", "KL", "-o", dir.file("run.txt").string()});
    EXPECT_EQ(r.code, 0) << r.err;
    auto const run = read_file(dir.file("run.txt"));
    EXPECT_NE(run.find(" KL_CS\n"), std::string::npos);
    EXPECT_EQ(run.substr(0, 10), "1 Q0 D1 1 ");
}

TEST(Cli, StopwordOnlyTopicWarns) {
    TempDir dir;
    auto const corpus = dir.write("c.sgml", "<DOC><DOCNO>D1</DOCNO><TEXT>في القاهرة</TEXT></DOC>");
    auto const topics = dir.write("t.txt",
                                  "<top><num>1</num><title>في من</title></top>"
                                  "<top><num>2</num><title>القاهرة</title></top>");
    ASSERT_EQ(invoke({"index", corpus.string(), "--stoplist", "GS", "-o", dir.file("i.idx").string()}).code, 0);
    auto const r = invoke({"search", "--index", dir.file("i.idx").string(), "--topics", topics.string()});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "2 Q0 D1 1 " + r.out.substr(10));
    EXPECT_EQ(r.out.find("\n1 Q0"), std::string::npos);
    EXPECT_NE(r.err.find("warning"), std::string::npos);
}

TEST(Cli, UnknownModelIsUsageError) {
    TempDir dir;
    auto const corpus = dir.write("toy.sgml", kToyCorpus);
    auto const topics = dir.write("topics.txt", kToyTopic);
    ASSERT_EQ(invoke({"index", corpus.string(), "-o", dir.file("toy.idx").string()}).code, 0);
    auto const r = invoke({"search", "--index", dir.file("toy.idx").string(), "--topics", topics.string(),
                           "--model", "LM"});
    EXPECT_EQ(r.code, cli::kExitUsage);
    EXPECT_NE(r.err.find("LM"), std::string::npos);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(invoke({}).code, cli::kExitUsage);
    EXPECT_EQ(invoke({"frobnicate"}).code, cli::kExitUsage);
    EXPECT_EQ(invoke({"search"}).code, cli::kExitUsage);
    EXPECT_EQ(invoke({"--help"}).code, cli::kExitOk);
}

TEST(Cli, ConfigFileWithFlagOverride) {
    TempDir dir;
    auto const corpus = dir.write("toy.sgml", kToyCorpus);
    auto const topics = dir.write("topics.txt", kToyTopic);
    ASSERT_EQ(invoke({"index", corpus.string(), "-o", dir.file("toy.idx").string()}).code, 0);
    auto const config = dir.write("exp.ini", "[search]\nindex=" + dir.file("toy.idx").string() + "\ntopics=" +
                                                 topics.string() + "\nmodel=KL\n");
    auto const from_config = invoke({"--config", config.string(), "search"});
    EXPECT_EQ(from_config.code, 0) << from_config.err;
    EXPECT_NE(from_config.out.find(" KL\n"), std::string::npos);
    auto const overridden = invoke({"--config", config.string(), "search", "--model", "BM25"});
    EXPECT_EQ(overridden.out, "1 Q0 D1 1 0.510826 BM25\n");
}

TEST(Cli, EvalFixture) {
    std::string const dir = std::string(STOPIR_TEST_DATA_DIR) + "/eval/";
    TempDir tmp;
    auto const r = invoke({"eval", "--run", dir + "run.txt", "--qrels", dir + "qrels.txt", "--tsv",
                           tmp.file("r.tsv").string()});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("0.4918"), std::string::npos);
    EXPECT_NE(r.err.find("warning"), std::string::npos);
    auto const tsv = read_file(tmp.file("r.tsv"));
    EXPECT_NE(tsv.find("\tall\t"), std::string::npos);
}

TEST(Cli, EvalEmptyRunAndMalformedRun) {
    TempDir dir;
    auto const empty = dir.write("empty.run", "");
    auto const qrels = dir.write("q.txt", "1 0 D1 1\n");
    auto const r = invoke({"eval", "--run", empty.string(), "--qrels", qrels.string()});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("Queries evaluated:"), std::string::npos);

    auto const bad = dir.write("bad.run", "1 Q0 D1 1 0.5 t\n1 Q0 D2 two 0.4 t\n");
    auto const b = invoke({"eval", "--run", bad.string(), "--qrels", qrels.string()});
    EXPECT_EQ(b.code, cli::kExitData);
    EXPECT_NE(b.err.find("line 2"), std::string::npos);
}

TEST(Cli, CompareConsistentOrdering) {
    TempDir dir;
    auto const a = dir.write("a.tsv", report_with_aps("TFIDF", {.1, .1, .1}));
    auto const b = dir.write("b.tsv", report_with_aps("BM25", {.2, .2, .2}));
    auto const c = dir.write("c.tsv", report_with_aps("KL", {.3, .3, .3}));
    auto const r = invoke({"compare", a.string(), b.string(), c.string(), "--tsv", dir.file("cmp.tsv").string()});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("6.000"), std::string::npos);
    EXPECT_NE(r.out.find("TFIDF"), std::string::npos);

    std::vector<cli::Technique> techniques;
    for (auto const& [label, path] : {std::pair{"TFIDF", a}, {"BM25", b}, {"KL", c}}) {
        std::istringstream in(read_file(path));
        techniques.push_back({label, read_report_tsv(in)});
    }
    auto const cmp = cli::compare_techniques(techniques);
    EXPECT_DOUBLE_EQ(cmp.friedman.chi2, 6.0);
    EXPECT_EQ(cmp.baseline, "TFIDF");
    ASSERT_EQ(cmp.versus_baseline.size(), 2u);
    EXPECT_EQ(cmp.versus_baseline[0].wilcoxon.counts, (SignCounts{3, 0, 0}));
    EXPECT_EQ(cmp.techniques.front().label, "TFIDF");
}

TEST(Cli, CompareIdenticalReports) {
    TempDir dir;
    auto const a = dir.write("a.tsv", report_with_aps("TFIDF", {.1, .5, .3, .2}));
    auto const b = dir.write("b.tsv", report_with_aps("BM25", {.1, .5, .3, .2}));
    std::vector<cli::Technique> techniques;
    for (auto const& [label, path] : {std::pair{"TFIDF", a}, {"BM25", b}}) {
        std::istringstream in(read_file(path));
        techniques.push_back({label, read_report_tsv(in)});
    }
    auto const cmp = cli::compare_techniques(techniques);
    EXPECT_EQ(cmp.versus_baseline[0].wilcoxon.p_value, 1.0);
    EXPECT_EQ(cmp.versus_baseline[0].wilcoxon.counts, (SignCounts{0, 0, 4}));
    auto const r = invoke({"compare", "X=" + a.string(), "Y=" + b.string(), "--baseline", "X"});
    EXPECT_EQ(r.code, 0) << r.err;
}

TEST(Cli, CompareMismatchedQueriesListsDifference) {
    TempDir dir;
    auto const a = dir.write("a.tsv", report_with_aps("TFIDF", {.1, .5, .3}));
    auto const b = dir.write("b.tsv", report_with_aps("BM25", {.1, .5}));
    auto const r = invoke({"compare", a.string(), b.string()});
    EXPECT_EQ(r.code, cli::kExitData);
    EXPECT_NE(r.err.find("[3]"), std::string::npos);
    auto const missing = invoke({"compare", a.string(), a.string()});
    EXPECT_EQ(missing.code, cli::kExitData);
}

TEST(Cli, StoplistInspectAndCombine) {
    auto const gs = bundled_stoplist(StoplistCode::GS);
    auto const cbs = bundled_stoplist(StoplistCode::CBS);
    auto const inspect = invoke({"stoplist", "inspect", "GS", "--against", "CBS"});
    EXPECT_EQ(inspect.code, 0);
    EXPECT_NE(inspect.out.find("overlap    " + std::to_string(overlap(gs, cbs))), std::string::npos);

    TempDir dir;
    auto const r = invoke({"stoplist", "combine", "GS", "CBS", "-o", dir.file("cs.txt").string()});
    EXPECT_EQ(r.code, 0) << r.err;
    auto const cs = load_stoplist_file(dir.file("cs.txt"), "CS", Provenance::combined);
    EXPECT_EQ(cs.size(), gs.size() + cbs.size() - overlap(gs, cbs));
}

TEST(Cli, StoplistBuild) {
    TempDir dir;
    auto const corpus = dir.write("c.sgml",
                                  "<DOC><DOCNO>1</DOCNO><TEXT>x x x y y z</TEXT></DOC>"
                                  "<DOC><DOCNO>2</DOCNO><TEXT>x y q</TEXT></DOC>");
    ASSERT_EQ(invoke({"index", corpus.string(), "-o", dir.file("i.idx").string()}).code, 0);
    auto const exclude = dir.write("ex.txt", "y\n");
    auto const r = invoke({"stoplist", "build", "--index", dir.file("i.idx").string(), "--cutoff", "2",
                           "--exclude", exclude.string(), "-o", dir.file("cbs.txt").string()});
    EXPECT_EQ(r.code, 0) << r.err;
    auto const list = load_stoplist_file(dir.file("cbs.txt"), "CBS", Provenance::corpus_based);
    EXPECT_EQ(list.words(), (Stoplist::WordSet{"x"}));

    auto const no_cutoff = invoke({"stoplist", "build", "--index", dir.file("i.idx").string()});
    EXPECT_EQ(no_cutoff.code, cli::kExitUsage);

    auto const high = invoke({"stoplist", "build", "--index", dir.file("i.idx").string(), "--cutoff", "99"});
    EXPECT_EQ(high.code, 0);
    EXPECT_NE(high.err.find("warning"), std::string::npos);
    std::istringstream in(high.out);
    EXPECT_TRUE(load_stoplist(in, "CBS", Provenance::corpus_based).empty());
}

TEST(Cli, EndToEndDeterministicAcrossThreads) {
    fixtures::Rng rng(99);
    auto const collection = fixtures::synthetic_collection(rng, {.docs = 400, .topics = 5, .vocabulary = 500});
    TempDir dir;
    auto const corpus = dir.write("c.sgml", fixtures::to_trec_sgml(collection.docs));
    auto const topics = dir.write("t.txt", fixtures::to_topics_file(collection.topics));
    auto const qrels = dir.write("q.txt", fixtures::to_qrels_file(collection));
    auto pipeline = [&](std::string const& threads, std::string const& tag) {
        auto const idx = dir.file(tag + ".idx").string();
        auto const run = dir.file(tag + ".run").string();
        EXPECT_EQ(invoke({"index", corpus.string(), "--stoplist", "GS", "--threads", threads, "-o", idx}).code, 0);
        EXPECT_EQ(invoke({"search", "--index", idx, "--topics", topics.string(), "--threads", threads,
                          "-o", run}).code, 0);
        auto const e = invoke({"eval", "--run", run, "--qrels", qrels.string()});
        EXPECT_EQ(e.code, 0);
        return read_file(idx) + read_file(run) + e.out;
    };
    EXPECT_EQ(pipeline("1", "one"), pipeline("0", "all"));

    // Parsed run equals the in-memory run up to the printed precision.
    cli::SearchCommand cmd;
    cmd.index = dir.file("one.idx");
    cmd.topics = topics;
    std::ostringstream sink;
    auto const runs = cli::cmd_search(cmd, sink);
    std::istringstream in(read_file(dir.file("one.run")));
    auto const parsed = cli::read_runs(in);
    ASSERT_EQ(parsed.size(), runs.size());
    for (std::size_t q = 0; q < runs.size(); ++q) {
        ASSERT_EQ(parsed[q].qid, runs[q].qid);
        ASSERT_EQ(parsed[q].tag, runs[q].tag);
        ASSERT_EQ(parsed[q].entries.size(), runs[q].entries.size());
        for (std::size_t i = 0; i < runs[q].entries.size(); ++i) {
            ASSERT_EQ(parsed[q].entries[i].docno, runs[q].entries[i].docno);
            ASSERT_EQ(parsed[q].entries[i].rank, runs[q].entries[i].rank);
            ASSERT_NEAR(parsed[q].entries[i].score, runs[q].entries[i].score, 5e-7);
        }
    }
}
