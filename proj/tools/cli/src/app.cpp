#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "stopir/cli/commands.hpp"
#include "stopir/diagnostics.hpp"
#include "stopir/error.hpp"

namespace stopir::cli {

namespace {

auto parse_encoding(std::string const& name) -> Encoding {
    if (name == "utf8") {
        return Encoding::utf8;
    }
    if (name == "cp1256") {
        return Encoding::cp1256;
    }
    throw InvalidArgument("unknown encoding '" + name + "' (expected utf8 or cp1256)");
}

// Writes to the named file, or to `fallback` when the name is empty or "-".
template <typename F>
void with_output(std::string const& path, std::ostream& fallback, F&& f) {
    if (path.empty() || path == "-") {
        f(fallback);
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw DataError("cannot write " + path);
    }
    f(file);
}

// Restores the previous warning sink on scope exit.
class WarningScope {
  public:
    explicit WarningScope(std::ostream& err)
        : m_previous(set_warning_sink([&err](std::string_view msg) { err << "warning: " << msg << '\n'; })) {}
    ~WarningScope() { set_warning_sink(std::move(m_previous)); }
    WarningScope(WarningScope const&) = delete;
    auto operator=(WarningScope const&) -> WarningScope& = delete;

  private:
    WarningSink m_previous;
};

}  // namespace

auto run(int argc, char const* const* argv, std::ostream& out, std::ostream& err) -> int {
    CLI::App app{"Stopword-sensitivity retrieval experiments: index, search, evaluate, compare"};
    app.name("stopir");
    app.set_config("--config", "", "key=value experiment manifest; command-line flags override it");
    app.require_subcommand(1);

    // index
    IndexCommand index_cmd;
    std::vector<std::string> corpus;
    std::string index_encoding = "utf8";
    std::string index_output;
    bool keep_diacritics = false;
    auto* index = app.add_subcommand("index", "Build an index from TIPSTER SGML files");
    index->add_option("corpus", corpus, "Corpus files (plain or gzip)")->required()->check(CLI::ExistingFile);
    index->add_option("-o,--output", index_output, "Index file to write")->required();
    index->add_option("--stoplist", index_cmd.stoplist, "none | GS | CBS | CS | path to a list file")
        ->capture_default_str();
    index->add_option("--encoding", index_encoding, "utf8 | cp1256")->capture_default_str();
    index->add_flag("--keep-diacritics", keep_diacritics, "Do not strip diacritics and tatweel");
    index->add_option("--threads", index_cmd.threads, "Worker threads (0 = all cores)")->capture_default_str();

    // search
    SearchCommand search_cmd;
    std::string index_path;
    std::string topics_path;
    std::string model = "BM25";
    std::string search_encoding = "utf8";
    std::string run_output;
    std::optional<double> k1;
    std::optional<double> b;
    std::optional<double> k3;
    std::optional<double> mu;
    auto* search = app.add_subcommand("search", "Rank documents for TREC topics and write a run file");
    search->add_option("--index", index_path, "Index file")->required()->check(CLI::ExistingFile);
    search->add_option("--topics", topics_path, "TREC topics file")->required()->check(CLI::ExistingFile);
    search->add_option("--model", model, "TFIDF | BM25 | KL")->capture_default_str();
    search->add_option("--k1", k1, "k1 for TFIDF (default 1) or BM25 (default 1.2)");
    search->add_option("--b", b, "b for TFIDF (default 0.3) or BM25 (default 0.75)");
    search->add_option("--k3", k3, "BM25 query-term saturation (default 7)");
    search->add_option("--mu", mu, "Dirichlet prior for KL (default 2000)");
    search->add_option("--top-k", search_cmd.top_k, "Documents per query")->capture_default_str();
    search->add_option("--encoding", search_encoding, "Topics encoding: utf8 | cp1256")->capture_default_str();
    search->add_option("--threads", search_cmd.threads, "Worker threads (0 = all cores)")->capture_default_str();
    search->add_option("-o,--output", run_output, "Run file (default stdout)");

    // eval
    EvalCommand eval_cmd;
    std::string run_path;
    std::string qrels_path;
    std::string eval_tsv;
    std::string eval_output;
    auto* eval = app.add_subcommand("eval", "Evaluate a run file against relevance judgments");
    eval->add_option("--run", run_path, "TREC run file")->required()->check(CLI::ExistingFile);
    eval->add_option("--qrels", qrels_path, "TREC qrels file")->required()->check(CLI::ExistingFile);
    eval->add_option("--tsv", eval_tsv, "Also write a tab-separated report here");
    eval->add_option("-o,--output", eval_output, "Text report (default stdout)");

    // compare
    CompareCommand compare_cmd;
    std::string compare_tsv;
    std::string compare_output;
    auto* compare = app.add_subcommand("compare", "Friedman and Wilcoxon tables over evaluation reports");
    compare->add_option("reports", compare_cmd.reports, "TSV reports, optionally LABEL=path")->required();
    compare->add_option("--baseline", compare_cmd.baseline, "Baseline technique")->capture_default_str();
    compare->add_option("--tsv", compare_tsv, "Also write the tables as TSV");
    compare->add_option("-o,--output", compare_output, "Text tables (default stdout)");

    // stoplist
    auto* stoplist = app.add_subcommand("stoplist", "Build, combine or inspect stoplists");
    stoplist->require_subcommand(1);

    StoplistBuildCommand build_cmd;
    std::string build_index;
    std::string build_exclusions;
    std::string build_output;
    std::optional<std::uint64_t> cutoff;
    auto* sl_build = stoplist->add_subcommand("build", "Terms with collection frequency above a cutoff");
    sl_build->add_option("--index", build_index, "Index built without a stoplist")->required()->check(CLI::ExistingFile);
    sl_build->add_option("--cutoff", cutoff, "Keep terms occurring more than this many times");
    sl_build->add_option("--exclude", build_exclusions, "List of words to leave out")->check(CLI::ExistingFile);
    sl_build->add_option("--name", build_cmd.name, "Name of the new list")->capture_default_str();
    sl_build->add_option("-o,--output", build_output, "List file (default stdout)");

    StoplistCombineCommand combine_cmd;
    std::string combine_output;
    auto* sl_combine = stoplist->add_subcommand("combine", "Union of two lists");
    sl_combine->add_option("first", combine_cmd.first, "GS | CBS | CS | path")->required();
    sl_combine->add_option("second", combine_cmd.second, "GS | CBS | CS | path")->required();
    sl_combine->add_option("--name", combine_cmd.name, "Name of the new list")->capture_default_str();
    sl_combine->add_option("-o,--output", combine_output, "List file (default stdout)");

    StoplistInspectCommand inspect_cmd;
    std::string against;
    auto* sl_inspect = stoplist->add_subcommand("inspect", "Size of a list and overlap with another");
    sl_inspect->add_option("list", inspect_cmd.list, "GS | CBS | CS | path")->required();
    sl_inspect->add_option("--against", against, "Second list for overlap/union counts");

    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return kExitOk;
        }
        app.exit(e, out, err);
        return kExitUsage;
    }

    WarningScope warnings(err);
    try {
        if (*index) {
            index_cmd.corpus.assign(corpus.begin(), corpus.end());
            index_cmd.encoding = parse_encoding(index_encoding);
            index_cmd.normalize.strip_diacritics = !keep_diacritics;
            index_cmd.output = index_output;
            cmd_index(index_cmd, out);
        } else if (*search) {
            auto const parsed = parse_model(model);
            if (!parsed) {
                throw InvalidArgument("unknown model '" + model + "' (expected TFIDF, BM25 or KL)");
            }
            search_cmd.model.model = *parsed;
            if (*parsed == Model::tfidf) {
                search_cmd.model.tfidf.k1 = k1.value_or(search_cmd.model.tfidf.k1);
                search_cmd.model.tfidf.b = b.value_or(search_cmd.model.tfidf.b);
            } else if (*parsed == Model::bm25) {
                search_cmd.model.bm25.k1 = k1.value_or(search_cmd.model.bm25.k1);
                search_cmd.model.bm25.b = b.value_or(search_cmd.model.bm25.b);
                search_cmd.model.bm25.k3 = k3.value_or(search_cmd.model.bm25.k3);
            } else {
                search_cmd.model.dirichlet.mu = mu.value_or(search_cmd.model.dirichlet.mu);
            }
            search_cmd.model.tfidf.validate();
            search_cmd.model.bm25.validate();
            search_cmd.model.dirichlet.validate();
            if (search_cmd.top_k == 0) {
                throw InvalidArgument("--top-k must be >= 1");
            }
            search_cmd.index = index_path;
            search_cmd.topics = topics_path;
            search_cmd.encoding = parse_encoding(search_encoding);
            // Buffer so that a failing search leaves no partial run file.
            std::ostringstream buffer;
            cmd_search(search_cmd, buffer);
            with_output(run_output, out, [&](std::ostream& o) { o << buffer.str(); });
        } else if (*eval) {
            eval_cmd.run = run_path;
            eval_cmd.qrels = qrels_path;
            if (!eval_tsv.empty()) {
                eval_cmd.tsv = eval_tsv;
            }
            std::ostringstream buffer;
            cmd_eval(eval_cmd, buffer);
            with_output(eval_output, out, [&](std::ostream& o) { o << buffer.str(); });
        } else if (*compare) {
            if (!compare_tsv.empty()) {
                compare_cmd.tsv = compare_tsv;
            }
            std::ostringstream buffer;
            cmd_compare(compare_cmd, buffer);
            with_output(compare_output, out, [&](std::ostream& o) { o << buffer.str(); });
        } else if (*sl_build) {
            build_cmd.index = build_index;
            build_cmd.cutoff = cutoff;
            if (!build_exclusions.empty()) {
                build_cmd.exclusions = build_exclusions;
            }
            if (!build_output.empty()) {
                build_cmd.output = build_output;
            }
            cmd_stoplist_build(build_cmd, out);
        } else if (*sl_combine) {
            if (!combine_output.empty()) {
                combine_cmd.output = combine_output;
            }
            cmd_stoplist_combine(combine_cmd, out);
        } else if (*sl_inspect) {
            if (!against.empty()) {
                inspect_cmd.against = against;
            }
            cmd_stoplist_inspect(inspect_cmd, out);
        }
    } catch (InvalidArgument const& e) {
        err << "stopir: usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (Error const& e) {
        err << "stopir: " << e.what() << '\n';
        return kExitData;
    } catch (std::exception const& e) {
        err << "stopir: " << e.what() << '\n';
        return kExitData;
    }
    return kExitOk;
}

}  // namespace stopir::cli
