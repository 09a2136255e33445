#include "stopir/cli/commands.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <fmt/ranges.h>

#include "stopir/cli/formats.hpp"
#include "stopir/diagnostics.hpp"
#include "stopir/error.hpp"

namespace stopir::cli {

namespace {

auto open_output(std::filesystem::path const& path) -> std::ofstream {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    return out;
}

auto open_input(std::filesystem::path const& path) -> std::ifstream {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    return in;
}

// Prefixes ParseError messages with the file they came from.
template <typename F>
auto with_file(std::filesystem::path const& path, F&& f) {
    try {
        return f();
    } catch (ParseError const& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

auto load_list_argument(std::string const& selection) -> Stoplist {
    auto list = resolve_stoplist(selection);
    if (!list) {
        throw InvalidArgument("a stoplist is required, got 'none'");
    }
    return *std::move(list);
}

}  // namespace

auto resolve_stoplist(std::string const& selection, NormalizeOptions options)
    -> std::optional<Stoplist> {
    if (selection.empty() || selection == "none") {
        return std::nullopt;
    }
    if (auto code = parse_stoplist_code(selection)) {
        return bundled_stoplist(*code, options);
    }
    std::filesystem::path const path(selection);
    if (!std::filesystem::is_regular_file(path)) {
        throw DataError("stoplist is neither none/GS/CBS/CS nor a readable file: " + selection);
    }
    return with_file(path, [&] {
        return load_stoplist_file(path, path.stem().string(), Provenance::custom, options);
    });
}

void print_summary(std::ostream& out, IndexSummary const& summary) {
    fmt::print(out, "documents          {}\n", summary.documents);
    fmt::print(out, "tokens             {}\n", summary.tokens);
    fmt::print(out, "vocabulary         {}\n", summary.vocabulary);
    fmt::print(out, "avgdl              {:.6f}\n", summary.avgdl);
    fmt::print(out, "stopwords removed  {}\n", summary.removed);
    fmt::print(out, "stoplist           {}\n", summary.stoplist.empty() ? "none" : summary.stoplist);
}

auto cmd_index(IndexCommand const& command, std::ostream& out) -> IndexSummary {
    if (command.corpus.empty()) {
        throw InvalidArgument("no corpus files given");
    }
    auto const stoplist = resolve_stoplist(command.stoplist, command.normalize);
    std::vector<SourceDocument> docs;
    for (auto const& path : command.corpus) {
        auto parsed = with_file(path, [&] {
            return parse_trec_documents(read_text_file(path, command.encoding));
        });
        docs.insert(docs.end(), std::make_move_iterator(parsed.begin()),
                    std::make_move_iterator(parsed.end()));
    }
    BuildOptions options;
    options.normalize = command.normalize;
    options.threads = command.threads;
    auto const index = build_index(docs, stoplist, options);
    index.save(command.output);

    IndexSummary summary;
    summary.documents = index.doc_count();
    summary.tokens = index.total_tokens();
    summary.vocabulary = index.term_count();
    summary.avgdl = index.avg_doc_length();
    summary.removed = index.removed_tokens();
    summary.stoplist = stoplist ? stoplist->name() : std::string{};
    print_summary(out, summary);
    return summary;
}

auto cmd_search(SearchCommand const& command, std::ostream& out) -> std::vector<RankedRun> {
    auto const index = with_file(command.index, [&] { return Index::load(command.index); });
    auto const topics = with_file(command.topics, [&] {
        return parse_topics(read_text_file(command.topics, command.encoding));
    });
    std::vector<Query> queries;
    queries.reserve(topics.size());
    for (auto const& topic : topics) {
        queries.push_back(make_query(index, topic.qid, topic.query_text()));
        if (queries.back().empty()) {
            warn("topic " + topic.qid + ": no terms left after normalization and stopword removal");
        }
    }
    auto runs = run_queries(index, queries, command.model, command.top_k, command.threads);
    write_runs(out, runs);
    return runs;
}

auto cmd_eval(EvalCommand const& command, std::ostream& out) -> EvalReport {
    auto runs = with_file(command.run, [&] {
        auto in = open_input(command.run);
        return read_runs(in);
    });
    auto const qrels = with_file(command.qrels, [&] {
        auto in = open_input(command.qrels);
        return parse_qrels(in);
    });
    auto report = evaluate_run(runs, qrels);
    for (auto const& e : report.per_query) {
        if (e.status == EvalStatus::missing_qrels) {
            warn("query " + e.qid + " has no relevance judgments; excluded from means");
        } else if (e.status == EvalStatus::no_relevant) {
            warn("query " + e.qid + " has no relevant documents; excluded from means");
        }
    }
    write_report_text(out, report);
    if (command.tsv) {
        auto tsv = open_output(*command.tsv);
        write_report_tsv(tsv, report);
    }
    return report;
}

auto compare_techniques(std::vector<Technique> const& techniques, std::string const& baseline)
    -> Comparison {
    if (techniques.size() < 2) {
        throw DataError("comparison needs at least two techniques");
    }
    std::set<std::string> labels;
    for (auto const& t : techniques) {
        if (!labels.insert(t.label).second) {
            throw DataError("technique label repeated: " + t.label);
        }
    }
    if (!labels.contains(baseline)) {
        throw DataError("baseline technique '" + baseline + "' is not among the reports");
    }

    // Per technique: qid -> AP over counted queries.
    std::vector<std::map<std::string, double>> ap(techniques.size());
    for (std::size_t j = 0; j < techniques.size(); ++j) {
        for (auto const& e : techniques[j].report.per_query) {
            if (e.counted()) {
                ap[j][e.qid] = e.average_precision;
            }
        }
    }
    for (std::size_t j = 1; j < techniques.size(); ++j) {
        std::vector<std::string> only_first;
        std::vector<std::string> only_other;
        for (auto const& [qid, v] : ap[0]) {
            if (!ap[j].contains(qid)) {
                only_first.push_back(qid);
            }
        }
        for (auto const& [qid, v] : ap[j]) {
            if (!ap[0].contains(qid)) {
                only_other.push_back(qid);
            }
        }
        if (!only_first.empty() || !only_other.empty()) {
            throw DataError(fmt::format("query sets differ between {} and {}: only in {}: [{}]; only in {}: [{}]",
                                        techniques[0].label, techniques[j].label,
                                        techniques[0].label, fmt::join(only_first, " "),
                                        techniques[j].label, fmt::join(only_other, " ")));
        }
    }

    if (ap[0].size() < 2) {
        throw DataError(fmt::format("comparison needs at least two evaluated queries, got {}", ap[0].size()));
    }

    Comparison result;
    result.baseline = baseline;
    for (auto const& [qid, v] : ap[0]) {
        result.qids.push_back(qid);
    }
    std::vector<std::string> names;
    std::vector<std::vector<double>> rows(result.qids.size(), std::vector<double>(techniques.size()));
    for (std::size_t j = 0; j < techniques.size(); ++j) {
        names.push_back(techniques[j].label);
        for (std::size_t i = 0; i < result.qids.size(); ++i) {
            rows[i][j] = ap[j].at(result.qids[i]);
        }
    }
    ScoreMatrix const matrix(names, rows);
    result.friedman = friedman(matrix);

    std::size_t base = 0;
    for (std::size_t j = 0; j < techniques.size(); ++j) {
        auto const column = matrix.column(j);
        double mean = 0.0;
        for (double v : column) {
            mean += v;
        }
        mean /= static_cast<double>(column.size());
        result.techniques.push_back({names[j], mean, result.friedman.mean_ranks[j]});
        if (names[j] == baseline) {
            base = j;
        }
    }
    auto const baseline_column = matrix.column(base);
    for (std::size_t j = 0; j < techniques.size(); ++j) {
        if (j == base) {
            continue;
        }
        auto const column = matrix.column(j);
        result.versus_baseline.push_back(
            {names[j], result.techniques[j].mean_precision, wilcoxon_signed_rank(column, baseline_column)});
    }
    std::stable_sort(result.techniques.begin(), result.techniques.end(),
                     [](auto const& a, auto const& b) { return a.mean_rank < b.mean_rank; });
    std::stable_sort(result.versus_baseline.begin(), result.versus_baseline.end(),
                     [](auto const& a, auto const& b) {
                         return a.wilcoxon.counts.better < b.wilcoxon.counts.better;
                     });
    return result;
}

void write_comparison_text(std::ostream& out, Comparison const& c) {
    auto sig = [](double p) { return p < kSignificanceLevel ? "*" : ""; };
    fmt::print(out, "Friedman test for all techniques (n = {} queries, k = {} techniques)\n\n",
               c.qids.size(), c.techniques.size());
    fmt::print(out, "{:<16} {:>14} {:>10}\n", "Technique", "Mean Precision", "Mean Rank");
    for (auto const& t : c.techniques) {
        fmt::print(out, "{:<16} {:>14.4f} {:>10.2f}\n", t.label, t.mean_precision, t.mean_rank);
    }
    fmt::print(out, "\nchi2 = {:.3f}  df = {}  p = {:.3f} (raw {:.6g}){}{}\n\n", c.friedman.chi2,
               c.friedman.df, c.friedman.p_value, c.friedman.p_value,
               c.friedman.tie_corrected ? "  tie-corrected" : "", sig(c.friedman.p_value));

    fmt::print(out, "Wilcoxon signed-rank test against baseline {} (QP: query precision, BP: baseline precision)\n\n",
               c.baseline);
    fmt::print(out, "{:<16} {:>14} {:>8} {:>8} {:>8} {:>8} {:>12}\n", "Technique", "Mean Precision",
               "QP > BP", "QP < BP", "QP = BP", "P-Value", "p (raw)");
    for (auto const& row : c.versus_baseline) {
        auto const& w = row.wilcoxon;
        fmt::print(out, "{:<16} {:>14.4f} {:>8} {:>8} {:>8} {:>8.3f} {:>12.6g}{}\n", row.label,
                   row.mean_precision, w.counts.better, w.counts.worse, w.counts.tied, w.p_value,
                   w.p_value, sig(w.p_value));
    }
    fmt::print(out, "\n* significant at the {:.2f} level\n", kSignificanceLevel);
}

void write_comparison_tsv(std::ostream& out, Comparison const& c) {
    fmt::print(out, "table\ttechnique\tmean_precision\tmean_rank\tqp_gt_bp\tqp_lt_bp\tqp_eq_bp\tstatistic\tp_value\n");
    for (auto const& t : c.techniques) {
        fmt::print(out, "friedman\t{}\t{:.10f}\t{:.10f}\t\t\t\t\t\n", t.label, t.mean_precision, t.mean_rank);
    }
    fmt::print(out, "friedman\tall\t\t\t\t\t\t{:.10f}\t{:.10g}\n", c.friedman.chi2, c.friedman.p_value);
    for (auto const& row : c.versus_baseline) {
        auto const& w = row.wilcoxon;
        fmt::print(out, "wilcoxon\t{}\t{:.10f}\t\t{}\t{}\t{}\t{:.1f}\t{:.10g}\n", row.label,
                   row.mean_precision, w.counts.better, w.counts.worse, w.counts.tied, w.statistic,
                   w.p_value);
    }
}

auto cmd_compare(CompareCommand const& command, std::ostream& out) -> Comparison {
    std::vector<Technique> techniques;
    for (auto const& spec : command.reports) {
        std::string label;
        std::filesystem::path path;
        auto const eq = spec.find('=');
        if (eq != std::string::npos && !std::filesystem::exists(spec)) {
            label = spec.substr(0, eq);
            path = spec.substr(eq + 1);
        } else {
            path = spec;
        }
        auto report = with_file(path, [&] {
            auto in = open_input(path);
            return read_report_tsv(in);
        });
        if (label.empty()) {
            label = report.tag.empty() ? path.stem().string() : report.tag;
        }
        techniques.push_back({std::move(label), std::move(report)});
    }
    auto comparison = compare_techniques(techniques, command.baseline);
    write_comparison_text(out, comparison);
    if (command.tsv) {
        auto tsv = open_output(*command.tsv);
        write_comparison_tsv(tsv, comparison);
    }
    return comparison;
}

namespace {

void emit_list(Stoplist const& list, std::optional<std::filesystem::path> const& output, std::ostream& out) {
    if (output) {
        auto file = open_output(*output);
        write_stoplist(file, list);
    } else {
        write_stoplist(out, list);
    }
}

}  // namespace

auto cmd_stoplist_build(StoplistBuildCommand const& command, std::ostream& out) -> Stoplist {
    if (!command.cutoff) {
        throw InvalidArgument("stoplist build requires --cutoff");
    }
    auto const index = with_file(command.index, [&] { return Index::load(command.index); });
    if (index.stoplist()) {
        warn("index was built with stoplist " + index.stoplist()->name()
             + "; its words are absent from the frequency table");
    }
    std::set<Token> exclusions;
    if (command.exclusions) {
        auto const excluded = with_file(*command.exclusions, [&] {
            return load_stoplist_file(*command.exclusions, "exclusions", Provenance::custom,
                                      index.normalize_options());
        });
        exclusions.insert(excluded.words().begin(), excluded.words().end());
    }
    auto const freqs = index.term_frequencies();
    std::uint64_t max_freq = 0;
    for (auto const& [term, f] : freqs) {
        max_freq = std::max(max_freq, f);
    }
    auto list = build_corpus_stoplist(freqs, *command.cutoff, exclusions, command.name);
    if (*command.cutoff >= max_freq) {
        warn(fmt::format("cutoff {} is not below the highest collection frequency ({}); list is empty",
                         *command.cutoff, max_freq));
    }
    emit_list(list, command.output, out);
    return list;
}

auto cmd_stoplist_combine(StoplistCombineCommand const& command, std::ostream& out) -> Stoplist {
    auto list = combine(load_list_argument(command.first), load_list_argument(command.second),
                        command.name);
    emit_list(list, command.output, out);
    return list;
}

auto cmd_stoplist_inspect(StoplistInspectCommand const& command, std::ostream& out)
    -> StoplistInspection {
    auto const list = load_list_argument(command.list);
    StoplistInspection result;
    result.size = list.size();
    fmt::print(out, "{:<10} {} words ({})\n", list.name(), list.size(), to_string(list.provenance()));
    if (command.against) {
        auto const other = load_list_argument(*command.against);
        result.other_size = other.size();
        result.overlap = overlap(list, other);
        result.union_size = combine(list, other).size();
        fmt::print(out, "{:<10} {} words ({})\n", other.name(), other.size(),
                   to_string(other.provenance()));
        fmt::print(out, "overlap    {}\n", *result.overlap);
        fmt::print(out, "union      {}\n", *result.union_size);
    }
    return result;
}

}  // namespace stopir::cli
