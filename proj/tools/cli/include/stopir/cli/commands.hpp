#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stopir/index.hpp"
#include "stopir/ranking.hpp"
#include "stopir/sigtest.hpp"
#include "stopir/stoplists.hpp"
#include "stopir/treceval.hpp"

namespace stopir::cli {

/// Resolves a stoplist selection: "none", a bundled code (GS, CBS, CS) or a
/// path to a list file (named after the file stem).
[[nodiscard]] auto resolve_stoplist(std::string const& selection, NormalizeOptions options = {})
    -> std::optional<Stoplist>;

struct IndexCommand {
    std::vector<std::filesystem::path> corpus;
    Encoding encoding = Encoding::utf8;
    std::string stoplist = "none";
    NormalizeOptions normalize;
    unsigned threads = 0;
    std::filesystem::path output;
};

struct IndexSummary {
    std::size_t documents = 0;
    std::uint64_t tokens = 0;
    std::size_t vocabulary = 0;
    double avgdl = 0.0;
    std::uint64_t removed = 0;
    std::string stoplist;  // empty when none
};

/// Parses, indexes and saves. Prints the build summary to `out`.
auto cmd_index(IndexCommand const& command, std::ostream& out) -> IndexSummary;

void print_summary(std::ostream& out, IndexSummary const& summary);

struct SearchCommand {
    std::filesystem::path index;
    std::filesystem::path topics;
    Encoding encoding = Encoding::utf8;
    ModelConfig model;
    std::size_t top_k = kDefaultTopK;
    unsigned threads = 0;
};

/// Writes the run for every topic, in topic order, to `out`. Topics whose
/// terms are all removed produce no lines and a warning.
auto cmd_search(SearchCommand const& command, std::ostream& out) -> std::vector<RankedRun>;

struct EvalCommand {
    std::filesystem::path run;
    std::filesystem::path qrels;
    std::optional<std::filesystem::path> tsv;
};

/// Prints the plain-text report to `out` and, if requested, writes the TSV.
auto cmd_eval(EvalCommand const& command, std::ostream& out) -> EvalReport;

/// One technique in a comparison: a label and its per-query AP values.
struct Technique {
    std::string label;
    EvalReport report;
};

struct TechniqueSummary {
    std::string label;
    double mean_precision = 0.0;
    double mean_rank = 0.0;
};

struct BaselineComparison {
    std::string label;
    double mean_precision = 0.0;
    WilcoxonResult wilcoxon;
};

/// Friedman table over all techniques plus a Wilcoxon comparison of every
/// other technique against the baseline.
struct Comparison {
    std::vector<std::string> qids;
    std::vector<TechniqueSummary> techniques;  // sorted by mean rank
    FriedmanResult friedman;
    std::string baseline;
    std::vector<BaselineComparison> versus_baseline;  // sorted by QP > BP
};

inline constexpr char const* kDefaultBaseline = "TFIDF";

/// Throws DataError when the evaluated qid sets differ, labels repeat or the
/// baseline is missing.
[[nodiscard]] auto compare_techniques(std::vector<Technique> const& techniques,
                                      std::string const& baseline = kDefaultBaseline) -> Comparison;

void write_comparison_text(std::ostream& out, Comparison const& comparison);
void write_comparison_tsv(std::ostream& out, Comparison const& comparison);

struct CompareCommand {
    /// Each entry is `path` or `LABEL=path`; the label defaults to the
    /// report's run tag.
    std::vector<std::string> reports;
    std::string baseline = kDefaultBaseline;
    std::optional<std::filesystem::path> tsv;
};

auto cmd_compare(CompareCommand const& command, std::ostream& out) -> Comparison;

struct StoplistBuildCommand {
    std::filesystem::path index;
    std::optional<std::uint64_t> cutoff;
    std::optional<std::filesystem::path> exclusions;
    std::string name = "CBS";
    std::optional<std::filesystem::path> output;
};

/// Writes the list to `output` (or `out`) and returns it. Throws
/// InvalidArgument when no cutoff is given.
auto cmd_stoplist_build(StoplistBuildCommand const& command, std::ostream& out) -> Stoplist;

struct StoplistCombineCommand {
    std::string first;
    std::string second;
    std::string name = "CS";
    std::optional<std::filesystem::path> output;
};

auto cmd_stoplist_combine(StoplistCombineCommand const& command, std::ostream& out) -> Stoplist;

struct StoplistInspectCommand {
    std::string list;
    std::optional<std::string> against;
};

struct StoplistInspection {
    std::size_t size = 0;
    std::optional<std::size_t> other_size;
    std::optional<std::size_t> overlap;
    std::optional<std::size_t> union_size;
};

auto cmd_stoplist_inspect(StoplistInspectCommand const& command, std::ostream& out)
    -> StoplistInspection;

/// Exit codes of the `stopir` executable.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2 };

/// Full command-line entry point. Warnings and errors go to `err`.
auto run(int argc, char const* const* argv, std::ostream& out, std::ostream& err) -> int;

}  // namespace stopir::cli
