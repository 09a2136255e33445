#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "stopir/ranking.hpp"

namespace stopir {

/// Binary relevance judgments. A qid with only non-relevant judgments is
/// present with an empty set.
struct Qrels {
    std::map<std::string, std::set<std::string>> judgments;

    [[nodiscard]] auto relevant(std::string const& qid) const -> std::set<std::string> const*;
};

/// Reads `qid iter docno rel` lines; rel > 0 is relevant. Blank lines are
/// skipped. Throws ParseError with the line number on malformed lines.
[[nodiscard]] auto parse_qrels(std::istream& in) -> Qrels;

inline constexpr std::array<std::size_t, 9> kCutoffLevels = {5, 10, 15, 20, 30, 100, 200, 500, 1000};
inline constexpr std::size_t kRecallPoints = 11;

enum class EvalStatus { ok, no_relevant, missing_qrels };

struct QueryEval {
    std::string qid;
    std::size_t num_relevant = 0;
    std::size_t num_retrieved = 0;
    std::size_t num_relevant_retrieved = 0;
    double average_precision = 0.0;
    std::array<double, kRecallPoints> interp_precision{};
    std::array<double, kCutoffLevels.size()> cutoff_precision{};
    /// Precision at rank R (the exact breakeven point).
    double r_precision = 0.0;
    EvalStatus status = EvalStatus::ok;

    [[nodiscard]] auto counted() const noexcept -> bool { return status == EvalStatus::ok; }
};

/// trec_eval-style measures for one ranked list. With no relevant documents
/// every measure is 0 and the status is `no_relevant`.
[[nodiscard]] auto evaluate_query(RankedRun const& run, std::set<std::string> const& relevant)
    -> QueryEval;

/// Means are taken over queries with R > 0; other queries are kept in
/// `per_query` with their status and listed in `excluded`.
struct EvalReport {
    std::string tag;
    std::vector<QueryEval> per_query;
    std::vector<std::string> excluded;
    std::size_t evaluated_queries = 0;
    double mean_average_precision = 0.0;
    double mean_r_precision = 0.0;
    std::array<double, kRecallPoints> mean_interp_precision{};
    std::array<double, kCutoffLevels.size()> mean_cutoff_precision{};
    std::size_t total_relevant = 0;
    std::size_t total_retrieved = 0;
    std::size_t total_relevant_retrieved = 0;
};

/// Throws DataError on a duplicate qid among the runs.
[[nodiscard]] auto evaluate_run(std::span<RankedRun const> runs, Qrels const& qrels) -> EvalReport;

/// Aligned plain-text report.
void write_report_text(std::ostream& out, EvalReport const& report);

/// Tab-separated report: a header row, one row per query and a final `all`
/// row holding the means and totals.
void write_report_tsv(std::ostream& out, EvalReport const& report);

/// Reads back the per-query rows of a TSV report (the `all` row is
/// recomputed, not trusted).
[[nodiscard]] auto read_report_tsv(std::istream& in) -> EvalReport;

[[nodiscard]] auto to_string(EvalStatus status) -> std::string_view;

}  // namespace stopir
