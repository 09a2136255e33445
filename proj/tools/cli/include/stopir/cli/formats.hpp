#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stopir/ranking.hpp"

namespace stopir::cli {

/// One TREC topic. The query text is `title + " " + description`.
struct Topic {
    std::string qid;
    std::string title;
    std::string description;

    [[nodiscard]] auto query_text() const -> std::string;
};

/// Parses `<top>` blocks with `<num>`, `<title>` and `<desc>` fields.
/// Closing field tags are optional; a field ends at the next tag. The
/// "Number:" and "Description:" labels are stripped.
[[nodiscard]] auto parse_topics(std::string_view text) -> std::vector<Topic>;

/// TREC run format: `qid Q0 docno rank score tag`, score with 6 decimals.
void write_run(std::ostream& out, RankedRun const& run);
void write_runs(std::ostream& out, std::span<RankedRun const> runs);

/// Groups lines by qid in order of first appearance; entries keep file
/// order. Throws ParseError with the line number on malformed lines or a
/// docno repeated within a query.
[[nodiscard]] auto read_runs(std::istream& in) -> std::vector<RankedRun>;

}  // namespace stopir::cli
