#include "stopir/treceval.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "stopir/error.hpp"

namespace stopir {

auto Qrels::relevant(std::string const& qid) const -> std::set<std::string> const* {
    auto it = judgments.find(qid);
    return it == judgments.end() ? nullptr : &it->second;
}

namespace {

auto split_ws(std::string const& line) -> std::vector<std::string> {
    std::istringstream in(line);
    std::vector<std::string> fields;
    std::string field;
    while (in >> field) {
        fields.push_back(std::move(field));
    }
    return fields;
}

template <typename T>
auto parse_number(std::string_view s, T& value) -> bool {
    auto const* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, value);
    return ec == std::errc{} && ptr == end;
}

auto parse_double(std::string const& s, double& value) -> bool {
    try {
        std::size_t used = 0;
        value = std::stod(s, &used);
        return used == s.size();
    } catch (std::exception const&) {
        return false;
    }
}

}  // namespace

auto parse_qrels(std::istream& in) -> Qrels {
    Qrels qrels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto fields = split_ws(line);
        if (fields.empty()) {
            continue;
        }
        if (fields.size() != 4) {
            throw ParseError("qrels line must have 4 fields", ParseError::Unit::line, line_no);
        }
        long rel = 0;
        if (!parse_number(fields[3], rel)) {
            throw ParseError("non-integer relevance '" + fields[3] + "'", ParseError::Unit::line,
                             line_no);
        }
        auto& judged = qrels.judgments[fields[0]];
        if (rel > 0) {
            judged.insert(fields[2]);
        }
    }
    return qrels;
}

auto evaluate_query(RankedRun const& run, std::set<std::string> const& relevant) -> QueryEval {
    QueryEval e;
    e.qid = run.qid;
    e.num_relevant = relevant.size();
    e.num_retrieved = run.entries.size();
    if (relevant.empty()) {
        e.status = EvalStatus::no_relevant;
        return e;
    }
    std::size_t const r = relevant.size();
    double const r_double = static_cast<double>(r);

    // (relevant-so-far, rank) at each relevant hit
    std::vector<std::pair<std::size_t, std::size_t>> hits;
    std::size_t found = 0;
    std::size_t found_at_r = 0;
    std::array<std::size_t, kCutoffLevels.size()> found_at_cutoff{};
    double precision_sum = 0.0;
    for (std::size_t i = 0; i < run.entries.size(); ++i) {
        std::size_t const rank = i + 1;
        if (relevant.contains(run.entries[i].docno)) {
            ++found;
            precision_sum += static_cast<double>(found) / static_cast<double>(rank);
            hits.emplace_back(found, rank);
        }
        if (rank == r) {
            found_at_r = found;
        }
        for (std::size_t c = 0; c < kCutoffLevels.size(); ++c) {
            if (rank == kCutoffLevels[c]) {
                found_at_cutoff[c] = found;
            }
        }
    }
    if (run.entries.size() < r) {
        found_at_r = found;
    }
    for (std::size_t c = 0; c < kCutoffLevels.size(); ++c) {
        if (run.entries.size() < kCutoffLevels[c]) {
            found_at_cutoff[c] = found;
        }
        e.cutoff_precision[c] =
            static_cast<double>(found_at_cutoff[c]) / static_cast<double>(kCutoffLevels[c]);
    }
    e.num_relevant_retrieved = found;
    e.average_precision = precision_sum / r_double;
    e.r_precision = static_cast<double>(found_at_r) / r_double;

    // Interpolated precision at recall i/10: max precision over hits with
    // recall >= i/10, i.e. count * 10 >= i * R.
    for (std::size_t level = 0; level < kRecallPoints; ++level) {
        double best = 0.0;
        for (auto const& [count, rank] : hits) {
            if (count * 10 >= level * r) {
                best = std::max(best, static_cast<double>(count) / static_cast<double>(rank));
            }
        }
        e.interp_precision[level] = best;
    }
    return e;
}

namespace {

void summarize(EvalReport& report) {
    for (auto const& e : report.per_query) {
        if (!e.counted()) {
            report.excluded.push_back(e.qid);
            continue;
        }
        ++report.evaluated_queries;
        report.mean_average_precision += e.average_precision;
        report.mean_r_precision += e.r_precision;
        for (std::size_t i = 0; i < kRecallPoints; ++i) {
            report.mean_interp_precision[i] += e.interp_precision[i];
        }
        for (std::size_t c = 0; c < kCutoffLevels.size(); ++c) {
            report.mean_cutoff_precision[c] += e.cutoff_precision[c];
        }
        report.total_relevant += e.num_relevant;
        report.total_retrieved += e.num_retrieved;
        report.total_relevant_retrieved += e.num_relevant_retrieved;
    }
    if (report.evaluated_queries > 0) {
        double const n = static_cast<double>(report.evaluated_queries);
        report.mean_average_precision /= n;
        report.mean_r_precision /= n;
        for (auto& v : report.mean_interp_precision) {
            v /= n;
        }
        for (auto& v : report.mean_cutoff_precision) {
            v /= n;
        }
    }
}

}  // namespace

auto evaluate_run(std::span<RankedRun const> runs, Qrels const& qrels) -> EvalReport {
    EvalReport report;
    std::unordered_set<std::string> seen;
    static std::set<std::string> const kNone;
    for (auto const& run : runs) {
        if (!seen.insert(run.qid).second) {
            throw DataError("duplicate qid in run: " + run.qid);
        }
        if (report.tag.empty()) {
            report.tag = run.tag;
        }
        auto const* relevant = qrels.relevant(run.qid);
        auto e = evaluate_query(run, relevant != nullptr ? *relevant : kNone);
        if (relevant == nullptr) {
            e.status = EvalStatus::missing_qrels;
        }
        report.per_query.push_back(std::move(e));
    }
    summarize(report);
    return report;
}

auto to_string(EvalStatus status) -> std::string_view {
    switch (status) {
    case EvalStatus::ok: return "ok";
    case EvalStatus::no_relevant: return "no_relevant";
    case EvalStatus::missing_qrels: return "missing_qrels";
    }
    return "ok";
}

void write_report_text(std::ostream& out, EvalReport const& report) {
    fmt::print(out, "Run: {}\n", report.tag.empty() ? "-" : report.tag);
    fmt::print(out, "Queries evaluated:              {:>8}\n", report.evaluated_queries);
    if (!report.excluded.empty()) {
        fmt::print(out, "Queries excluded (R = 0):       {:>8}  [", report.excluded.size());
        for (std::size_t i = 0; i < report.excluded.size(); ++i) {
            fmt::print(out, "{}{}", i == 0 ? "" : " ", report.excluded[i]);
        }
        fmt::print(out, "]\n");
    }
    fmt::print(out, "Total relevant documents:       {:>8}\n", report.total_relevant);
    fmt::print(out, "Total retrieved documents:      {:>8}\n", report.total_retrieved);
    fmt::print(out, "Total relevant retrieved:       {:>8}\n", report.total_relevant_retrieved);
    fmt::print(out, "Average precision (non-interp): {:>8.4f}\n", report.mean_average_precision);
    fmt::print(out, "R-precision (exact breakeven):  {:>8.4f}\n", report.mean_r_precision);
    fmt::print(out, "\nInterpolated recall-precision\n");
    for (std::size_t i = 0; i < kRecallPoints; ++i) {
        fmt::print(out, "  at {:.2f}  {:.4f}\n", static_cast<double>(i) / 10.0,
                   report.mean_interp_precision[i]);
    }
    fmt::print(out, "\nPrecision at document cut-off\n");
    for (std::size_t c = 0; c < kCutoffLevels.size(); ++c) {
        fmt::print(out, "  at {:>4} docs  {:.4f}\n", kCutoffLevels[c], report.mean_cutoff_precision[c]);
    }
    fmt::print(out, "\n{:<12} {:>6} {:>6} {:>6} {:>8} {:>8} {:>8}  {}\n", "qid", "R", "ret",
               "relret", "AP", "R-prec", "P@10", "status");
    for (auto const& e : report.per_query) {
        fmt::print(out, "{:<12} {:>6} {:>6} {:>6} {:>8.4f} {:>8.4f} {:>8.4f}  {}\n", e.qid,
                   e.num_relevant, e.num_retrieved, e.num_relevant_retrieved, e.average_precision,
                   e.r_precision, e.cutoff_precision[1], to_string(e.status));
    }
}

namespace {

constexpr std::size_t kFixedColumns = 7;  // tag qid num_rel num_ret num_rel_ret map Rprec

auto tsv_header() -> std::string {
    std::string h = "tag\tqid\tnum_rel\tnum_ret\tnum_rel_ret\tmap\tRprec";
    for (auto c : kCutoffLevels) {
        h += fmt::format("\tP{}", c);
    }
    for (std::size_t i = 0; i < kRecallPoints; ++i) {
        h += fmt::format("\tiprec_at_recall_{:.2f}", static_cast<double>(i) / 10.0);
    }
    h += "\tstatus";
    return h;
}

}  // namespace

void write_report_tsv(std::ostream& out, EvalReport const& report) {
    std::string const tag = report.tag.empty() ? "-" : report.tag;
    out << tsv_header() << '\n';
    auto row = [&](std::string_view qid, std::size_t rel, std::size_t ret, std::size_t relret,
                   double ap, double rprec, auto const& cutoff, auto const& interp,
                   std::string_view status) {
        fmt::print(out, "{}\t{}\t{}\t{}\t{}\t{:.10f}\t{:.10f}", tag, qid, rel, ret, relret, ap, rprec);
        for (double v : cutoff) {
            fmt::print(out, "\t{:.10f}", v);
        }
        for (double v : interp) {
            fmt::print(out, "\t{:.10f}", v);
        }
        fmt::print(out, "\t{}\n", status);
    };
    for (auto const& e : report.per_query) {
        row(e.qid, e.num_relevant, e.num_retrieved, e.num_relevant_retrieved, e.average_precision,
            e.r_precision, e.cutoff_precision, e.interp_precision, to_string(e.status));
    }
    row("all", report.total_relevant, report.total_retrieved, report.total_relevant_retrieved,
        report.mean_average_precision, report.mean_r_precision, report.mean_cutoff_precision,
        report.mean_interp_precision, "ok");
}

auto read_report_tsv(std::istream& in) -> EvalReport {
    std::string line;
    std::size_t line_no = 0;
    std::size_t const columns = kFixedColumns + kCutoffLevels.size() + kRecallPoints + 1;
    EvalReport report;
    std::vector<QueryEval> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (line_no == 1) {
            if (line != tsv_header()) {
                throw ParseError("not an evaluation report (bad header)", ParseError::Unit::line, 1);
            }
            continue;
        }
        std::vector<std::string> f;
        std::size_t start = 0;
        while (true) {
            auto tab = line.find('\t', start);
            f.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
            if (tab == std::string::npos) {
                break;
            }
            start = tab + 1;
        }
        if (f.size() != columns) {
            throw ParseError(fmt::format("expected {} columns, found {}", columns, f.size()),
                             ParseError::Unit::line, line_no);
        }
        if (f[1] == "all") {
            continue;
        }
        QueryEval e;
        bool ok = true;
        if (report.tag.empty() && f[0] != "-") {
            report.tag = f[0];
        }
        e.qid = f[1];
        ok &= parse_number(f[2], e.num_relevant);
        ok &= parse_number(f[3], e.num_retrieved);
        ok &= parse_number(f[4], e.num_relevant_retrieved);
        ok &= parse_double(f[5], e.average_precision);
        ok &= parse_double(f[6], e.r_precision);
        for (std::size_t c = 0; c < kCutoffLevels.size(); ++c) {
            ok &= parse_double(f[kFixedColumns + c], e.cutoff_precision[c]);
        }
        for (std::size_t i = 0; i < kRecallPoints; ++i) {
            ok &= parse_double(f[kFixedColumns + kCutoffLevels.size() + i], e.interp_precision[i]);
        }
        auto const& status = f.back();
        if (status == "ok") {
            e.status = EvalStatus::ok;
        } else if (status == "no_relevant") {
            e.status = EvalStatus::no_relevant;
        } else if (status == "missing_qrels") {
            e.status = EvalStatus::missing_qrels;
        } else {
            ok = false;
        }
        if (!ok) {
            throw ParseError("malformed report row", ParseError::Unit::line, line_no);
        }
        rows.push_back(std::move(e));
    }
    // Recompute aggregates from the rows.
    std::string tag = report.tag;
    report = EvalReport{};
    report.tag = std::move(tag);
    report.per_query = std::move(rows);
    summarize(report);
    return report;
}

}  // namespace stopir
