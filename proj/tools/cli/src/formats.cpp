#include "stopir/cli/formats.hpp"

#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "stopir/error.hpp"

namespace stopir::cli {

auto Topic::query_text() const -> std::string {
    if (description.empty()) {
        return title;
    }
    if (title.empty()) {
        return description;
    }
    return title + " " + description;
}

namespace {

auto trim(std::string_view s) -> std::string {
    auto const first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    auto const last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

auto strip_label(std::string value, std::string_view label) -> std::string {
    if (value.size() >= label.size()) {
        bool match = true;
        for (std::size_t i = 0; i < label.size(); ++i) {
            if (std::tolower(static_cast<unsigned char>(value[i]))
                != std::tolower(static_cast<unsigned char>(label[i]))) {
                match = false;
                break;
            }
        }
        if (match) {
            return trim(std::string_view(value).substr(label.size()));
        }
    }
    return value;
}

// Text after `<tag>` up to the next '<', or nullopt when the tag is absent.
auto field(std::string_view block, std::string_view tag) -> std::optional<std::string> {
    auto const open = block.find(tag);
    if (open == std::string_view::npos) {
        return std::nullopt;
    }
    auto const begin = open + tag.size();
    auto const end = block.find('<', begin);
    return trim(block.substr(begin, end == std::string_view::npos ? std::string_view::npos : end - begin));
}

}  // namespace

auto parse_topics(std::string_view text) -> std::vector<Topic> {
    std::vector<Topic> topics;
    std::set<std::string> seen;
    std::size_t pos = 0;
    while (true) {
        auto const open = text.find("<top>", pos);
        if (open == std::string_view::npos) {
            break;
        }
        auto close = text.find("</top>", open);
        if (close == std::string_view::npos) {
            throw ParseError("unterminated <top> block", ParseError::Unit::byte, open);
        }
        auto const block = text.substr(open + 5, close - open - 5);
        Topic topic;
        auto num = field(block, "<num>");
        if (!num) {
            throw ParseError("<top> without <num>", ParseError::Unit::byte, open);
        }
        topic.qid = strip_label(*num, "Number:");
        if (topic.qid.empty()) {
            throw ParseError("empty topic number", ParseError::Unit::byte, open);
        }
        if (!seen.insert(topic.qid).second) {
            throw ParseError("duplicate topic number " + topic.qid, ParseError::Unit::byte, open);
        }
        topic.title = strip_label(field(block, "<title>").value_or(""), "Title:");
        topic.description = strip_label(field(block, "<desc>").value_or(""), "Description:");
        topics.push_back(std::move(topic));
        pos = close + 6;
    }
    return topics;
}

void write_run(std::ostream& out, RankedRun const& run) {
    for (auto const& e : run.entries) {
        fmt::print(out, "{} Q0 {} {} {:.6f} {}\n", run.qid, e.docno, e.rank, e.score, run.tag);
    }
}

void write_runs(std::ostream& out, std::span<RankedRun const> runs) {
    for (auto const& run : runs) {
        write_run(out, run);
    }
}

auto read_runs(std::istream& in) -> std::vector<RankedRun> {
    std::vector<RankedRun> runs;
    std::map<std::string, std::size_t> slot;
    std::vector<std::set<std::string>> docnos;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields(line);
        std::vector<std::string> f;
        for (std::string token; fields >> token;) {
            f.push_back(std::move(token));
        }
        if (f.empty()) {
            continue;
        }
        if (f.size() != 6) {
            throw ParseError("run line must have 6 fields: qid Q0 docno rank score tag",
                             ParseError::Unit::line, line_no);
        }
        RunEntry entry;
        entry.docno = f[2];
        {
            auto const* end = f[3].data() + f[3].size();
            auto [ptr, ec] = std::from_chars(f[3].data(), end, entry.rank);
            if (ec != std::errc{} || ptr != end || entry.rank == 0) {
                throw ParseError("bad rank '" + f[3] + "'", ParseError::Unit::line, line_no);
            }
        }
        try {
            std::size_t used = 0;
            entry.score = std::stod(f[4], &used);
            if (used != f[4].size()) {
                throw std::invalid_argument("trailing characters");
            }
        } catch (std::exception const&) {
            throw ParseError("bad score '" + f[4] + "'", ParseError::Unit::line, line_no);
        }
        auto [it, inserted] = slot.try_emplace(f[0], runs.size());
        if (inserted) {
            runs.push_back(RankedRun{f[0], f[5], {}});
            docnos.emplace_back();
        }
        if (!docnos[it->second].insert(entry.docno).second) {
            throw ParseError("docno " + entry.docno + " repeated for query " + f[0],
                             ParseError::Unit::line, line_no);
        }
        runs[it->second].entries.push_back(std::move(entry));
    }
    return runs;
}

}  // namespace stopir::cli
