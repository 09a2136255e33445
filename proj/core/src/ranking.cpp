#include "stopir/ranking.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <span>
#include <thread>

#include "stopir/diagnostics.hpp"
#include "stopir/error.hpp"

namespace stopir {

auto Query::length() const noexcept -> std::uint64_t {
    std::uint64_t total = 0;
    for (auto const& [term, qtf] : terms) {
        total += qtf;
    }
    return total;
}

auto make_query(std::string qid, std::span<Token const> tokens) -> Query {
    Query q{std::move(qid), {}};
    for (auto const& token : tokens) {
        ++q.terms[token];
    }
    return q;
}

auto make_query(Index const& index, std::string qid, std::string_view text) -> Query {
    auto const tokens = index.analyze(text);
    return make_query(std::move(qid), tokens);
}

void BM25Params::validate() const {
    if (!(k1 >= 0.0) || !(b >= 0.0 && b <= 1.0) || !(k3 >= 0.0)) {
        throw InvalidArgument("BM25 parameters require k1 >= 0, 0 <= b <= 1, k3 >= 0");
    }
}

void TFIDFParams::validate() const {
    if (!(k1 >= 0.0) || !(b >= 0.0 && b <= 1.0)) {
        throw InvalidArgument("TF*IDF parameters require k1 >= 0, 0 <= b <= 1");
    }
}

void DirichletParams::validate() const {
    if (!(mu > 0.0) || !std::isfinite(mu)) {
        throw InvalidArgument("Dirichlet prior mu must be > 0");
    }
}

auto parse_model(std::string_view code) -> std::optional<Model> {
    if (code == "TFIDF") {
        return Model::tfidf;
    }
    if (code == "BM25") {
        return Model::bm25;
    }
    if (code == "KL") {
        return Model::kl;
    }
    return std::nullopt;
}

auto to_string(Model model) -> std::string_view {
    switch (model) {
    case Model::tfidf: return "TFIDF";
    case Model::bm25: return "BM25";
    case Model::kl: return "KL";
    }
    return "";
}

auto run_tag(Model model, std::string_view stoplist_name) -> std::string {
    std::string tag(to_string(model));
    if (!stoplist_name.empty()) {
        tag.append("_").append(stoplist_name);
    }
    return tag;
}

auto run_tag(Model model, Index const& index) -> std::string {
    return run_tag(model, index.stoplist() ? std::string_view(index.stoplist()->name())
                                           : std::string_view{});
}

namespace {

struct Candidate {
    DocId doc;
    double score;
};

// Sorts by score descending, docno ascending, and keeps the first `top_k`.
auto assemble(Index const& index,
              std::vector<Candidate> candidates,
              std::string qid,
              std::string tag,
              std::size_t top_k) -> RankedRun {
    auto better = [&](Candidate const& a, Candidate const& b) {
        if (a.score != b.score) {
            return a.score > b.score;
        }
        return index.docno(a.doc) < index.docno(b.doc);
    };
    std::size_t const keep = std::min(top_k, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                      candidates.end(), better);
    RankedRun run{std::move(qid), std::move(tag), {}};
    run.entries.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) {
        run.entries.push_back({index.docno(candidates[i].doc), candidates[i].score, i + 1});
    }
    return run;
}

void check_top_k(std::size_t top_k) {
    if (top_k == 0) {
        throw InvalidArgument("top_k must be >= 1");
    }
}

using Contribution = std::pair<DocId, double>;

// Correctly rounded sum (Shewchuk's partials), so a document's score depends
// only on the exact sum of its contributions. Contributions that cancel
// exactly, such as idf(df) and idf(N - df) at equal tf and dl, leave scores
// that tie exactly with documents lacking both and fall through to the docno
// tie-break.
auto exact_sum(std::span<double const> values) -> double {
    std::vector<double> partials;
    for (double x : values) {
        std::size_t i = 0;
        for (double y : partials) {
            if (std::abs(x) < std::abs(y)) {
                std::swap(x, y);
            }
            double const hi = x + y;
            double const lo = y - (hi - x);
            if (lo != 0.0) {
                partials[i++] = lo;
            }
            x = hi;
        }
        partials.resize(i);
        partials.push_back(x);
    }
    double sum = 0.0;
    while (!partials.empty()) {
        double const x = partials.back();
        partials.pop_back();
        double const hi = sum + x;
        double const lo = x - (hi - sum);
        sum = hi;
        if (lo != 0.0) {
            // Half-way cases need the next partial to round correctly.
            if (!partials.empty() && ((lo < 0.0 && partials.back() < 0.0) || (lo > 0.0 && partials.back() > 0.0))) {
                double const y = lo * 2.0;
                double const candidate = sum + y;
                if (y == candidate - sum) {
                    sum = candidate;
                }
            }
            break;
        }
    }
    return sum;
}

auto sum_by_document(std::vector<Contribution> contributions) -> std::vector<Candidate> {
    std::sort(contributions.begin(), contributions.end(),
              [](Contribution const& a, Contribution const& b) { return a.first < b.first; });
    std::vector<Candidate> out;
    std::vector<double> values;
    for (std::size_t i = 0; i < contributions.size();) {
        DocId const doc = contributions[i].first;
        values.clear();
        for (; i < contributions.size() && contributions[i].first == doc; ++i) {
            values.push_back(contributions[i].second);
        }
        out.push_back({doc, exact_sum(values)});
    }
    return out;
}

// Shared accumulator for the two models whose candidates are the documents
// matching at least one query term. `weight.prepare(term, qtf)` returns the
// per-posting contribution as a function of (tf, dl).
template <typename Weight>
auto score_matching(Index const& index,
                    Query const& query,
                    std::string tag,
                    std::size_t top_k,
                    Weight&& weight) -> RankedRun {
    std::vector<Contribution> contributions;
    for (auto const& [term, qtf] : query.terms) {
        auto const id = index.find_term(term);
        if (!id) {
            continue;
        }
        auto const term_weight = weight.prepare(*id, qtf);
        for (auto const& p : index.postings(*id)) {
            contributions.emplace_back(p.doc, term_weight(p.tf, index.doc_length(p.doc)));
        }
    }
    return assemble(index, sum_by_document(std::move(contributions)), query.qid, std::move(tag), top_k);
}

}  // namespace

auto score_bm25(Index const& index, Query const& query, BM25Params params, std::size_t top_k)
    -> RankedRun {
    params.validate();
    check_top_k(top_k);
    double const n = static_cast<double>(index.doc_count());
    double const avgdl = index.avg_doc_length();
    struct {
        Index const& index;
        BM25Params const& p;
        double n;
        double avgdl;
        auto prepare(TermId id, std::uint32_t qtf) const {
            double const df = static_cast<double>(index.df(id));
            // Difference of logs keeps idf(df) == -idf(N - df) exactly.
            double const idf = std::log(n - df + 0.5) - std::log(df + 0.5);
            double const q = static_cast<double>(qtf);
            double const query_part = ((p.k3 + 1.0) * q) / (p.k3 + q);
            return [idf, query_part, this](std::uint32_t tf, std::uint32_t dl) {
                double const t = static_cast<double>(tf);
                double const k = p.k1 * ((1.0 - p.b) + p.b * static_cast<double>(dl) / avgdl);
                return idf * (((p.k1 + 1.0) * t) / (k + t)) * query_part;
            };
        }
    } weight{index, params, n, avgdl};
    return score_matching(index, query, run_tag(Model::bm25, index), top_k, weight);
}

auto score_tfidf(Index const& index, Query const& query, TFIDFParams params, std::size_t top_k)
    -> RankedRun {
    params.validate();
    check_top_k(top_k);
    double const n = static_cast<double>(index.doc_count());
    double const avgdl = index.avg_doc_length();
    struct {
        Index const& index;
        TFIDFParams const& p;
        double n;
        double avgdl;
        auto prepare(TermId id, std::uint32_t qtf) const {
            double const idf = std::log(n / static_cast<double>(index.df(id)));
            double const query_weight = static_cast<double>(qtf) * idf;
            return [idf, query_weight, this](std::uint32_t tf, std::uint32_t dl) {
                double const t = static_cast<double>(tf);
                double const doc_tf =
                    (p.k1 * t) / (t + p.k1 * ((1.0 - p.b) + p.b * static_cast<double>(dl) / avgdl));
                return doc_tf * idf * query_weight;
            };
        }
    } weight{index, params, n, avgdl};
    return score_matching(index, query, run_tag(Model::tfidf, index), top_k, weight);
}

auto score_kl_dirichlet(Index const& index,
                        Query const& query,
                        DirichletParams params,
                        std::size_t top_k) -> RankedRun {
    params.validate();
    check_top_k(top_k);
    std::string tag = run_tag(Model::kl, index);

    struct Term {
        TermId id;
        double qtf;
    };
    std::vector<Term> terms;
    double query_length = 0.0;
    for (auto const& [term, qtf] : query.terms) {
        auto const id = index.find_term(term);
        if (!id) {
            warn("query " + query.qid + ": term '" + term
                 + "' does not occur in the collection; dropped");
            continue;
        }
        terms.push_back({*id, static_cast<double>(qtf)});
        query_length += qtf;
    }
    if (terms.empty()) {
        return RankedRun{query.qid, std::move(tag), {}};
    }

    // tf / (mu * p(t|C)) is evaluated as (tf * |C|) / (mu * ctf) and the
    // length term as -log1p(dl / mu), so that mathematically equal scores
    // come out bit-identical and fall back to the docno tie-break.
    double const mu = params.mu;
    double const collection = static_cast<double>(index.total_tokens());
    std::vector<Contribution> contributions;
    for (auto const& t : terms) {
        double const denom = mu * static_cast<double>(index.ctf(t.id));
        for (auto const& p : index.postings(t.id)) {
            contributions.emplace_back(p.doc, t.qtf * std::log1p(static_cast<double>(p.tf) * collection / denom));
        }
    }
    std::vector<double> matched(index.doc_count(), 0.0);
    for (auto const& c : sum_by_document(std::move(contributions))) {
        matched[c.doc] = c.score;
    }
    std::vector<Candidate> candidates(index.doc_count());
    for (DocId d = 0; d < index.doc_count(); ++d) {
        double const dl = static_cast<double>(index.doc_length(d));
        candidates[d] = {d, matched[d] - query_length * std::log1p(dl / mu)};
    }
    return assemble(index, std::move(candidates), query.qid, std::move(tag), top_k);
}

auto score(Index const& index, Query const& query, ModelConfig const& config, std::size_t top_k)
    -> RankedRun {
    switch (config.model) {
    case Model::tfidf: return score_tfidf(index, query, config.tfidf, top_k);
    case Model::bm25: return score_bm25(index, query, config.bm25, top_k);
    case Model::kl: return score_kl_dirichlet(index, query, config.dirichlet, top_k);
    }
    throw InvalidArgument("unknown model");
}

auto run_queries(Index const& index,
                 std::span<Query const> queries,
                 ModelConfig const& config,
                 std::size_t top_k,
                 unsigned threads) -> std::vector<RankedRun> {
    std::vector<RankedRun> runs(queries.size());
    if (threads == 0) {
        threads = std::max(1U, std::thread::hardware_concurrency());
    }
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, queries.size())));
    if (threads <= 1) {
        for (std::size_t i = 0; i < queries.size(); ++i) {
            runs[i] = score(index, queries[i], config, top_k);
        }
        return runs;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> workers;
        for (unsigned w = 0; w < threads; ++w) {
            workers.emplace_back([&, w] {
                try {
                    for (std::size_t i = next++; i < queries.size(); i = next++) {
                        runs[i] = score(index, queries[i], config, top_k);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto const& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return runs;
}

}  // namespace stopir
