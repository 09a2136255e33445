#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stopir/index.hpp"

namespace stopir {

/// A bag of normalized, stoplist-filtered query terms.
struct Query {
    std::string qid;
    std::map<Token, std::uint32_t> terms;  // term -> qtf

    [[nodiscard]] auto length() const noexcept -> std::uint64_t;
    [[nodiscard]] auto empty() const noexcept -> bool { return terms.empty(); }
};

[[nodiscard]] auto make_query(std::string qid, std::span<Token const> tokens) -> Query;

/// Runs `text` through the same pipeline the index was built with.
[[nodiscard]] auto make_query(Index const& index, std::string qid, std::string_view text) -> Query;

struct BM25Params {
    double k1 = 1.2;
    double b = 0.75;
    double k3 = 7.0;

    void validate() const;
};

/// Document-side tf uses the BM25 saturation with these parameters; the
/// query side is raw qtf. Both sides are weighted by ln(N/df).
struct TFIDFParams {
    double k1 = 1.0;
    double b = 0.3;

    void validate() const;
};

struct DirichletParams {
    double mu = 2000.0;

    void validate() const;
};

struct RunEntry {
    std::string docno;
    double score = 0.0;
    std::size_t rank = 0;  // 1-based

    friend auto operator==(RunEntry const&, RunEntry const&) -> bool = default;
};

/// Scores non-increasing, ties by docno ascending, ranks 1..n.
struct RankedRun {
    std::string qid;
    std::string tag;
    std::vector<RunEntry> entries;

    friend auto operator==(RankedRun const&, RankedRun const&) -> bool = default;
};

inline constexpr std::size_t kDefaultTopK = 1000;

enum class Model { tfidf, bm25, kl };

[[nodiscard]] auto parse_model(std::string_view code) -> std::optional<Model>;
[[nodiscard]] auto to_string(Model model) -> std::string_view;

/// `<MODEL>` or `<MODEL>_<LIST>`, e.g. BM25_CBS.
[[nodiscard]] auto run_tag(Model model, std::string_view stoplist_name = {}) -> std::string;
[[nodiscard]] auto run_tag(Model model, Index const& index) -> std::string;

struct ModelConfig {
    Model model = Model::bm25;
    BM25Params bm25;
    TFIDFParams tfidf;
    DirichletParams dirichlet;
};

/// Okapi BM25 with unclamped Robertson-Sparck Jones idf
/// ln((N - df + 0.5) / (df + 0.5)); negative for df > N/2.
[[nodiscard]] auto score_bm25(Index const& index,
                              Query const& query,
                              BM25Params params = {},
                              std::size_t top_k = kDefaultTopK) -> RankedRun;

[[nodiscard]] auto score_tfidf(Index const& index,
                               Query const& query,
                               TFIDFParams params = {},
                               std::size_t top_k = kDefaultTopK) -> RankedRun;

/// Rank-equivalent form of the Dirichlet-smoothed query likelihood:
///   sum_t qtf * ln(1 + tf / (mu * p(t|C))) + |q| * ln(mu / (mu + dl)).
/// Every document is a candidate. Query terms absent from the collection are
/// dropped with a warning.
[[nodiscard]] auto score_kl_dirichlet(Index const& index,
                                      Query const& query,
                                      DirichletParams params = {},
                                      std::size_t top_k = kDefaultTopK) -> RankedRun;

[[nodiscard]] auto score(Index const& index,
                         Query const& query,
                         ModelConfig const& config,
                         std::size_t top_k = kDefaultTopK) -> RankedRun;

/// Scores every query, in parallel when `threads` != 1 (0 = hardware
/// concurrency). Output order follows `queries`.
[[nodiscard]] auto run_queries(Index const& index,
                               std::span<Query const> queries,
                               ModelConfig const& config,
                               std::size_t top_k = kDefaultTopK,
                               unsigned threads = 1) -> std::vector<RankedRun>;

}  // namespace stopir
