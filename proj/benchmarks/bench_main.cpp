#include <benchmark/benchmark.h>

#include <stopir/index.hpp>
#include <stopir/ranking.hpp>
#include <stopir/stoplists.hpp>
#include <stopir/textpipe.hpp>

#include "synthetic.hpp"

namespace {

using namespace stopir;

auto collection(std::size_t docs) -> fixtures::SyntheticCollection const& {
    static std::map<std::size_t, fixtures::SyntheticCollection> cache;
    auto it = cache.find(docs);
    if (it == cache.end()) {
        fixtures::Rng rng(7);
        fixtures::CollectionShape shape;
        shape.docs = docs;
        it = cache.emplace(docs, fixtures::synthetic_collection(rng, shape)).first;
    }
    return it->second;
}

void BM_Analyze(benchmark::State& state) {
    auto const& docs = collection(1000).docs;
    std::size_t bytes = 0;
    for (auto _ : state) {
        for (auto const& d : docs) {
            benchmark::DoNotOptimize(analyze(d.text));
            bytes += d.text.size();
        }
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(bytes));
}
BENCHMARK(BM_Analyze);

void BM_BuildIndex(benchmark::State& state) {
    auto const& docs = collection(static_cast<std::size_t>(state.range(0))).docs;
    auto const list = bundled_stoplist(StoplistCode::CS);
    BuildOptions options;
    options.threads = static_cast<unsigned>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_index(docs, list, options));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildIndex)->Args({5000, 1})->Args({5000, 4})->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_Score(benchmark::State& state) {
    auto const& source = collection(5000);
    static Index const index = build_index(source.docs);
    std::vector<Query> queries;
    for (auto const& t : source.topics) {
        queries.push_back(make_query(index, t.qid, t.title + " " + t.description));
    }
    ModelConfig config;
    config.model = static_cast<Model>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_queries(index, queries, config, 1000, 1));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(queries.size()));
    state.SetLabel(std::string(to_string(config.model)));
}
BENCHMARK(BM_Score)
    ->Arg(static_cast<int>(Model::tfidf))
    ->Arg(static_cast<int>(Model::bm25))
    ->Arg(static_cast<int>(Model::kl))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
