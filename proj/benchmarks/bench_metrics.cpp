// Copyright 2026 the cccp authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include <benchmark/benchmark.h>

#include "cccp/baseline.hpp"
#include "cccp/centrality.hpp"
#include "cccp/nn.hpp"
#include "cccp/pb.hpp"
#include "cccp/rb.hpp"

namespace {

using namespace cccp;

Corpus bench_corpus(int trees, int max_size) {
  SynthConfig config;
  config.n_conversations = trees;
  config.min_size = std::min(8, max_size);
  config.max_size = max_size;
  config.revisit_rate = 0.5;
  config.root_attachment_bias = 0.2;
  config.seed = 99;
  return generate_synthetic(config);
}

void BM_ValidateTree(benchmark::State& state) {
  Corpus corpus = bench_corpus(1, static_cast<int>(state.range(0)));
  std::vector<Post> posts = corpus.trees[0].posts();
  for (auto _ : state) {
    auto tree = ConversationTree::validate(posts);
    benchmark::DoNotOptimize(tree);
  }
}
BENCHMARK(BM_ValidateTree)->Arg(16)->Arg(50)->Arg(100);

void BM_EnumerateFlows(benchmark::State& state) {
  Corpus corpus = bench_corpus(1, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto flows = enumerate_flows(corpus.trees[0]);
    benchmark::DoNotOptimize(flows);
  }
}
BENCHMARK(BM_EnumerateFlows)->Arg(16)->Arg(100);

void BM_BaselineScores(benchmark::State& state) {
  Corpus corpus = bench_corpus(static_cast<int>(state.range(0)), 30);
  for (auto _ : state) {
    auto table = baseline_scores(corpus);
    benchmark::DoNotOptimize(table);
  }
}
BENCHMARK(BM_BaselineScores)->Arg(10)->Arg(50);

void BM_FlowCentrality(benchmark::State& state) {
  Corpus corpus = bench_corpus(1, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto values = flow_centrality(corpus.trees[0]);
    benchmark::DoNotOptimize(values);
  }
}
BENCHMARK(BM_FlowCentrality)->Arg(16)->Arg(100);

void BM_BuildPairs(benchmark::State& state) {
  Corpus corpus = bench_corpus(1, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto pairs = build_pairs(corpus.trees[0]);
    benchmark::DoNotOptimize(pairs);
  }
}
BENCHMARK(BM_BuildPairs)->Arg(16)->Arg(100);

void BM_BuildContexts(benchmark::State& state) {
  Corpus corpus = bench_corpus(1, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto contexts = build_contexts(corpus.trees[0]);
    benchmark::DoNotOptimize(contexts);
  }
}
BENCHMARK(BM_BuildContexts)->Arg(16)->Arg(100);

void BM_NnForward(benchmark::State& state) {
  auto params =
      nn::make_network(63, {64, 64, 32, 32, 16, 21}, nn::Activation::relu,
                       nn::Activation::softmax, 7);
  std::vector<double> x(63, 0.25);
  for (auto _ : state) {
    auto out = nn::forward(params, x);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_NnForward);

void BM_NnTrainEpoch(benchmark::State& state) {
  Corpus corpus = bench_corpus(10, 20);
  RbConfig config;
  PairDataset dataset = build_pair_dataset(corpus, config);
  std::vector<nn::Sample> samples;
  for (const auto& pair : dataset.pairs) {
    samples.push_back(
        {encode_pair(pair, dataset.max_log_delta, config.distance_buckets),
         {static_cast<double>(pair.label)}});
  }
  auto params = nn::make_network(samples.front().x.size(), {16, 1},
                                 nn::Activation::relu, nn::Activation::sigmoid,
                                 3);
  nn::TrainConfig train{0.05, 1, 32, 9};
  for (auto _ : state) {
    auto trained = nn::train(params, samples, nn::Loss::bce, train);
    benchmark::DoNotOptimize(trained);
  }
}
BENCHMARK(BM_NnTrainEpoch);

}  // namespace

BENCHMARK_MAIN();
