/*
 * Copyright 2026 The WAT Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <benchmark/benchmark.h>

#include <random>

#include "wat/alliance.hpp"
#include "wat/models.hpp"
#include "wat/synthetic.hpp"

namespace {

using namespace wat;

const Session& sample_session() {
  static const Session s = [] {
    GeneratorSpec g;
    g.turns = 50;
    return generate_synthetic_corpus(g).front();
  }();
  return s;
}

void BM_HashEmbed(benchmark::State& state) {
  HashEmbeddingProvider p(static_cast<std::size_t>(state.range(0)), 0, 0);
  const auto& text = sample_session().pairs[3].patient_turn.text;
  for (auto _ : state) benchmark::DoNotOptimize(p.hash_text(text));
}
BENCHMARK(BM_HashEmbed)->Arg(64)->Arg(768);

void BM_ScoreTurn(benchmark::State& state) {
  HashEmbeddingProvider p(static_cast<std::size_t>(state.range(0)));
  const auto inv = embed_inventory(p, bundled_inventory());
  const auto turn = p.embed(sample_session().pairs[3].patient_turn.text);
  for (auto _ : state) benchmark::DoNotOptimize(score_turn(turn, inv.patient));
}
BENCHMARK(BM_ScoreTurn)->Arg(64)->Arg(768);

void BM_ScoreSession(benchmark::State& state) {
  HashEmbeddingProvider p(64, 0, 0);
  const AllianceEncoder enc(p, bundled_inventory());
  for (auto _ : state) benchmark::DoNotOptimize(enc.score_session(sample_session()));
}
BENCHMARK(BM_ScoreSession);

Tensor random_input(std::size_t len, std::size_t width) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-1, 1);
  Tensor x({len, width});
  for (double& v : x.values()) v = d(rng);
  return x;
}

void BM_Forward(benchmark::State& state) {
  const auto kind = static_cast<ModelKind>(state.range(0));
  auto m = make_model(default_model_config(kind, 100, 1));
  const auto x = random_input(static_cast<std::size_t>(state.range(1)), 100);
  for (auto _ : state) benchmark::DoNotOptimize(m->logits(x));
  state.SetLabel(std::string(model_kind_name(kind)));
}

void BM_ForwardBackward(benchmark::State& state) {
  const auto kind = static_cast<ModelKind>(state.range(0));
  auto m = make_model(default_model_config(kind, 100, 1));
  const auto x = random_input(static_cast<std::size_t>(state.range(1)), 100);
  Rng rng(2);
  for (auto _ : state) {
    Graph g;
    g.backward(cross_entropy(m->forward(g, x, true, rng), 1));
  }
  state.SetLabel(std::string(model_kind_name(kind)));
}

void model_args(benchmark::internal::Benchmark* b) {
  for (int kind = 0; kind < 3; ++kind)
    for (int len : {10, 50}) b->Args({kind, len});
}
BENCHMARK(BM_Forward)->Apply(model_args)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ForwardBackward)->Apply(model_args)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
