/*
 * Copyright 2026 The brcva Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Serial reference vs OpenMP path loop on a base-scenario cell.

#include "brcva/runner.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace brcva;

const EngineContext& context() {
    static const RunConfig config = load_config(BRCVA_CONFIG_DIR "/table3_base.yaml");
    static const EngineContext ctx(build_scenario(config, config.markets[0], {0, 0, 0.6}, 0.1));
    return ctx;
}

void BM_simulate_paths_serial(benchmark::State& state) {
    const EngineContext& ctx = context();
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(simulate_paths_serial(ctx, 12345, 0, n));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_simulate_paths_openmp(benchmark::State& state) {
    const EngineContext& ctx = context();
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(simulate_paths(ctx, 12345, 0, n));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

} // namespace

BENCHMARK(BM_simulate_paths_serial)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_simulate_paths_openmp)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
