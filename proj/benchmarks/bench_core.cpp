#include <benchmark/benchmark.h>

#include "offswitch/game.hpp"
#include "offswitch/search.hpp"
#include "offswitch/voi.hpp"

using namespace offswitch;

namespace {

Instance instance_of_size(std::size_t states) {
    SearchConfig c;
    c.seed = 3;
    c.states = {states, states};
    c.acts = {4, 4};
    c.signals = {3, 3};
    return random_instance(c, 0);
}

void BM_RiskWeightedEu(benchmark::State& state) {
    const auto [p, ch] = instance_of_size(static_cast<std::size_t>(state.range(0)));
    const auto r = RiskFunction::power(2);
    for (auto _ : state) benchmark::DoNotOptimize(best_act_reu(p, p.prior(), r));
}
BENCHMARK(BM_RiskWeightedEu)->Arg(2)->Arg(8)->Arg(32);

void BM_ValueOfLearningEu(benchmark::State& state) {
    const auto [p, ch] = instance_of_size(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(value_of_learning_eu(p, p.prior(), ch));
}
BENCHMARK(BM_ValueOfLearningEu)->Arg(2)->Arg(8)->Arg(32);

void BM_ValueOfLearningReu(benchmark::State& state) {
    const auto [p, ch] = instance_of_size(static_cast<std::size_t>(state.range(0)));
    const auto rule = DecisionRule::risk_weighted(RiskFunction::power(2));
    for (auto _ : state) benchmark::DoNotOptimize(value_of_learning_rule(p, p.prior(), ch, rule));
}
BENCHMARK(BM_ValueOfLearningReu)->Arg(2)->Arg(8)->Arg(32);

void BM_DeferThreshold(benchmark::State& state) {
    const auto prior = UtilityDistribution::uniform(-10, 90);
    for (auto _ : state) benchmark::DoNotOptimize(defer_threshold_bisection(prior));
}
BENCHMARK(BM_DeferThreshold);

void BM_SearchThroughput(benchmark::State& state) {
    SearchConfig c;
    c.trials = 1000;
    c.rule = SearchRule::risk_weighted(RiskFunction::power(2));
    for (auto _ : state) benchmark::DoNotOptimize(scan_aversion(c));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.trials));
}
BENCHMARK(BM_SearchThroughput)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
