#include <benchmark/benchmark.h>

#include "zerosum/classify.hpp"
#include "zerosum/invariants.hpp"

using namespace zerosum;

namespace {

void BM_davenport_order10(benchmark::State& state) {
    Group g = Group::metacyclic(2, 5, 4);
    for (auto _ : state) benchmark::DoNotOptimize(small_davenport(g).value);
}
BENCHMARK(BM_davenport_order10);

void BM_davenport_order21(benchmark::State& state) {
    Group g = Group::metacyclic(3, 7, 2);
    for (auto _ : state) benchmark::DoNotOptimize(small_davenport(g).value);
}
BENCHMARK(BM_davenport_order21)->Unit(benchmark::kMillisecond);

void BM_census_extremal_pof_order21(benchmark::State& state) {
    Group g = Group::metacyclic(3, 7, 2);
    for (auto _ : state) benchmark::DoNotOptimize(census_extremal_pof(g).members.size());
}
BENCHMARK(BM_census_extremal_pof_order21)->Unit(benchmark::kMillisecond);

void BM_census_extremal_bigpof_order10(benchmark::State& state) {
    Group g = Group::metacyclic(2, 5, 4);
    CensusOptions opt;
    opt.budget.workers = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(census_big_product_one_free(g, 14, opt).members.size());
}
BENCHMARK(BM_census_extremal_bigpof_order10)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_generate_extremal_forms(benchmark::State& state) {
    Group g = Group::metacyclic(3, 7, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(generate_extremal(g, ExtremalFamily::ProductOneFree).size());
}
BENCHMARK(BM_generate_extremal_forms);

}  // namespace
