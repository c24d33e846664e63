#include <benchmark/benchmark.h>

#include "zerosum/products.hpp"

using namespace zerosum;

namespace {

Sequence block_sequence(const Group& g, int pairs) {
    // (x y^b) terms plus two constant blocks: the shape the censuses spend
    // most of their time re-deriving.
    Sequence s;
    s.append(g.pair_element(1, 0));
    s.append(g.pair_element(0, 1), pairs);
    s.append(g.pair_element(0, 2), pairs);
    return s;
}

void BM_pi_two_block(benchmark::State& state) {
    Group g = Group::metacyclic(2, 5, 4);
    Sequence s = block_sequence(g, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(pi(g, s));
}
BENCHMARK(BM_pi_two_block)->Arg(4)->Arg(8)->Arg(12);

void BM_pi_n_dense_support(benchmark::State& state) {
    Group g = Group::metacyclic(2, 5, 4);
    Sequence s;
    for (Elem e = 0; e < g.order(); ++e) s.append(e);
    for (auto _ : state) benchmark::DoNotOptimize(pi_n(g, s, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_pi_n_dense_support)->Arg(5)->Arg(10);

void BM_is_big_product_one_free_witness(benchmark::State& state) {
    Group g = Group::metacyclic(3, 7, 2);
    Sequence s;
    s.append(g.pair_element(1, 0), 2);
    s.append(g.pair_element(0, 1), 6);
    s.append(g.identity(), 20);
    for (auto _ : state) benchmark::DoNotOptimize(is_big_product_one_free(g, s));
}
BENCHMARK(BM_is_big_product_one_free_witness);

void BM_scan_push_pop(benchmark::State& state) {
    Group g = Group::metacyclic(2, 5, 4);
    ProductScan::Options opt;
    opt.layer_cap = g.order();
    opt.flag_layer = g.order();
    for (auto _ : state) {
        ProductScan scan(g, opt);
        for (Elem e = 0; e < g.order(); ++e) scan.push(e);
        for (Elem e = 0; e < g.order(); ++e) scan.pop();
        benchmark::DoNotOptimize(scan.state_count());
    }
}
BENCHMARK(BM_scan_push_pop);

}  // namespace
