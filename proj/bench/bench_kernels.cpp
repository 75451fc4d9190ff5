// OpenMP kernels against their serial reference versions.

#include <benchmark/benchmark.h>

#include <numeric>
#include <random>

#include "xorcode/codec.hpp"
#include "xorcode/gf2.hpp"
#include "xorcode/latin.hpp"
#include "xorcode/security.hpp"

using namespace xorcode;

namespace {

BitMatrix random_matrix(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    BitMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (rng() & 1U) m.set(r, c);
    return m;
}

std::vector<Bytes> random_packets(std::size_t n, std::size_t len, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Bytes> out(n, Bytes(len));
    for (auto& p : out)
        for (auto& b : p) b = static_cast<std::uint8_t>(rng());
    return out;
}

PathPartition round_robin(std::size_t n, std::size_t f) {
    PathPartition part;
    part.sets.resize(f);
    for (std::size_t i = 0; i < n; ++i) part.sets[i % f].push_back(static_cast<PacketIndex>(i + 1));
    return part;
}

void BM_mat_mul(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = random_matrix(n, 1), b = random_matrix(n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(mat_mul(a, b));
}

void BM_mat_mul_reference(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = random_matrix(n, 1), b = random_matrix(n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(reference::mat_mul(a, b));
}

void BM_xor_combine(benchmark::State& state) {
    const std::size_t n = 64;
    const auto len = static_cast<std::size_t>(state.range(0));
    const auto m = random_matrix(n, 3);
    const auto packets = random_packets(n, len, 4);
    for (auto _ : state) benchmark::DoNotOptimize(xor_combine(m, packets));
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * n * len));
}

void BM_xor_combine_reference(benchmark::State& state) {
    const std::size_t n = 64;
    const auto len = static_cast<std::size_t>(state.range(0));
    const auto m = random_matrix(n, 3);
    const auto packets = random_packets(n, len, 4);
    for (auto _ : state) benchmark::DoNotOptimize(reference::xor_combine(m, packets));
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * n * len));
}

// Auto-mode design on 12 packets split over f paths; every subset below size
// f is examined before the search succeeds.
struct TapCase {
    CodingScheme scheme;
    PathPartition part;
};

TapCase tap_case(std::size_t f) {
    const auto design = find_nonsingular_rectangle(12, std::nullopt, 1);
    return {make_scheme(design.rectangle, Mode::balanced_decode), round_robin(12, f)};
}

void BM_min_eavesdrop(benchmark::State& state) {
    const auto c = tap_case(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(min_eavesdrop_paths(c.scheme, c.part));
}

void BM_min_eavesdrop_reference(benchmark::State& state) {
    const auto c = tap_case(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(reference::min_eavesdrop_paths(c.scheme, c.part));
}

}  // namespace

BENCHMARK(BM_mat_mul)->Arg(64)->Arg(256);
BENCHMARK(BM_mat_mul_reference)->Arg(64)->Arg(256);
BENCHMARK(BM_xor_combine)->Arg(1024)->Arg(65536);
BENCHMARK(BM_xor_combine_reference)->Arg(1024)->Arg(65536);
BENCHMARK(BM_min_eavesdrop)->Arg(4)->Arg(6)->Arg(12);
BENCHMARK(BM_min_eavesdrop_reference)->Arg(4)->Arg(6)->Arg(12);

BENCHMARK_MAIN();
