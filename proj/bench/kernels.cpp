#include <benchmark/benchmark.h>

#include "psitrop/psi.hpp"

using namespace psitrop;

namespace {

struct Setup {
  M0nFan m;
  WeightedFan fan;
  LocalRayValues psi;
  explicit Setup(int n) : m(build_m0n(n)), fan(m.fundamental_class()), psi(psi_local_values(m, fan, 1)) {}
  Setup(const Setup&) = delete;
};

const Setup& setup(int n) {
  static std::map<int, Setup> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.try_emplace(n, n).first;
  return it->second;
}

void balance_parallel(benchmark::State& st) {
  const auto& s = setup(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(check_balancing(s.fan).balanced);
}

void balance_serial(benchmark::State& st) {
  const auto& s = setup(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(check_balancing_serial(s.fan).balanced);
}

void divisor_parallel(benchmark::State& st) {
  const auto& s = setup(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(divisor_intersect(s.psi, s.fan).cones.size());
}

void divisor_serial(benchmark::State& st) {
  const auto& s = setup(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(divisor_intersect_serial(s.psi, s.fan).cones.size());
}

}  // namespace

BENCHMARK(balance_parallel)->DenseRange(5, 7)->Unit(benchmark::kMillisecond);
BENCHMARK(balance_serial)->DenseRange(5, 7)->Unit(benchmark::kMillisecond);
BENCHMARK(divisor_parallel)->DenseRange(5, 7)->Unit(benchmark::kMillisecond);
BENCHMARK(divisor_serial)->DenseRange(5, 7)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
