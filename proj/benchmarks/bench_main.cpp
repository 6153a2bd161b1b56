#include <benchmark/benchmark.h>

#include "cho/adjoint.hpp"
#include "cho/config.hpp"
#include "cho/presets.hpp"
#include "cho/spaces.hpp"

namespace {

void BM_AssembleRectangle(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto mesh = cho::build_rectangle(n, n, 1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(cho::assemble(mesh));
  state.SetComplexityN(static_cast<int64_t>(mesh.num_nodes()));
}
BENCHMARK(BM_AssembleRectangle)->Arg(8)->Arg(16)->Arg(32)->Complexity();

cho::RunConfig sized(const char* name, int cells) {
  cho::RunConfig c = cho::preset(name);
  c.cells = {cells, cells};
  return c;
}

void BM_Forward1D(benchmark::State& state) {
  const auto c = sized("default", static_cast<int>(state.range(0)));
  const auto p = cho::build_problem(c);
  const auto u = cho::build_control(c, p);
  for (auto _ : state) benchmark::DoNotOptimize(cho::solve(p, u));
}
BENCHMARK(BM_Forward1D)->Arg(64)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_Forward2D(benchmark::State& state) {
  const auto c = sized("2d", static_cast<int>(state.range(0)));
  const auto p = cho::build_problem(c);
  const auto u = cho::build_control(c, p);
  for (auto _ : state) benchmark::DoNotOptimize(cho::solve(p, u));
}
BENCHMARK(BM_Forward2D)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_Gradient1D(benchmark::State& state) {
  const auto c = sized("default", static_cast<int>(state.range(0)));
  const auto p = cho::build_problem(c);
  const auto u = cho::build_control(c, p);
  const auto cost = cho::build_cost(c, p);
  const auto traj = cho::solve(p, u);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cho::reduced_gradient(p, u, cho::adjoint_solve(p, traj, cost), cost));
  }
}
BENCHMARK(BM_Gradient1D)->Arg(64)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
