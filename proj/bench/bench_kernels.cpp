// Serial reference vs OpenMP paths of the data-parallel kernels.

#include <benchmark/benchmark.h>

#include "dualgeo/berry.hpp"
#include "dualgeo/chsh.hpp"
#include "dualgeo/kernels.hpp"
#include "dualgeo/lengths.hpp"

namespace {

using dualgeo::kernels::Policy;

Policy policy_of(const benchmark::State& state) {
  return state.range(1) ? Policy::Parallel : Policy::Serial;
}

void BM_ChshScan(benchmark::State& state) {
  const Eigen::MatrixXd e = dualgeo::correlator_table(dualgeo::BipartiteState::singlet(),
                                                      static_cast<int>(state.range(0)));
  for (auto _ : state) {
    if (state.range(1)) {
      benchmark::DoNotOptimize(
          dualgeo::kernels::chsh_scan_best(dualgeo::kernels::chsh_scan_rows(e, Policy::Parallel)));
    } else {
      benchmark::DoNotOptimize(dualgeo::kernels::chsh_scan_reference(e));
    }
  }
}
BENCHMARK(BM_ChshScan)->ArgsProduct({{24, 48}, {0, 1}});

void BM_PathLength(benchmark::State& state) {
  const auto family = dualgeo::DistributionFamily::gaussian();
  Eigen::VectorXd from(2), to(2);
  from << 0.0, 0.5;
  to << 1.0, 2.0;
  const auto path = dualgeo::ParamPath::line(dualgeo::Chart::Raw, from, to,
                                             static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(dualgeo::primal_length(path, family, policy_of(state)));
}
BENCHMARK(BM_PathLength)->ArgsProduct({{1001, 10001}, {0, 1}});

void BM_BerrySurface(benchmark::State& state) {
  const auto family = dualgeo::StateFamily::spin_half();
  const int cells = static_cast<int>(state.range(0));
  const auto mesh = dualgeo::SurfaceMesh::polar_cap(1.0, cells, cells);
  for (auto _ : state)
    benchmark::DoNotOptimize(dualgeo::berry_phase_surface(family, mesh, policy_of(state)));
}
BENCHMARK(BM_BerrySurface)->ArgsProduct({{16, 64}, {0, 1}});

}  // namespace

BENCHMARK_MAIN();
