#include <benchmark/benchmark.h>

#include "sod/engine.hpp"
#include "sod/generator.hpp"
#include "sod/parser.hpp"

namespace {

sod::Policy make_policy(std::size_t scale) {
  sod::testkit::GeneratorParams gp;
  gp.seed = 7;
  gp.users = 100 * scale;
  gp.roles = 20 * scale;
  gp.perms = 15 * scale;
  gp.activities = 4 * scale;
  gp.groupings = 8 * scale;
  gp.domains = 4;
  gp.constraints = scale;
  gp.plant_conflicts = scale / 8;
  return sod::Policy::build(sod::testkit::generate_declarations(gp));
}

void BM_UserScan(benchmark::State& state) {
  sod::Policy p = make_policy(static_cast<std::size_t>(state.range(0)));
  sod::Engine engine(p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(engine.conflicting_user_indices());
  }
}
BENCHMARK(BM_UserScan)->Arg(8)->Arg(32)->Arg(128);

void BM_IllegalRoles(benchmark::State& state) {
  sod::Policy p = make_policy(static_cast<std::size_t>(state.range(0)));
  sod::Engine engine(p);
  engine.capability_index(true);
  for (auto _ : state) {
    benchmark::DoNotOptimize(engine.illegal_role_indices());
  }
}
BENCHMARK(BM_IllegalRoles)->Arg(8)->Arg(32)->Arg(128);

void BM_RolePairs(benchmark::State& state) {
  sod::Policy p = make_policy(static_cast<std::size_t>(state.range(0)));
  sod::Engine engine(p);
  sod::EnumOptions opts;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        engine.enumerate_conflicting_pairs(sod::PairKind::Roles, opts));
  }
}
BENCHMARK(BM_RolePairs)->Arg(8)->Arg(32)->Arg(128);

void BM_SingleCheck(benchmark::State& state) {
  sod::Policy p = make_policy(64);
  sod::Engine engine(p);
  sod::Bitset perms(p.rbac.permissions().size());
  for (sod::Index i = 0; i < perms.size(); i += 7) perms.set(i);
  for (auto _ : state) {
    benchmark::DoNotOptimize(engine.conflicts_fast(perms, false));
  }
}
BENCHMARK(BM_SingleCheck);

}  // namespace

BENCHMARK_MAIN();
