#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "common.hpp"
#include "sod/engine.hpp"
#include "sod/oracle.hpp"

using namespace sod;
using testutil::Rng;
using testutil::pick_ids;
using testutil::small_params;

// The optimized engine against the exhaustive reference, over random
// targets in all four (effective x domain_mode) configurations.
TEST_CASE("engine verdicts equal brute-force verdicts") {
  constexpr std::uint64_t kInstances = 1100;
  std::uint64_t checks = 0;

  for (std::uint64_t seed = 1; seed <= kInstances; ++seed) {
    auto gp = small_params(seed);
    Declarations d = sod::testkit::generate_declarations(gp);
    Policy p = Policy::build(d);
    Engine e(p);
    Rng rng{seed * 31 + 7};

    auto perms_target = [&] {
      return pick_ids(rng, 'p', gp.perms, 1 + rng.below(6));
    };
    auto roles_target = [&] {
      return pick_ids(rng, 'r', gp.roles, 1 + rng.below(3));
    };
    auto users_target = [&] {
      return pick_ids(rng, 'u', gp.users, 1 + rng.below(2));
    };

    for (bool eff : {false, true}) {
      for (bool dom : {false, true}) {
        CheckOptions opts{.effective = eff, .domain_mode = dom};

        auto ps = perms_target();
        bool engine_v = e.check_perm_set(ps, opts).conflicting;
        bool oracle_v =
            sod::testkit::brute_force_check_perms(d, ps, dom).conflicting;
        REQUIRE_MESSAGE(engine_v == oracle_v,
                        "perm-set mismatch at seed " << seed);

        auto rs = roles_target();
        engine_v = e.check_role_set(rs, opts).conflicting;
        oracle_v = sod::testkit::brute_force_check_roles(d, rs, eff, dom)
                       .conflicting;
        REQUIRE_MESSAGE(engine_v == oracle_v,
                        "role-set mismatch at seed " << seed);

        auto us = users_target();
        engine_v = e.check_user_set(us, opts).conflicting;
        oracle_v = sod::testkit::brute_force_check_users(d, us, eff, dom)
                       .conflicting;
        REQUIRE_MESSAGE(engine_v == oracle_v,
                        "user-set mismatch at seed " << seed);

        for (const auto& sdecl : d.sessions) {
          engine_v = e.check_session(sdecl.id, opts).conflicting;
          oracle_v = sod::testkit::brute_force_check_session(d, sdecl.id, eff,
                                                             dom)
                         .conflicting;
          REQUIRE_MESSAGE(engine_v == oracle_v,
                          "session mismatch at seed " << seed);
        }
        checks += 3 + d.sessions.size();
      }
    }
  }
  CHECK(checks > 4 * kInstances * 3);
}
