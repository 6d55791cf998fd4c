#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "common.hpp"
#include "sod/engine.hpp"
#include "sod/serialize.hpp"

using namespace sod;
using testutil::Rng;
using testutil::small_params;

namespace {

constexpr std::uint64_t kInstances = 200;

Bitset random_perm_bits(Rng& rng, std::size_t nperms, std::size_t max_bits) {
  Bitset b(nperms);
  std::size_t count = rng.below(max_bits + 1);
  for (std::size_t i = 0; i < count && nperms > 0; ++i) {
    b.set(rng.below(nperms));
  }
  return b;
}

}  // namespace

TEST_CASE("monotonicity: adding permissions never removes a conflict") {
  for (std::uint64_t seed = 1; seed <= kInstances; ++seed) {
    Policy p = Policy::build(
        sod::testkit::generate_declarations(small_params(seed)));
    Engine e(p);
    Rng rng{seed ^ 0xabcdef};
    const std::size_t nperms = p.rbac.permissions().size();
    for (int i = 0; i < 4; ++i) {
      Bitset small = random_perm_bits(rng, nperms, 8);
      Bitset big = small;
      big |= random_perm_bits(rng, nperms, 8);
      for (bool dom : {false, true}) {
        if (e.conflicts_fast(small, dom)) {
          CHECK(e.conflicts_fast(big, dom));
        }
      }
    }
  }
}

TEST_CASE("pair enumeration equals the direct pairwise definition") {
  for (std::uint64_t seed = 1; seed <= kInstances; ++seed) {
    Policy p = Policy::build(
        sod::testkit::generate_declarations(small_params(seed)));
    Engine e(p);
    for (bool dom : {false, true}) {
      CheckOptions co{.effective = true, .domain_mode = dom};
      EnumOptions eo;
      eo.domain_mode = dom;

      auto illegal_roles = e.illegal_role_indices(co);
      std::set<Index> bad(illegal_roles.begin(), illegal_roles.end());
      std::set<std::pair<Index, Index>> expect;
      const std::size_t nroles = p.rbac.roles().size();
      for (Index x = 0; x < nroles; ++x) {
        if (bad.count(x)) continue;
        for (Index y = x + 1; y < nroles; ++y) {
          if (bad.count(y)) continue;
          Bitset perms = p.rbac.role_permissions(x, true);
          perms |= p.rbac.role_permissions(y, true);
          if (e.conflicts_fast(perms, dom)) expect.emplace(x, y);
        }
      }
      PairResult r = e.enumerate_conflicting_pairs(PairKind::Roles, eo);
      std::set<std::pair<Index, Index>> got(r.pairs.begin(), r.pairs.end());
      CHECK(got == expect);
      CHECK(r.count == expect.size());

      auto illegal_perms = e.illegal_permission_indices(co);
      std::set<Index> badp(illegal_perms.begin(), illegal_perms.end());
      std::set<std::pair<Index, Index>> expectp;
      const std::size_t nperms = p.rbac.permissions().size();
      for (Index x = 0; x < nperms; ++x) {
        if (badp.count(x)) continue;
        for (Index y = x + 1; y < nperms; ++y) {
          if (badp.count(y)) continue;
          Bitset perms(nperms);
          perms.set(x);
          perms.set(y);
          if (e.conflicts_fast(perms, dom)) expectp.emplace(x, y);
        }
      }
      PairResult rp = e.enumerate_conflicting_pairs(PairKind::Permissions, eo);
      std::set<std::pair<Index, Index>> gotp(rp.pairs.begin(), rp.pairs.end());
      CHECK(gotp == expectp);
    }
  }
}

TEST_CASE("any superset of an illegal permission is conflicting") {
  for (std::uint64_t seed = 1; seed <= kInstances; ++seed) {
    Policy p = Policy::build(
        sod::testkit::generate_declarations(small_params(seed)));
    Engine e(p);
    Rng rng{seed ^ 0x5eed};
    const std::size_t nperms = p.rbac.permissions().size();
    for (Index bad : e.illegal_permission_indices()) {
      Bitset b = random_perm_bits(rng, nperms, 6);
      b.set(bad);
      CHECK(e.conflicts_fast(b, false));
    }
  }
}

TEST_CASE("performed activities are closed under parents") {
  for (std::uint64_t seed = 1; seed <= kInstances; ++seed) {
    Policy p = Policy::build(
        sod::testkit::generate_declarations(small_params(seed)));
    Rng rng{seed ^ 0xfeed};
    const std::size_t nperms = p.rbac.permissions().size();
    for (int i = 0; i < 3; ++i) {
      Bitset b = random_perm_bits(rng, nperms, 10);
      auto performed = p.acts.performed_activities(b);
      for (const auto& [a, gs] : performed) {
        CHECK_FALSE(gs.empty());
        if (auto parent = p.acts.parent(a)) {
          CHECK(performed.count(*parent) == 1);
        }
      }
    }
  }
}

TEST_CASE("one all-object domain collapses domain mode to the plain check") {
  for (std::uint64_t seed = 1; seed <= kInstances; ++seed) {
    auto gp = small_params(seed);
    gp.domains = 1;
    gp.objects_per_domain = 0;  // one domain holding every object
    Policy p = Policy::build(sod::testkit::generate_declarations(gp));
    Engine e(p);
    Rng rng{seed ^ 0xd00d};
    const std::size_t nperms = p.rbac.permissions().size();
    for (int i = 0; i < 6; ++i) {
      Bitset b = random_perm_bits(rng, nperms, 10);
      CHECK(e.conflicts_fast(b, true) == e.conflicts_fast(b, false));
    }
  }
}

TEST_CASE("no declared domains means no domain-mode conflicts") {
  for (std::uint64_t seed = 1; seed <= kInstances; ++seed) {
    auto gp = small_params(seed);
    gp.domains = 0;
    Policy p = Policy::build(sod::testkit::generate_declarations(gp));
    Engine e(p);
    Bitset everything(p.rbac.permissions().size());
    everything.set();
    CHECK_FALSE(e.conflicts_fast(everything, true));
  }
}

TEST_CASE("role, user and session checks reduce to permission unions") {
  for (std::uint64_t seed = 1; seed <= kInstances; ++seed) {
    Policy p = Policy::build(
        sod::testkit::generate_declarations(small_params(seed)));
    Engine e(p);
    Rng rng{seed ^ 0xcafe};
    const std::size_t nroles = p.rbac.roles().size();
    for (bool eff : {false, true}) {
      CheckOptions opts{.effective = eff, .domain_mode = false};
      std::vector<std::string> roles;
      Bitset uni(p.rbac.permissions().size());
      for (int i = 0; i < 3; ++i) {
        Index r = static_cast<Index>(rng.below(nroles));
        roles.push_back(p.rbac.roles().name(r));
        uni |= p.rbac.role_permissions(r, eff);
      }
      CHECK(e.check_role_set(roles, opts).conflicting ==
            e.check_perm_bits(uni, opts).conflicting);

      const std::size_t nusers = p.rbac.users().size();
      Index u = static_cast<Index>(rng.below(nusers));
      CHECK(e.check_user_set({p.rbac.users().name(u)}, opts).conflicting ==
            e.check_perm_bits(p.rbac.user_permissions(u, eff), opts)
                .conflicting);

      for (Index s = 0; s < p.rbac.sessions().size(); ++s) {
        CHECK(e.check_session(p.rbac.sessions().name(s), opts).conflicting ==
              e.check_perm_bits(p.rbac.session_permissions(s, eff), opts)
                  .conflicting);
      }
    }
  }
}

TEST_CASE("capability index agrees with recomputed coverage") {
  for (std::uint64_t seed = 1; seed <= kInstances; ++seed) {
    Policy p = Policy::build(
        sod::testkit::generate_declarations(small_params(seed)));
    Engine e(p);
    for (bool eff : {false, true}) {
      const CapabilityIndex& idx = e.capability_index(eff);
      for (Index r = 0; r < p.rbac.roles().size(); ++r) {
        const Bitset& perms = p.rbac.role_permissions(r, eff);
        auto performed = p.acts.performed_activities(perms);
        Bitset expect(p.acts.activities().size());
        for (const auto& [a, gs] : performed) expect.set(a);
        CHECK(idx.covered_activities[r] == expect);

        std::vector<Index> covered;
        for (Index g = 0; g < p.acts.groupings().size(); ++g) {
          if (p.acts.grouping_covered(g, perms)) covered.push_back(g);
        }
        CHECK(idx.covered_groupings[r] == covered);
      }
    }
  }
}

TEST_CASE("generated instances round-trip through the canonical form") {
  for (std::uint64_t seed = 1; seed <= kInstances; ++seed) {
    Declarations d = sod::testkit::generate_declarations(small_params(seed));
    std::string canon = serialize_model(d);
    Declarations again = testutil::parse_ok(canon);
    CHECK(serialize_model(again) == canon);
    CHECK_NOTHROW(Policy::build(again));
  }
}
