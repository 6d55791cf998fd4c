#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "common.hpp"
#include "sod/engine.hpp"
#include "sod/oracle.hpp"

using namespace sod;
using namespace sod::testkit;
using testutil::fig1_text;
using testutil::fig1_with_sod;
using testutil::parse_ok;

TEST_CASE("oracle verdicts on the worked example") {
  Declarations d = parse_ok(fig1_text());

  CHECK(brute_force_check_roles(d, {"r2", "r5", "r8"}, true, false)
            .conflicting);
  CHECK(brute_force_check_roles(d, {"r5", "r9"}, true, false).conflicting);
  CHECK_FALSE(
      brute_force_check_roles(d, {"r1", "r3"}, true, false).conflicting);
  CHECK_FALSE(brute_force_check_roles(d, {}, true, false).conflicting);
  CHECK_FALSE(brute_force_check_perms(d, {}, false).conflicting);

  CHECK(brute_force_check_roles(d, {"r2", "r5", "r8"}, true, true)
            .conflicting);
  CHECK(brute_force_check_roles(d, {"r5", "r6", "r8"}, true, true)
            .conflicting);
  CHECK(brute_force_check_users(d, {"u1"}, true, false).conflicting);
  CHECK_FALSE(brute_force_check_session(d, "s1", true, false).conflicting);
}

TEST_CASE("oracle witnesses carry groupings and domains") {
  Declarations d = parse_ok(fig1_text());
  OracleVerdict v = brute_force_check_roles(d, {"r2", "r5", "r8"}, true, true);
  REQUIRE(v.conflicting);
  bool found = false;
  for (const auto& w : v.witnesses) {
    REQUIRE(w.domains.has_value());
    if (*w.domains == std::vector<std::string>{"d1"}) found = true;
    CHECK(w.activities.size() >= 3);
    CHECK(w.groupings.size() == w.activities.size());
  }
  CHECK(found);
}

TEST_CASE("oracle matches the engine on fixture variants") {
  for (const char* sod_line :
       {"sod 3 a2,a4,a10\n", "sod 2 a2,a4,a10\n", "sod 2 a2,a4\n",
        "sod 2 a5,a6\n", "sod 2 a2,a4\nsod 2 a5,a6\n"}) {
    Declarations d = parse_ok(fig1_with_sod(sod_line));
    Policy p = Policy::build(d);
    Engine e(p);
    for (bool eff : {false, true}) {
      for (bool dom : {false, true}) {
        CheckOptions opts{.effective = eff, .domain_mode = dom};
        for (const char* role : {"r1", "r2", "r5", "r6", "r8", "r9"}) {
          CHECK(e.check_role_set({role}, opts).conflicting ==
                brute_force_check_roles(d, {role}, eff, dom).conflicting);
        }
        CHECK(e.check_user_set({"u1"}, opts).conflicting ==
              brute_force_check_users(d, {"u1"}, eff, dom).conflicting);
        CHECK(e.check_session("s1", opts).conflicting ==
              brute_force_check_session(d, "s1", eff, dom).conflicting);
      }
    }
  }
}

TEST_CASE("oracle bounds are enforced") {
  // 17 permissions in the checked union
  {
    std::string text;
    std::vector<std::string> perms;
    for (int i = 1; i <= 17; ++i) {
      text += "perm p" + std::to_string(i) + " o" + std::to_string(i) +
              " use\n";
      perms.push_back("p" + std::to_string(i));
    }
    text += "activity a1\nactivity a2\ngrouping g1 a1 p1\n"
            "grouping g2 a2 p2\nsod 2 a1,a2\n";
    Declarations d = parse_ok(text);
    CHECK_THROWS_AS(brute_force_check_perms(d, perms, false), Error);
  }
  // 9 activities in one constraint
  {
    std::string text = "perm p1 o1 use\n";
    std::string list;
    for (int i = 1; i <= 9; ++i) {
      text += "activity a" + std::to_string(i) + "\n";
      list += (i > 1 ? "," : "") + std::string("a") + std::to_string(i);
    }
    text += "grouping g1 a1 p1\nsod 2 " + list + "\n";
    Declarations d = parse_ok(text);
    CHECK_THROWS_AS(brute_force_check_perms(d, {"p1"}, false), Error);
  }
  // 5 domains
  {
    std::string text =
        "perm p1 o1 use\nactivity a1\nactivity a2\ngrouping g1 a1 p1\n"
        "grouping g2 a2 p1\nsod 2 a1,a2\n";
    for (int i = 1; i <= 5; ++i) {
      text += "domain d" + std::to_string(i) + " o1\n";
    }
    Declarations d = parse_ok(text);
    CHECK_THROWS_AS(brute_force_check_perms(d, {"p1"}, true), Error);
  }
  // unknown targets
  Declarations d = parse_ok(fig1_text());
  CHECK_THROWS_AS(brute_force_check_roles(d, {"nope"}, true, false), Error);
  CHECK_THROWS_AS(brute_force_check_users(d, {"nope"}, true, false), Error);
  CHECK_THROWS_AS(brute_force_check_session(d, "nope", true, false), Error);
}
