// Acceptance gate: one pass/fail line per criterion, exit 0 only when all
// criteria hold.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "common.hpp"
#include "sod/engine.hpp"
#include "sod/oracle.hpp"
#include "sod/serialize.hpp"

using namespace sod;
using testutil::Rng;
using testutil::pick_ids;
using testutil::small_params;

namespace {

using Clock = std::chrono::steady_clock;

struct Criterion {
  Criterion(int n, std::string t) : number(n), title(std::move(t)) {}

  int number;
  std::string title;
  bool passed = true;
  std::string detail;
  double seconds = 0;

  void fail(const std::string& why) {
    passed = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
};

void require(Criterion& c, bool cond, const std::string& why) {
  if (!cond) c.fail(why);
}

// ---- criterion 1: worked-example golden suite --------------------------

void criterion_golden(Criterion& c) {
  Policy p = testutil::build_ok(testutil::fig1_text());
  Engine e(p);

  require(c, p.acts.groupings_of("a2") ==
                 std::vector<std::string>{"g2", "g3"},
          "groupings of a2");
  require(c, p.acts.perm_domains_of(p.rbac, "p6") ==
                 std::vector<std::string>{"d1", "d2"},
          "domains of p6");
  require(c, p.acts.perm_domains_of(p.rbac, "p1").empty(), "domains of p1");

  require(c, e.check_role_set({"r2", "r5", "r8"}).conflicting,
          "{r2,r5,r8} conflict");
  require(c, e.check_role_set({"r5", "r9"}).conflicting, "{r5,r9} conflict");
  require(c, e.check_role_set({"r5", "r7", "r8"}).conflicting,
          "{r5,r7,r8} conflict");

  CheckOptions dom{.effective = true, .domain_mode = true};
  auto witness_domains = [&](const ConflictVerdict& v) {
    std::set<std::vector<std::string>> out;
    for (const auto& w : v.witnesses) {
      std::vector<std::string> names;
      if (w.domain_witness) {
        for (Index d : *w.domain_witness) {
          names.push_back(p.acts.domains().name(d));
        }
      }
      std::sort(names.begin(), names.end());
      out.insert(std::move(names));
    }
    return out;
  };
  ConflictVerdict v568 = e.check_role_set({"r5", "r6", "r8"}, dom);
  require(c, v568.conflicting, "{r5,r6,r8} domain conflict");
  require(c, witness_domains(v568).count({"d2"}) == 1,
          "{r5,r6,r8} witness {d2}");
  ConflictVerdict v258 = e.check_role_set({"r2", "r5", "r8"}, dom);
  require(c, v258.conflicting, "{r2,r5,r8} domain conflict");
  require(c, witness_domains(v258) ==
                 std::set<std::vector<std::string>>{{"d1"}},
          "{r2,r5,r8} witness {d1}");

  require(c,
          e.check_perm_set({"p2", "p4", "p6", "p7", "p8", "p9"}).conflicting,
          "six-permission set conflict");

  Policy p2 = testutil::build_ok(testutil::fig1_with_sod("sod 2 a2,a4,a10\n"));
  require(c, Engine(p2).illegal_roles() == std::vector<std::string>{"r9"},
          "threshold 2 makes r9 illegal");

  Policy p3 = testutil::build_ok(
      testutil::fig1_with_sod("sod 3 a2,a4,a10\nsod 2 a5,a6\n"));
  Engine e3(p3);
  require(c, e3.illegal_permissions() == std::vector<std::string>{"p8"},
          "added constraint makes p8 illegal");
  require(c, e3.illegal_roles() == std::vector<std::string>{"r5"},
          "added constraint makes r5 illegal");
}

// ---- criterion 2: oracle equivalence ------------------------------------

void criterion_equivalence(Criterion& c) {
  constexpr std::uint64_t kInstances = 1000;
  std::uint64_t mismatches = 0, checks = 0;
  for (std::uint64_t seed = 1; seed <= kInstances; ++seed) {
    Declarations d = sod::testkit::generate_declarations(small_params(seed));
    Policy p = Policy::build(d);
    Engine e(p);
    Rng rng{seed * 1337 + 1};
    auto gp = small_params(seed);
    for (bool eff : {false, true}) {
      for (bool dom : {false, true}) {
        CheckOptions opts{.effective = eff, .domain_mode = dom};
        auto ps = pick_ids(rng, 'p', gp.perms, 1 + rng.below(6));
        auto rs = pick_ids(rng, 'r', gp.roles, 1 + rng.below(3));
        auto us = pick_ids(rng, 'u', gp.users, 1);
        const std::string session = "s1";
        mismatches +=
            e.check_perm_set(ps, opts).conflicting !=
            sod::testkit::brute_force_check_perms(d, ps, dom).conflicting;
        mismatches += e.check_role_set(rs, opts).conflicting !=
                      sod::testkit::brute_force_check_roles(d, rs, eff, dom)
                          .conflicting;
        mismatches += e.check_user_set(us, opts).conflicting !=
                      sod::testkit::brute_force_check_users(d, us, eff, dom)
                          .conflicting;
        mismatches +=
            e.check_session(session, opts).conflicting !=
            sod::testkit::brute_force_check_session(d, session, eff, dom)
                .conflicting;
        checks += 4;
      }
    }
  }
  c.detail = std::to_string(kInstances) + " instances, " +
             std::to_string(checks) + " checks, " +
             std::to_string(mismatches) + " mismatches";
  require(c, mismatches == 0, "verdict mismatch");
}

// ---- criterion 3: property suite -----------------------------------------

void criterion_properties(Criterion& c) {
  constexpr std::uint64_t kInstances = 200;
  for (std::uint64_t seed = 1; seed <= kInstances; ++seed) {
    auto gp = small_params(seed);
    Declarations d = sod::testkit::generate_declarations(gp);
    Policy p = Policy::build(d);
    Engine e(p);
    Rng rng{seed ^ 0xace};
    const std::size_t nperms = p.rbac.permissions().size();
    const std::size_t nroles = p.rbac.roles().size();

    // monotonicity + illegal-superset
    Bitset small(nperms), extra(nperms);
    for (int i = 0; i < 5; ++i) small.set(rng.below(nperms));
    extra = small;
    for (int i = 0; i < 5; ++i) extra.set(rng.below(nperms));
    for (bool dom : {false, true}) {
      if (e.conflicts_fast(small, dom) && !e.conflicts_fast(extra, dom)) {
        c.fail("monotonicity at seed " + std::to_string(seed));
      }
    }
    for (Index bad : e.illegal_permission_indices()) {
      Bitset b = small;
      b.set(bad);
      if (!e.conflicts_fast(b, false)) {
        c.fail("illegal-superset at seed " + std::to_string(seed));
      }
    }

    // pair symmetry / exactness against the direct pairwise definition
    auto illegal = e.illegal_role_indices();
    std::set<Index> bad_roles(illegal.begin(), illegal.end());
    std::set<std::pair<Index, Index>> expect;
    for (Index x = 0; x < nroles; ++x) {
      if (bad_roles.count(x)) continue;
      for (Index y = x + 1; y < nroles; ++y) {
        if (bad_roles.count(y)) continue;
        Bitset u = p.rbac.role_permissions(x, true);
        u |= p.rbac.role_permissions(y, true);
        if (e.conflicts_fast(u, false)) expect.emplace(x, y);
      }
    }
    PairResult r = e.enumerate_conflicting_pairs(PairKind::Roles, {});
    std::set<std::pair<Index, Index>> got(r.pairs.begin(), r.pairs.end());
    if (got != expect) c.fail("pair set at seed " + std::to_string(seed));

    // ancestor closure of performed activities
    auto performed = p.acts.performed_activities(extra);
    for (const auto& [a, gs] : performed) {
      if (auto parent = p.acts.parent(a); parent && !performed.count(*parent)) {
        c.fail("ancestor closure at seed " + std::to_string(seed));
      }
    }

    // reduction identities
    for (bool eff : {false, true}) {
      CheckOptions opts{.effective = eff, .domain_mode = false};
      Index x = static_cast<Index>(rng.below(nroles));
      Index y = static_cast<Index>(rng.below(nroles));
      Bitset u = p.rbac.role_permissions(x, eff);
      u |= p.rbac.role_permissions(y, eff);
      if (e.check_role_set(
               {p.rbac.roles().name(x), p.rbac.roles().name(y)}, opts)
              .conflicting != e.check_perm_bits(u, opts).conflicting) {
        c.fail("role reduction at seed " + std::to_string(seed));
      }
      Index usr = static_cast<Index>(rng.below(p.rbac.users().size()));
      if (e.check_user_set({p.rbac.users().name(usr)}, opts).conflicting !=
          e.check_perm_bits(p.rbac.user_permissions(usr, eff), opts)
              .conflicting) {
        c.fail("user reduction at seed " + std::to_string(seed));
      }
    }

    // capability-index soundness
    const CapabilityIndex& idx = e.capability_index(true);
    for (Index role = 0; role < nroles; ++role) {
      const Bitset& rp = p.rbac.role_permissions(role, true);
      Bitset cov(p.acts.activities().size());
      for (const auto& [a, gs] : p.acts.performed_activities(rp)) cov.set(a);
      if (idx.covered_activities[role] != cov) {
        c.fail("capability index at seed " + std::to_string(seed));
      }
    }

    // domain-collapse equivalence (single all-object domain)
    auto gp1 = gp;
    gp1.domains = 1;
    gp1.objects_per_domain = 0;
    Policy p1 = Policy::build(sod::testkit::generate_declarations(gp1));
    Engine e1(p1);
    Bitset probe(p1.rbac.permissions().size());
    for (int i = 0; i < 8; ++i) probe.set(rng.below(probe.size()));
    if (e1.conflicts_fast(probe, true) != e1.conflicts_fast(probe, false)) {
      c.fail("domain collapse at seed " + std::to_string(seed));
    }

    // empty-domain exclusion
    auto gp0 = gp;
    gp0.domains = 0;
    Policy p0 = Policy::build(sod::testkit::generate_declarations(gp0));
    Bitset all(p0.rbac.permissions().size());
    all.set();
    if (Engine(p0).conflicts_fast(all, true)) {
      c.fail("empty-domain exclusion at seed " + std::to_string(seed));
    }
    if (c.detail.size() > 400) break;  // enough failure context
  }
  if (c.passed) {
    c.detail = std::to_string(kInstances) +
               " instances per property, 0 violations";
  }
}

// ---- criteria 4 and 5: scale feasibility, CLI determinism ----------------

int run_cli(const std::string& args, const std::string& out_file) {
  std::string cmd = std::string(SODCHECK_CLI_PATH) + " " + args + " > " +
                    out_file + " 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

void criterion_scale(Criterion& c, Criterion& determinism) {
  sod::testkit::GeneratorParams gp;
  gp.seed = 42;
  gp.users = 90287;
  gp.roles = 16755;
  gp.perms = 12314;
  gp.activities = 298;
  gp.groupings = 600;
  gp.domains = 67;
  gp.constraints = 437;
  gp.plant_conflicts = 8;

  sod::testkit::PlantedConflicts planted;
  std::string doc = sod::testkit::generate_instance(gp, &planted);
  {
    std::ofstream out("acceptance_scale.model", std::ios::binary);
    out << doc;
  }

  auto start = Clock::now();
  int rc8 = run_cli("analyze acceptance_scale.model --pairs both --threads 8",
                    "acceptance_scale_t8.txt");
  double secs = std::chrono::duration<double>(Clock::now() - start).count();
  require(c, rc8 == 1, "scale analyze exit code");
  require(c, secs < 300,
          "scale analyze took " + std::to_string(secs) + "s");

  int rc1 = run_cli("analyze acceptance_scale.model --pairs both --threads 1",
                    "acceptance_scale_t1.txt");
  require(c, rc1 == 1, "scale analyze exit code (single thread)");
  std::string t8 = testutil::read_file("acceptance_scale_t8.txt");
  std::string t1 = testutil::read_file("acceptance_scale_t1.txt");
  require(c, !t8.empty() && t8 == t1, "thread-count-independent report");

  // planted recovery, via the library on the same document
  Policy p = testutil::build_ok(doc);
  Engine e(p);
  auto illegal = e.illegal_permissions();
  PairResult pairs = e.enumerate_conflicting_pairs(PairKind::Roles, {});
  c.detail = "analyze --pairs both in " + std::to_string(secs) + "s, " +
             std::to_string(pairs.count) + " role pairs, planted " +
             std::to_string(planted.illegal_permissions.size()) +
             "+" + std::to_string(planted.role_pairs.size()) + " recovered";
  for (const auto& q : planted.illegal_permissions) {
    if (!std::binary_search(illegal.begin(), illegal.end(), q)) {
      c.fail("planted illegal permission " + q + " not recovered");
    }
  }
  std::set<std::pair<std::string, std::string>> found;
  for (auto [a, b] : pairs.pairs) {
    std::string x = p.rbac.roles().name(a), y = p.rbac.roles().name(b);
    if (y < x) std::swap(x, y);
    found.emplace(std::move(x), std::move(y));
  }
  for (auto [a, b] : planted.role_pairs) {
    if (b < a) std::swap(a, b);
    if (!found.count({a, b})) {
      c.fail("planted role pair " + a + "/" + b + " not recovered");
    }
  }

  // criterion 5 reuses the scale outputs plus a listing-heavy small run
  int rc_a = run_cli("analyze " + testutil::fig1_path() +
                         " --pairs both --list-pairs --format csv --threads 1",
                     "acceptance_fig1_a.csv");
  int rc_b = run_cli("analyze " + testutil::fig1_path() +
                         " --pairs both --list-pairs --format csv --threads 8",
                     "acceptance_fig1_b.csv");
  require(determinism, rc_a == 1 && rc_b == 1, "fig1 analyze exit codes");
  require(determinism,
          testutil::read_file("acceptance_fig1_a.csv") ==
              testutil::read_file("acceptance_fig1_b.csv"),
          "fig1 reports differ across thread settings");
  require(determinism, t8 == t1, "scale reports differ across threads");
  int rc_c = run_cli("analyze acceptance_scale.model --pairs both --threads 8",
                     "acceptance_scale_t8b.txt");
  require(determinism, rc_c == 1, "repeat run exit code");
  require(determinism,
          testutil::read_file("acceptance_scale_t8b.txt") == t8,
          "repeat run bytes differ");
  if (determinism.passed) {
    determinism.detail = "byte-identical across repeats and --threads 1/8";
  }
  for (const char* f :
       {"acceptance_scale.model", "acceptance_scale_t8.txt",
        "acceptance_scale_t1.txt", "acceptance_scale_t8b.txt",
        "acceptance_fig1_a.csv", "acceptance_fig1_b.csv"}) {
    std::remove(f);
  }
}

// ---- criterion 6: round-trip fixpoint -------------------------------------

void criterion_roundtrip(Criterion& c) {
  auto fixpoint = [&](const std::string& text, const std::string& label) {
    Declarations d1 = testutil::parse_ok(text);
    std::string canon = serialize_model(d1);
    Declarations d2 = testutil::parse_ok(canon);
    if (serialize_model(d2) != canon) c.fail("fixpoint fails for " + label);
  };
  fixpoint(testutil::fig1_text(), "the worked example");
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    fixpoint(sod::testkit::generate_instance(small_params(seed)),
             "generated seed " + std::to_string(seed));
  }
  if (c.passed) c.detail = "worked example + 100 generated instances";
}

}  // namespace

int main() {
  std::vector<Criterion> cs = {
      {1, "worked-example golden suite"},
      {2, "oracle equivalence"},
      {3, "property suite"},
      {4, "scale feasibility"},
      {5, "output determinism"},
      {6, "round-trip fixpoint"},
  };

  auto timed = [](Criterion& c, auto&& fn) {
    auto start = Clock::now();
    try {
      fn(c);
    } catch (const std::exception& e) {
      c.fail(std::string("exception: ") + e.what());
    }
    c.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  };

  timed(cs[0], criterion_golden);
  if (cs[0].passed && cs[0].seconds >= 1.0) {
    cs[0].fail("golden suite exceeded 1 s");
  }
  timed(cs[1], criterion_equivalence);
  if (cs[1].passed && cs[1].seconds >= 300.0) {
    cs[1].fail("equivalence run exceeded 5 min");
  }
  timed(cs[2], criterion_properties);
  timed(cs[3], [&](Criterion& c) { criterion_scale(c, cs[4]); });
  cs[4].seconds = cs[3].seconds;
  timed(cs[5], criterion_roundtrip);

  bool all = true;
  for (const auto& c : cs) {
    std::ostringstream line;
    line << (c.passed ? "PASS" : "FAIL") << " criterion " << c.number << ": "
         << c.title;
    if (!c.detail.empty()) line << " (" << c.detail << ")";
    line.setf(std::ios::fixed);
    line.precision(2);
    line << " [" << c.seconds << "s]";
    std::cout << line.str() << '\n';
    all = all && c.passed;
  }
  return all ? 0 : 1;
}
