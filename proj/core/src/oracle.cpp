#include "sod/oracle.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace sod::testkit {

namespace {

using StrSet = std::set<std::string>;

// A from-scratch evaluation context over the raw declarations. Everything
// is recomputed naively so the optimized engine has an independent referee.
struct Ctx {
  const Declarations& d;
  std::map<std::string, std::string> perm_object;
  std::map<std::string, StrSet> role_direct;   // role -> direct perms
  std::map<std::string, StrSet> role_juniors;  // reflexive closure
  std::map<std::string, StrSet> user_roles;
  std::map<std::string, std::pair<std::string, StrSet>> sessions;
  std::map<std::string, std::string> act_parent;  // only declared parents
  std::map<std::string, StrSet> act_descendants;  // reflexive
  std::map<std::string, std::pair<std::string, StrSet>> groupings;  // act, perms
  std::map<std::string, StrSet> domain_objects;
  std::uint64_t steps = 0;
  std::uint64_t max_steps;

  explicit Ctx(const Declarations& decls, const OracleBounds& b)
      : d(decls), max_steps(b.max_steps) {
    for (const auto& p : d.perms) perm_object[p.id] = p.object;
    for (const auto& r : d.roles) role_direct[r.id];
    for (const auto& pa : d.pa) role_direct[pa.role].insert(pa.perm);
    for (const auto& u : d.users) user_roles[u.id];
    for (const auto& ua : d.ua) user_roles[ua.user].insert(ua.role);
    for (const auto& s : d.sessions) {
      sessions[s.id] = {s.user, StrSet(s.roles.begin(), s.roles.end())};
    }

    std::map<std::string, std::vector<std::string>> rh_down;
    for (const auto& e : d.rh) rh_down[e.senior].push_back(e.junior);
    for (const auto& r : d.roles) {
      StrSet& out = role_juniors[r.id];
      std::vector<std::string> stack{r.id};
      while (!stack.empty()) {
        std::string cur = std::move(stack.back());
        stack.pop_back();
        if (!out.insert(cur).second) continue;
        auto it = rh_down.find(cur);
        if (it == rh_down.end()) continue;
        for (const auto& j : it->second) stack.push_back(j);
      }
    }

    for (const auto& a : d.activities) {
      if (!a.parent.empty()) act_parent[a.id] = a.parent;
    }
    for (const auto& a : d.activities) act_descendants[a.id].insert(a.id);
    for (const auto& a : d.activities) {
      // walk up, adding a to every ancestor's descendant set
      std::string cur = a.id;
      std::set<std::string> guard;
      while (true) {
        auto it = act_parent.find(cur);
        if (it == act_parent.end()) break;
        cur = it->second;
        if (!guard.insert(cur).second) break;  // defensive: cyclic input
        act_descendants[cur].insert(a.id);
      }
    }

    for (const auto& g : d.groupings) {
      groupings[g.id] = {g.activity, StrSet(g.perms.begin(), g.perms.end())};
    }
    for (const auto& dom : d.domains) {
      domain_objects[dom.id] = StrSet(dom.objects.begin(), dom.objects.end());
    }
  }

  void tick() {
    if (++steps > max_steps) {
      throw Error(ErrorKind::InstanceTooLarge,
                  "oracle enumeration exceeded the step budget");
    }
  }

  StrSet role_perms(const std::string& role, bool effective) const {
    auto it = role_direct.find(role);
    if (it == role_direct.end()) {
      throw Error(ErrorKind::UnknownRole, "unknown role: " + role);
    }
    if (!effective) return it->second;
    StrSet out;
    for (const auto& j : role_juniors.at(role)) {
      auto jd = role_direct.find(j);
      if (jd != role_direct.end()) out.insert(jd->second.begin(), jd->second.end());
    }
    return out;
  }

  /// Groupings attached to `a` or any descendant (the star set).
  std::vector<std::string> star(const std::string& a) const {
    std::vector<std::string> out;
    const StrSet& desc = act_descendants.at(a);
    for (const auto& [gid, g] : groupings) {
      if (desc.count(g.first)) out.push_back(gid);
    }
    return out;
  }

  StrSet perm_domains(const std::string& p) const {
    StrSet out;
    auto it = perm_object.find(p);
    if (it == perm_object.end()) {
      throw Error(ErrorKind::UnknownPermission, "unknown permission: " + p);
    }
    for (const auto& [did, objs] : domain_objects) {
      if (objs.count(it->second)) out.insert(did);
    }
    return out;
  }
};

OracleVerdict check(Ctx& ctx, const StrSet& perms, bool domain_mode,
                    const OracleBounds& bounds) {
  if (perms.size() > bounds.max_union_perms) {
    throw Error(ErrorKind::InstanceTooLarge,
                "permission set exceeds the oracle bound");
  }
  if (ctx.domain_objects.size() > bounds.max_domains) {
    throw Error(ErrorKind::InstanceTooLarge,
                "domain count exceeds the oracle bound");
  }
  std::vector<std::string> all_domains;
  for (const auto& [did, objs] : ctx.domain_objects) all_domains.push_back(did);

  OracleVerdict verdict;
  for (std::size_t ci = 0; ci < ctx.d.sods.size(); ++ci) {
    const auto& c = ctx.d.sods[ci];
    std::vector<std::string> acts(c.activities.begin(), c.activities.end());
    std::sort(acts.begin(), acts.end());
    acts.erase(std::unique(acts.begin(), acts.end()), acts.end());
    if (acts.size() > bounds.max_constraint_activities) {
      throw Error(ErrorKind::InstanceTooLarge,
                  "constraint activity count exceeds the oracle bound");
    }
    const auto n = static_cast<std::size_t>(c.threshold);

    // Qualifying groupings per activity, under the given permission set.
    std::vector<std::vector<std::string>> qual(acts.size());
    for (std::size_t i = 0; i < acts.size(); ++i) {
      for (const auto& gid : ctx.star(acts[i])) {
        ctx.tick();
        const StrSet& gp = ctx.groupings.at(gid).second;
        bool covered = std::all_of(gp.begin(), gp.end(), [&](const auto& p) {
          return perms.count(p) > 0;
        });
        if (covered) qual[i].push_back(gid);
      }
    }

    for (std::uint32_t subset = 1; subset < (1u << acts.size()); ++subset) {
      std::vector<std::size_t> picked;
      for (std::size_t i = 0; i < acts.size(); ++i) {
        if (subset & (1u << i)) picked.push_back(i);
      }
      if (picked.size() < n) continue;
      bool feasible = std::all_of(picked.begin(), picked.end(),
                                  [&](std::size_t i) { return !qual[i].empty(); });
      if (!feasible) continue;

      std::vector<std::size_t> choice(picked.size(), 0);
      for (;;) {
        ctx.tick();
        OracleWitness w;
        w.constraint = ci;
        StrSet common;
        bool first_domains = true;
        for (std::size_t i = 0; i < picked.size(); ++i) {
          const std::string& a = acts[picked[i]];
          const std::string& g = qual[picked[i]][choice[i]];
          w.activities.push_back(a);
          w.groupings.emplace_back(a, g);
          if (domain_mode) {
            for (const auto& p : ctx.groupings.at(g).second) {
              StrSet pd = ctx.perm_domains(p);
              if (first_domains) {
                common = std::move(pd);
                first_domains = false;
              } else {
                StrSet inter;
                std::set_intersection(common.begin(), common.end(),
                                      pd.begin(), pd.end(),
                                      std::inserter(inter, inter.begin()));
                common = std::move(inter);
              }
            }
          }
        }
        bool ok = true;
        if (domain_mode) {
          // Literal form: some non-empty candidate D works iff every
          // candidate subset of the common set does, so test the whole set.
          ok = !common.empty();
          if (ok) {
            w.domains = std::vector<std::string>(common.begin(), common.end());
          }
        }
        if (ok) {
          verdict.conflicting = true;
          verdict.witnesses.push_back(std::move(w));
        }
        std::size_t i = 0;
        while (i < choice.size()) {
          if (++choice[i] < qual[picked[i]].size()) break;
          choice[i++] = 0;
        }
        if (i == choice.size()) break;
      }
    }
  }
  return verdict;
}

StrSet union_role_perms(const Ctx& ctx, const std::vector<std::string>& roles,
                        bool effective) {
  StrSet perms;
  for (const auto& r : roles) {
    StrSet rp = ctx.role_perms(r, effective);
    perms.insert(rp.begin(), rp.end());
  }
  return perms;
}

}  // namespace

OracleVerdict brute_force_check_perms(const Declarations& decls,
                                      const std::vector<std::string>& perms,
                                      bool domain_mode,
                                      const OracleBounds& bounds) {
  Ctx ctx(decls, bounds);
  for (const auto& p : perms) {
    if (!ctx.perm_object.count(p)) {
      throw Error(ErrorKind::UnknownPermission, "unknown permission: " + p);
    }
  }
  return check(ctx, StrSet(perms.begin(), perms.end()), domain_mode, bounds);
}

OracleVerdict brute_force_check_roles(const Declarations& decls,
                                      const std::vector<std::string>& roles,
                                      bool effective, bool domain_mode,
                                      const OracleBounds& bounds) {
  Ctx ctx(decls, bounds);
  return check(ctx, union_role_perms(ctx, roles, effective), domain_mode,
               bounds);
}

OracleVerdict brute_force_check_users(const Declarations& decls,
                                      const std::vector<std::string>& users,
                                      bool effective, bool domain_mode,
                                      const OracleBounds& bounds) {
  Ctx ctx(decls, bounds);
  StrSet perms;
  for (const auto& u : users) {
    auto it = ctx.user_roles.find(u);
    if (it == ctx.user_roles.end()) {
      throw Error(ErrorKind::UnknownUser, "unknown user: " + u);
    }
    StrSet up = union_role_perms(
        ctx, {it->second.begin(), it->second.end()}, effective);
    perms.insert(up.begin(), up.end());
  }
  return check(ctx, perms, domain_mode, bounds);
}

OracleVerdict brute_force_check_session(const Declarations& decls,
                                        const std::string& session,
                                        bool effective, bool domain_mode,
                                        const OracleBounds& bounds) {
  Ctx ctx(decls, bounds);
  auto it = ctx.sessions.find(session);
  if (it == ctx.sessions.end()) {
    throw Error(ErrorKind::UnknownSession, "unknown session: " + session);
  }
  return check(ctx,
               union_role_perms(ctx,
                                {it->second.second.begin(),
                                 it->second.second.end()},
                                effective),
               domain_mode, bounds);
}

}  // namespace sod::testkit
