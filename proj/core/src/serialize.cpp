#include "sod/serialize.hpp"

#include <algorithm>
#include <sstream>

namespace sod {

namespace {

std::vector<std::string> sorted_unique(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

void write_list(std::ostringstream& os, const std::vector<std::string>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << v[i];
  }
}

}  // namespace

std::string serialize_model(const Declarations& decls) {
  std::ostringstream os;

  auto perms = decls.perms;
  std::sort(perms.begin(), perms.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  for (const auto& p : perms) {
    os << "perm " << p.id << ' ' << p.object << ' ' << p.operation << '\n';
  }

  auto users = decls.users;
  std::sort(users.begin(), users.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  for (const auto& u : users) os << "user " << u.id << '\n';

  auto roles = decls.roles;
  std::sort(roles.begin(), roles.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  for (const auto& r : roles) os << "role " << r.id << '\n';

  {
    std::vector<std::pair<std::string, std::string>> rows;
    for (const auto& e : decls.ua) rows.emplace_back(e.user, e.role);
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    for (const auto& [u, r] : rows) os << "ua " << u << ' ' << r << '\n';
  }
  {
    std::vector<std::pair<std::string, std::string>> rows;
    for (const auto& e : decls.pa) rows.emplace_back(e.role, e.perm);
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    for (const auto& [r, p] : rows) os << "pa " << r << ' ' << p << '\n';
  }
  {
    std::vector<std::pair<std::string, std::string>> rows;
    for (const auto& e : decls.rh) rows.emplace_back(e.senior, e.junior);
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    for (const auto& [s, j] : rows) os << "rh " << s << ' ' << j << '\n';
  }

  auto acts = decls.activities;
  std::sort(acts.begin(), acts.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  for (const auto& a : acts) {
    os << "activity " << a.id;
    if (!a.parent.empty()) os << ' ' << a.parent;
    os << '\n';
  }

  auto groupings = decls.groupings;
  std::sort(groupings.begin(), groupings.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  for (const auto& g : groupings) {
    os << "grouping " << g.id << ' ' << g.activity << ' ';
    write_list(os, sorted_unique(g.perms));
    os << '\n';
  }

  auto domains = decls.domains;
  std::sort(domains.begin(), domains.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  for (const auto& d : domains) {
    os << "domain " << d.id << ' ';
    write_list(os, sorted_unique(d.objects));
    os << '\n';
  }

  {
    std::vector<std::pair<std::vector<std::string>, int>> rows;
    for (const auto& s : decls.sods) {
      rows.emplace_back(sorted_unique(s.activities), s.threshold);
    }
    std::sort(rows.begin(), rows.end());
    for (const auto& [as, n] : rows) {
      os << "sod " << n << ' ';
      write_list(os, as);
      os << '\n';
    }
  }

  auto sessions = decls.sessions;
  std::sort(sessions.begin(), sessions.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  for (const auto& s : sessions) {
    os << "session " << s.id << ' ' << s.user << ' ';
    write_list(os, sorted_unique(s.roles));
    os << '\n';
  }

  return os.str();
}

Declarations to_declarations(const Policy& policy) {
  const RbacModel& rb = policy.rbac;
  const ActivityModel& am = policy.acts;
  Declarations d;

  for (Index p = 0; p < rb.permissions().size(); ++p) {
    d.perms.push_back({rb.permissions().name(p),
                       rb.objects().name(rb.permission_object(p)),
                       rb.permission_operation(p), 0});
  }
  for (Index u = 0; u < rb.users().size(); ++u) {
    d.users.push_back({rb.users().name(u), 0});
  }
  for (Index r = 0; r < rb.roles().size(); ++r) {
    d.roles.push_back({rb.roles().name(r), 0});
  }
  for (auto [u, r] : rb.ua_edges()) {
    d.ua.push_back({rb.users().name(u), rb.roles().name(r), 0});
  }
  for (auto [r, p] : rb.pa_edges()) {
    d.pa.push_back({rb.roles().name(r), rb.permissions().name(p), 0});
  }
  for (auto [s, j] : rb.rh_edges()) {
    d.rh.push_back({rb.roles().name(s), rb.roles().name(j), 0});
  }

  for (Index a = 0; a < am.activities().size(); ++a) {
    if (am.is_synthetic_root(a)) continue;
    ActivityDecl decl;
    decl.id = am.activities().name(a);
    if (auto p = am.parent(a); p && !am.is_synthetic_root(*p)) {
      decl.parent = am.activities().name(*p);
    }
    d.activities.push_back(std::move(decl));
  }
  for (Index g = 0; g < am.groupings().size(); ++g) {
    GroupingDecl decl;
    decl.id = am.groupings().name(g);
    decl.activity = am.activities().name(am.grouping_activity(g));
    for (Index p : am.grouping_permissions(g)) {
      decl.perms.push_back(rb.permissions().name(p));
    }
    d.groupings.push_back(std::move(decl));
  }
  for (Index dom = 0; dom < am.domains().size(); ++dom) {
    DomainDecl decl;
    decl.id = am.domains().name(dom);
    for (Index o : am.domain_objects(dom)) {
      decl.objects.push_back(rb.objects().name(o));
    }
    d.domains.push_back(std::move(decl));
  }
  for (const auto& c : am.constraints()) {
    SodDecl decl;
    decl.threshold = c.threshold;
    for (Index a : c.activities) {
      decl.activities.push_back(am.activities().name(a));
    }
    d.sods.push_back(std::move(decl));
  }
  for (Index s = 0; s < rb.sessions().size(); ++s) {
    SessionDecl decl;
    decl.id = rb.sessions().name(s);
    const Session& sess = rb.session(s);
    decl.user = rb.users().name(sess.user);
    for (Index r : sess.active_roles) {
      decl.roles.push_back(rb.roles().name(r));
    }
    d.sessions.push_back(std::move(decl));
  }
  return d;
}

}  // namespace sod
