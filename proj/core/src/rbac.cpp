#include "sod/rbac.hpp"

#include <algorithm>
#include <sstream>

namespace sod {

namespace {

std::string join_ids(const SymbolTable& tab, const std::vector<Index>& ids) {
  std::ostringstream os;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) os << ", ";
    os << tab.name(ids[i]);
  }
  return os.str();
}

}  // namespace

RbacModel RbacModel::build(const Declarations& decls) {
  RbacModel m;

  for (const auto& d : decls.perms) {
    if (m.perms_.find(d.id)) {
      throw Error(ErrorKind::DuplicateId, "duplicate permission id: " + d.id);
    }
    Index p = m.perms_.intern(d.id);
    Index o = m.objects_.intern(d.object);
    m.perm_object_.push_back(o);
    m.perm_operation_.push_back(d.operation);
    // (object, operation) pairs must be unique across the model
    for (Index q = 0; q < p; ++q) {
      if (m.perm_object_[q] == o && m.perm_operation_[q] == d.operation) {
        throw Error(ErrorKind::DuplicateId,
                    "permissions " + m.perms_.name(q) + " and " + d.id +
                        " bind the same (object, operation) pair");
      }
    }
  }
  for (const auto& d : decls.users) {
    if (m.users_.find(d.id)) {
      throw Error(ErrorKind::DuplicateId, "duplicate user id: " + d.id);
    }
    m.users_.intern(d.id);
  }
  for (const auto& d : decls.roles) {
    if (m.roles_.find(d.id)) {
      throw Error(ErrorKind::DuplicateId, "duplicate role id: " + d.id);
    }
    m.roles_.intern(d.id);
  }

  auto lookup = [](const SymbolTable& tab, const std::string& id,
                   const char* kind) -> Index {
    auto i = tab.find(id);
    if (!i) {
      throw Error(ErrorKind::DanglingReference,
                  std::string(kind) + " reference to undeclared id: " + id);
    }
    return *i;
  };

  const std::size_t nroles = m.roles_.size();
  const std::size_t nperms = m.perms_.size();
  const std::size_t nusers = m.users_.size();

  m.user_roles_.resize(nusers);
  m.role_users_.resize(nroles);
  for (const auto& d : decls.ua) {
    Index u = lookup(m.users_, d.user, "ua user");
    Index r = lookup(m.roles_, d.role, "ua role");
    m.ua_.emplace_back(u, r);
  }
  std::sort(m.ua_.begin(), m.ua_.end());
  m.ua_.erase(std::unique(m.ua_.begin(), m.ua_.end()), m.ua_.end());
  for (auto [u, r] : m.ua_) {
    m.user_roles_[u].push_back(r);
    m.role_users_[r].push_back(u);
  }
  for (auto& v : m.user_roles_) std::sort(v.begin(), v.end());
  for (auto& v : m.role_users_) std::sort(v.begin(), v.end());

  m.direct_perms_.assign(nroles, Bitset(nperms));
  for (const auto& d : decls.pa) {
    Index r = lookup(m.roles_, d.role, "pa role");
    Index p = lookup(m.perms_, d.perm, "pa permission");
    m.pa_.emplace_back(r, p);
    m.direct_perms_[r].set(p);
  }
  std::sort(m.pa_.begin(), m.pa_.end());
  m.pa_.erase(std::unique(m.pa_.begin(), m.pa_.end()), m.pa_.end());

  std::vector<std::vector<Index>> junior_adj(nroles), senior_adj(nroles);
  for (const auto& d : decls.rh) {
    Index s = lookup(m.roles_, d.senior, "rh senior role");
    Index j = lookup(m.roles_, d.junior, "rh junior role");
    m.rh_.emplace_back(s, j);
  }
  std::sort(m.rh_.begin(), m.rh_.end());
  m.rh_.erase(std::unique(m.rh_.begin(), m.rh_.end()), m.rh_.end());
  for (auto [s, j] : m.rh_) {
    junior_adj[s].push_back(j);
    senior_adj[j].push_back(s);
  }

  // Topological order, juniors before seniors; a leftover means a cycle.
  std::vector<Index> indeg(nroles, 0);
  for (Index r = 0; r < nroles; ++r) {
    indeg[r] = static_cast<Index>(junior_adj[r].size());
  }
  std::vector<Index> topo;
  topo.reserve(nroles);
  std::vector<Index> stack;
  for (Index r = 0; r < nroles; ++r) {
    if (indeg[r] == 0) stack.push_back(r);
  }
  while (!stack.empty()) {
    Index r = stack.back();
    stack.pop_back();
    topo.push_back(r);
    for (Index s : senior_adj[r]) {
      if (--indeg[s] == 0) stack.push_back(s);
    }
  }
  if (topo.size() != nroles) {
    std::vector<Index> on_cycle;
    for (Index r = 0; r < nroles; ++r) {
      if (indeg[r] > 0) on_cycle.push_back(r);
    }
    throw Error(ErrorKind::CycleInHierarchy,
                "cycle in role hierarchy involving: " +
                    join_ids(m.roles_, on_cycle));
  }

  m.juniors_.assign(nroles, Bitset(nroles));
  m.seniors_.assign(nroles, Bitset(nroles));
  m.auth_perms_.assign(nroles, Bitset(nperms));
  for (Index r : topo) {  // juniors first
    m.juniors_[r].set(r);
    m.auth_perms_[r] = m.direct_perms_[r];
    for (Index j : junior_adj[r]) {
      m.juniors_[r] |= m.juniors_[j];
      m.auth_perms_[r] |= m.auth_perms_[j];
    }
  }
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {  // seniors first
    Index r = *it;
    m.seniors_[r].set(r);
    for (Index s : senior_adj[r]) m.seniors_[r] |= m.seniors_[s];
  }

  for (const auto& d : decls.sessions) {
    if (m.session_ids_.find(d.id)) {
      throw Error(ErrorKind::DuplicateId, "duplicate session id: " + d.id);
    }
    Session s;
    s.user = lookup(m.users_, d.user, "session user");
    for (const auto& rid : d.roles) {
      s.active_roles.push_back(lookup(m.roles_, rid, "session role"));
    }
    std::sort(s.active_roles.begin(), s.active_roles.end());
    s.active_roles.erase(
        std::unique(s.active_roles.begin(), s.active_roles.end()),
        s.active_roles.end());
    // Every active role must be assigned to the session's user, directly
    // or through a senior role.
    for (Index r : s.active_roles) {
      bool assigned = false;
      for (Index ar : m.user_roles_[s.user]) {
        if (m.juniors_[ar].test(r)) {
          assigned = true;
          break;
        }
      }
      if (!assigned) {
        throw Error(ErrorKind::InactiveRoleNotAssigned,
                    "session " + d.id + " activates role " +
                        m.roles_.name(r) + " not assigned to user " + d.user);
      }
    }
    m.session_ids_.intern(d.id);
    m.sessions_.push_back(std::move(s));
  }

  return m;
}

Bitset RbacModel::role_users(Index role, bool effective) const {
  Bitset out(users_.size());
  for (Index u : role_users_[role]) out.set(u);
  if (effective) {
    const Bitset& sen = seniors_[role];
    for (auto s = sen.find_first(); s != Bitset::npos; s = sen.find_next(s)) {
      for (Index u : role_users_[s]) out.set(u);
    }
  }
  return out;
}

Bitset RbacModel::user_permissions(Index user, bool effective) const {
  Bitset out(perms_.size());
  for (Index r : user_roles_[user]) out |= role_permissions(r, effective);
  return out;
}

Bitset RbacModel::session_permissions(Index session, bool effective) const {
  Bitset out(perms_.size());
  for (Index r : sessions_[session].active_roles) {
    out |= role_permissions(r, effective);
  }
  return out;
}

Index RbacModel::require_role(std::string_view id) const {
  if (auto i = roles_.find(id)) return *i;
  throw Error(ErrorKind::UnknownRole, "unknown role: " + std::string(id));
}

Index RbacModel::require_user(std::string_view id) const {
  if (auto i = users_.find(id)) return *i;
  throw Error(ErrorKind::UnknownUser, "unknown user: " + std::string(id));
}

Index RbacModel::require_permission(std::string_view id) const {
  if (auto i = perms_.find(id)) return *i;
  throw Error(ErrorKind::UnknownPermission,
              "unknown permission: " + std::string(id));
}

Index RbacModel::require_session(std::string_view id) const {
  if (auto i = session_ids_.find(id)) return *i;
  throw Error(ErrorKind::UnknownSession,
              "unknown session: " + std::string(id));
}

std::vector<std::string> RbacModel::perm_names_sorted(const Bitset& b) const {
  std::vector<std::string> out;
  for (auto i = b.find_first(); i != Bitset::npos; i = b.find_next(i)) {
    out.push_back(perms_.name(static_cast<Index>(i)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> RbacModel::hierarchy_closure(std::string_view role,
                                                      Direction dir) const {
  Index r = require_role(role);
  std::vector<std::string> out;
  const Bitset& b = closure(r, dir);
  for (auto i = b.find_first(); i != Bitset::npos; i = b.find_next(i)) {
    out.push_back(roles_.name(static_cast<Index>(i)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> RbacModel::role_permissions(std::string_view role,
                                                     bool effective) const {
  return perm_names_sorted(role_permissions(require_role(role), effective));
}

std::vector<std::string> RbacModel::role_users(std::string_view role,
                                               bool effective) const {
  Bitset b = role_users(require_role(role), effective);
  std::vector<std::string> out;
  for (auto i = b.find_first(); i != Bitset::npos; i = b.find_next(i)) {
    out.push_back(users_.name(static_cast<Index>(i)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> RbacModel::user_permissions(std::string_view user,
                                                     bool effective) const {
  return perm_names_sorted(user_permissions(require_user(user), effective));
}

std::vector<std::string> RbacModel::session_permissions(
    std::string_view session, bool effective) const {
  return perm_names_sorted(
      session_permissions(require_session(session), effective));
}

}  // namespace sod
