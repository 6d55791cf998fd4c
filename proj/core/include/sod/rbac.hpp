#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sod/bitset.hpp"
#include "sod/declarations.hpp"
#include "sod/error.hpp"
#include "sod/symbols.hpp"

namespace sod {

enum class Direction { Seniors, Juniors };

struct Session {
  Index user = 0;
  std::vector<Index> active_roles;  // sorted, unique
};

/// Immutable snapshot of the RBAC entities (permissions, users, roles,
/// UA/PA/RH, sessions) with precomputed hierarchy closures and per-role
/// permission sets. Safe for shared concurrent reads after build().
class RbacModel {
 public:
  /// Validates and freezes the declarations. Rejects duplicate ids,
  /// dangling references and RH cycles.
  static RbacModel build(const Declarations& decls);

  const SymbolTable& permissions() const { return perms_; }
  const SymbolTable& users() const { return users_; }
  const SymbolTable& roles() const { return roles_; }
  const SymbolTable& objects() const { return objects_; }
  const SymbolTable& sessions() const { return session_ids_; }

  Index permission_object(Index p) const { return perm_object_[p]; }
  const std::string& permission_operation(Index p) const {
    return perm_operation_[p];
  }

  std::span<const std::pair<Index, Index>> ua_edges() const { return ua_; }
  std::span<const std::pair<Index, Index>> pa_edges() const { return pa_; }
  std::span<const std::pair<Index, Index>> rh_edges() const { return rh_; }
  const Session& session(Index s) const { return sessions_[s]; }

  /// Reflexive-transitive closure over RH, as a bitset over roles.
  const Bitset& closure(Index role, Direction dir) const {
    return dir == Direction::Juniors ? juniors_[role] : seniors_[role];
  }

  /// Direct (assperms) or hierarchy-extended (authperms) permission set.
  const Bitset& role_permissions(Index role, bool effective) const {
    return effective ? auth_perms_[role] : direct_perms_[role];
  }

  std::span<const Index> direct_role_users(Index role) const {
    return role_users_[role];
  }
  std::span<const Index> user_roles(Index user) const {
    return user_roles_[user];
  }

  /// Users assigned to `role` directly, or (effective) to any senior.
  Bitset role_users(Index role, bool effective) const;

  /// Union of role_permissions over the user's assigned roles.
  Bitset user_permissions(Index user, bool effective) const;

  /// Union of role_permissions over the session's active roles.
  Bitset session_permissions(Index session, bool effective) const;

  // Identifier-based wrappers. Results are sorted by identifier.
  // All throw Error(Unknown*) for undeclared ids.
  std::vector<std::string> hierarchy_closure(std::string_view role,
                                             Direction dir) const;
  std::vector<std::string> role_permissions(std::string_view role,
                                            bool effective) const;
  std::vector<std::string> role_users(std::string_view role,
                                      bool effective) const;
  std::vector<std::string> user_permissions(std::string_view user,
                                            bool effective) const;
  std::vector<std::string> session_permissions(std::string_view session,
                                               bool effective) const;

  Index require_role(std::string_view id) const;
  Index require_user(std::string_view id) const;
  Index require_permission(std::string_view id) const;
  Index require_session(std::string_view id) const;

 private:
  SymbolTable perms_, users_, roles_, objects_, session_ids_;
  std::vector<Index> perm_object_;
  std::vector<std::string> perm_operation_;
  std::vector<std::pair<Index, Index>> ua_, pa_, rh_;
  std::vector<Session> sessions_;

  std::vector<Bitset> juniors_, seniors_;          // per role, reflexive
  std::vector<Bitset> direct_perms_, auth_perms_;  // per role
  std::vector<std::vector<Index>> role_users_;     // per role, direct, sorted
  std::vector<std::vector<Index>> user_roles_;     // per user, sorted

  std::vector<std::string> perm_names_sorted(const Bitset& b) const;
};

}  // namespace sod
